#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rfid {

/// Regular 2D sampling lattice. Sample (i, j) sits at
/// (origin_x + i*dx, origin_y + j*dy); values are stored row-major with Y as
/// the slow index.
struct GridSpec
{
    std::size_t nx = 0;
    std::size_t ny = 0;
    double dx = 1.0;
    double dy = 1.0;
    double origin_x = 0.0;
    double origin_y = 0.0;

    /// Throws rfid::Error unless nx, ny >= 2 and dx, dy > 0 (all finite).
    void validate() const;

    std::size_t size() const noexcept { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx + i; }
    double x(std::size_t i) const noexcept { return origin_x + static_cast<double>(i) * dx; }
    double y(std::size_t j) const noexcept { return origin_y + static_cast<double>(j) * dy; }

    /// Physical extents D1 = nx*dx and D2 = ny*dy.
    double extent_x() const noexcept { return static_cast<double>(nx) * dx; }
    double extent_y() const noexcept { return static_cast<double>(ny) * dy; }

    bool operator==(const GridSpec&) const = default;
};

/// Finite real values sampled on a GridSpec. Immutable once built.
class GridField
{
  public:
    GridField() = default;
    /// Throws rfid::Error on a size mismatch or a non-finite value.
    GridField(GridSpec spec, std::vector<double> values);

    /// Field with every sample equal to `value`.
    static GridField constant(const GridSpec& spec, double value);

    const GridSpec& spec() const noexcept { return spec_; }
    std::span<const double> values() const noexcept { return values_; }
    double at(std::size_t i, std::size_t j) const noexcept { return values_[spec_.index(i, j)]; }

  private:
    GridSpec spec_;
    std::vector<double> values_;
};

struct ScatteredPoint
{
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

struct ScatteredField
{
    std::vector<ScatteredPoint> points;
};

/// Realizations of one random field sharing a single GridSpec.
class Ensemble
{
  public:
    Ensemble() = default;
    /// Throws rfid::Error if `fields` is empty, specs differ, or the label
    /// count is neither zero nor fields.size().
    explicit Ensemble(std::vector<GridField> fields, std::vector<std::string> labels = {});

    const GridSpec& spec() const { return fields_.front().spec(); }
    std::size_t size() const noexcept { return fields_.size(); }
    const GridField& operator[](std::size_t i) const { return fields_[i]; }
    const std::vector<GridField>& fields() const noexcept { return fields_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

  private:
    std::vector<GridField> fields_;
    std::vector<std::string> labels_;
};

struct ProjectionMethod
{
    enum class Kind { nearest, inverse_distance };

    Kind kind = Kind::inverse_distance;
    double power = 2.0;
    std::size_t neighbors = 4;

    static ProjectionMethod nearest() { return {Kind::nearest, 2.0, 1}; }
    static ProjectionMethod inverse_distance(double p = 2.0, std::size_t k = 4)
    {
        return {Kind::inverse_distance, p, k};
    }
};

/// Interpolates scattered samples onto the nodes of `spec`.
///
/// Nearest assigns each node the value of its closest point (lowest index on
/// ties). Inverse distance averages the k closest points with weights
/// 1/d^p; a point coincident with a node is taken verbatim. Nodes outside the
/// data bounding box inflated by one cell raise "extrapolation beyond data
/// support".
GridField project_scattered(const ScatteredField& data, const GridSpec& spec,
                            const ProjectionMethod& method = ProjectionMethod::inverse_distance());

/// Drops floor(fraction*nx) columns from each X edge and floor(fraction*ny)
/// rows from each Y edge, shifting the origin to the first kept sample.
GridField trim_margin(const GridField& field, double fraction);

struct SpatialStats
{
    double mean = 0.0;
    double variance = 0.0;
    /// sqrt(variance)/mean; empty when the mean is exactly zero.
    std::optional<double> cv;
};

SpatialStats spatial_stats(const GridField& field);

/// "n/a" for an undefined coefficient of variation, the number otherwise.
std::string format_cv(const std::optional<double>& cv);

}  // namespace rfid
