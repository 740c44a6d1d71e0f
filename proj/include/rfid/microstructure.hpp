#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rfid/grid.hpp"
#include "rfid/models.hpp"

namespace rfid {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

/// Raster Voronoi partition: every grid node belongs to its nearest seed.
struct Tessellation
{
    std::size_t n_grains = 0;
    std::vector<Point2> seeds;
    GridSpec spec;
    std::vector<std::uint32_t> grain_map;
    double width = 0.0;
    double height = 0.0;

    std::uint32_t grain_at(std::size_t i, std::size_t j) const { return grain_map[spec.index(i, j)]; }
    /// Node count per grain.
    std::vector<std::size_t> grain_sizes() const;
    /// Grain indices as a real-valued field (for RFGRID export).
    GridField as_field() const;
};

/// Nearest-seed assignment of every node; ties go to the lowest seed index.
/// Grains may come out empty here.
Tessellation assign_grains(std::vector<Point2> seeds, const GridSpec& spec);

/// Seeds uniform over the domain covered by the grid cells (each node is the
/// center of a dx*dy cell). Seeds of empty grains are redrawn up to
/// `max_retries` rounds before failing with "degenerate tessellation".
Tessellation voronoi_tessellation(std::size_t n_grains, const GridSpec& spec, std::uint64_t seed,
                                  std::uint64_t stream = 0, std::size_t max_retries = 100);

/// sqrt((4/pi) * area / n_grains).
double equivalent_grain_diameter(double domain_area, std::size_t n_grains);

/// Bunge Euler angles (z-x-z), radians.
struct Orientation
{
    double phi1 = 0.0;
    double Phi = 0.0;
    double phi2 = 0.0;
};

enum class OrientationSampling {
    /// Phi with density sin(Phi)/2: orientations uniform on the rotation group.
    sphere_uniform,
    /// Phi uniform on [0, pi].
    literal_uniform,
};

std::vector<Orientation> sample_orientations(std::size_t n_grains, std::uint64_t seed,
                                             OrientationSampling mode = OrientationSampling::sphere_uniform,
                                             std::uint64_t stream = 0);

/// Matrix taking crystal coordinates to sample coordinates.
Mat3 crystal_to_sample(const Orientation& o);

enum class SlipFamily { plane110, plane112 };

struct SlipSystem
{
    Vec3 normal;     // unit slip plane normal n
    Vec3 direction;  // unit slip direction m
    SlipFamily family = SlipFamily::plane110;
};

/// The 12 {110}<111> and 12 {112}<111> systems in crystal coordinates.
///
/// {110} planes in the order (011) (01-1) (101) (10-1) (110) (1-10), two
/// <111> directions each; then the 12 {112} planes, one <111> direction
/// each. Vectors are normalized and signed so the first nonzero component is
/// positive.
const std::vector<SlipSystem>& slip_systems_bcc24();

/// R = (m n^T + n m^T) / 2.
Mat3 schmid_tensor(const SlipSystem& sys);

/// tau = R : sigma with the system rotated into the sample frame.
double resolved_shear(const Mat3& stress, const SlipSystem& sys, const Orientation& orientation);

/// Unit uniaxial tension along sample axis `axis` (0, 1, 2).
Mat3 uniaxial_stress(int axis);

struct SurrogateParams
{
    double base_mean = 0.0;
    double schmid_gain = 0.0;
    PsdModel intra_model;
    std::uint64_t seed = 0;
    /// Realization index used for the intra-grain synthesis stream.
    std::uint64_t realization = 0;
    /// Sample axis of the unit tension used for the grain proxy (1 = Y).
    int loading_axis = 1;
};

/// Per-grain proxy 1 / max_systems |tau| under unit uniaxial tension,
/// recentered to zero mean over grains.
std::vector<double> grain_response_proxy(const std::vector<Orientation>& orientations,
                                         int loading_axis = 1);

/// base_mean + schmid_gain * proxy(grain(node)) + one synthesized
/// realization of intra_model. A desk-scale stand-in for FE stress fields.
GridField surrogate_stress_field(const Tessellation& tess, const std::vector<Orientation>& orientations,
                                 const SurrogateParams& params);

/// CSV with header `grain,phi1,Phi,phi2`.
std::string orientations_csv(const std::vector<Orientation>& orientations);

}  // namespace rfid
