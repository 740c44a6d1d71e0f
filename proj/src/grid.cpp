#include "rfid/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rfid/error.hpp"
#include "rfid/grid_io.hpp"

namespace rfid {

void GridSpec::validate() const
{
    if (nx < 2 || ny < 2)
        throw Error("grid must have at least 2x2 samples, got " + std::to_string(nx) + "x" +
                    std::to_string(ny));
    if (!(std::isfinite(dx) && dx > 0.0) || !(std::isfinite(dy) && dy > 0.0))
        throw Error("grid spacing must be positive and finite");
    if (!std::isfinite(origin_x) || !std::isfinite(origin_y))
        throw Error("grid origin must be finite");
}

GridField::GridField(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values))
{
    spec_.validate();
    if (values_.size() != spec_.size())
        throw Error("grid expects " + std::to_string(spec_.size()) + " values, got " +
                    std::to_string(values_.size()));
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k]))
            throw Error("non-finite grid value at sample " + std::to_string(k));
    }
}

GridField GridField::constant(const GridSpec& spec, double value)
{
    spec.validate();
    return GridField(spec, std::vector<double>(spec.size(), value));
}

Ensemble::Ensemble(std::vector<GridField> fields, std::vector<std::string> labels)
    : fields_(std::move(fields)), labels_(std::move(labels))
{
    if (fields_.empty())
        throw Error("ensemble must hold at least one realization");
    for (const auto& f : fields_) {
        if (!(f.spec() == fields_.front().spec()))
            throw Error("ensemble members must share one grid spec");
    }
    if (!labels_.empty() && labels_.size() != fields_.size())
        throw Error("ensemble label count does not match realization count");
}

GridField project_scattered(const ScatteredField& data, const GridSpec& spec,
                            const ProjectionMethod& method)
{
    spec.validate();
    if (data.points.empty())
        throw Error("no data");
    if (method.kind == ProjectionMethod::Kind::inverse_distance) {
        if (!(method.power > 0.0))
            throw Error("inverse-distance power must be positive");
        if (method.neighbors < 1)
            throw Error("inverse-distance neighbor count must be at least 1");
    }

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& p : data.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.value))
            throw Error("scattered data must be finite");
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    xmin -= spec.dx;
    xmax += spec.dx;
    ymin -= spec.dy;
    ymax += spec.dy;

    const std::size_t npts = data.points.size();
    const std::size_t k = method.kind == ProjectionMethod::Kind::nearest
                              ? 1
                              : std::min(method.neighbors, npts);

    std::vector<double> out(spec.size());
    std::vector<std::pair<double, std::size_t>> dist(npts);
    for (std::size_t j = 0; j < spec.ny; ++j) {
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const double x = spec.x(i);
            const double y = spec.y(j);
            if (x < xmin || x > xmax || y < ymin || y > ymax) {
                std::ostringstream msg;
                msg << "extrapolation beyond data support at node (" << i << ", " << j << ")";
                throw Error(msg.str());
            }
            for (std::size_t p = 0; p < npts; ++p) {
                const double ddx = data.points[p].x - x;
                const double ddy = data.points[p].y - y;
                dist[p] = {ddx * ddx + ddy * ddy, p};
            }
            std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                              dist.end());

            double value;
            if (k == 1 || dist[0].first == 0.0) {
                value = data.points[dist[0].second].value;
            } else {
                double wsum = 0.0, vsum = 0.0;
                for (std::size_t n = 0; n < k; ++n) {
                    const double w = std::pow(dist[n].first, -0.5 * method.power);
                    wsum += w;
                    vsum += w * data.points[dist[n].second].value;
                }
                value = vsum / wsum;
            }
            out[spec.index(i, j)] = value;
        }
    }
    return GridField(spec, std::move(out));
}

GridField trim_margin(const GridField& field, double fraction)
{
    if (!(fraction >= 0.0 && fraction < 0.5))
        throw Error("trim fraction must lie in [0, 0.5)");
    const auto& in = field.spec();
    const auto cut_x = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(in.nx)));
    const auto cut_y = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(in.ny)));
    if (in.nx < 2 * cut_x + 2 || in.ny < 2 * cut_y + 2)
        throw Error("over-trimmed");

    GridSpec out = in;
    out.nx = in.nx - 2 * cut_x;
    out.ny = in.ny - 2 * cut_y;
    out.origin_x = in.x(cut_x);
    out.origin_y = in.y(cut_y);

    std::vector<double> values;
    values.reserve(out.size());
    for (std::size_t j = 0; j < out.ny; ++j) {
        for (std::size_t i = 0; i < out.nx; ++i)
            values.push_back(field.at(i + cut_x, j + cut_y));
    }
    return GridField(out, std::move(values));
}

SpatialStats spatial_stats(const GridField& field)
{
    const auto v = field.values();
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double z : v)
        sum += z;
    const double mean = sum / n;

    // Two-pass with the residual-mean correction.
    double sq = 0.0, lin = 0.0;
    for (double z : v) {
        const double d = z - mean;
        sq += d * d;
        lin += d;
    }
    const double variance = std::max(0.0, sq / n - (lin / n) * (lin / n));

    SpatialStats s{mean, variance, std::nullopt};
    if (mean != 0.0)
        s.cv = std::sqrt(variance) / mean;
    return s;
}

std::string format_cv(const std::optional<double>& cv)
{
    if (!cv)
        return "n/a";
    return format_number(*cv);
}

}  // namespace rfid
