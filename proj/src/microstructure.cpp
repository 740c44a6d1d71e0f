#include "rfid/microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rfid/error.hpp"
#include "rfid/grid_io.hpp"
#include "rfid/parallel.hpp"
#include "rfid/random.hpp"
#include "rfid/synthesis.hpp"

namespace rfid {

namespace {

constexpr double pi = std::numbers::pi;

Vec3 normalized_signed(Vec3 v)
{
    for (double c : v) {
        if (c != 0.0) {
            if (c < 0.0)
                v = {-v[0], -v[1], -v[2]};
            break;
        }
    }
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / n, v[1] / n, v[2] / n};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 mul(const Mat3& m, const Vec3& v)
{
    return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

std::vector<SlipSystem> build_bcc24()
{
    const std::vector<Vec3> planes110 = {{0, 1, 1}, {0, 1, -1}, {1, 0, 1},
                                         {1, 0, -1}, {1, 1, 0}, {1, -1, 0}};
    const std::vector<Vec3> planes112 = {{1, 1, 2}, {-1, 1, 2}, {1, -1, 2}, {1, 1, -2},
                                         {1, 2, 1}, {-1, 2, 1}, {1, -2, 1}, {1, 2, -1},
                                         {2, 1, 1}, {-2, 1, 1}, {2, -1, 1}, {2, 1, -1}};
    const std::vector<Vec3> dirs = {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};

    std::vector<SlipSystem> out;
    auto add_family = [&](const std::vector<Vec3>& planes, SlipFamily fam) {
        for (const auto& p : planes) {
            for (const auto& d : dirs) {
                if (dot(p, d) == 0.0)
                    out.push_back({normalized_signed(p), normalized_signed(d), fam});
            }
        }
    };
    add_family(planes110, SlipFamily::plane110);
    add_family(planes112, SlipFamily::plane112);
    if (out.size() != 24)
        throw Error("internal error: BCC slip table does not have 24 systems");
    return out;
}

}  // namespace

std::vector<std::size_t> Tessellation::grain_sizes() const
{
    std::vector<std::size_t> sizes(n_grains, 0);
    for (auto g : grain_map)
        ++sizes[g];
    return sizes;
}

GridField Tessellation::as_field() const
{
    std::vector<double> v(grain_map.begin(), grain_map.end());
    return GridField(spec, std::move(v));
}

Tessellation assign_grains(std::vector<Point2> seeds, const GridSpec& spec)
{
    spec.validate();
    if (seeds.empty())
        throw Error("tessellation needs at least one seed");
    if (seeds.size() > std::numeric_limits<std::uint32_t>::max())
        throw Error("too many grains");

    Tessellation t;
    t.n_grains = seeds.size();
    t.seeds = std::move(seeds);
    t.spec = spec;
    t.width = spec.extent_x();
    t.height = spec.extent_y();
    t.grain_map.resize(spec.size());
    parallel_for(spec.ny, [&](std::size_t j) {
        const double y = spec.y(j);
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const double x = spec.x(i);
            double best = std::numeric_limits<double>::infinity();
            std::uint32_t arg = 0;
            for (std::size_t s = 0; s < t.seeds.size(); ++s) {
                const double ddx = t.seeds[s].x - x;
                const double ddy = t.seeds[s].y - y;
                const double d = ddx * ddx + ddy * ddy;
                if (d < best) {
                    best = d;
                    arg = static_cast<std::uint32_t>(s);
                }
            }
            t.grain_map[spec.index(i, j)] = arg;
        }
    });
    return t;
}

Tessellation voronoi_tessellation(std::size_t n_grains, const GridSpec& spec, std::uint64_t seed,
                                  std::uint64_t stream, std::size_t max_retries)
{
    spec.validate();
    if (n_grains < 1)
        throw Error("tessellation needs at least one grain");
    if (n_grains > spec.size())
        throw Error("more grains than grid nodes");

    const auto rng = CounterRng::substream(seed, StreamPurpose::tessellation, stream);
    const double x0 = spec.origin_x - 0.5 * spec.dx;
    const double y0 = spec.origin_y - 0.5 * spec.dy;
    std::uint64_t counter = 0;
    auto draw = [&] {
        Point2 p{x0 + spec.extent_x() * rng.uniform(counter), y0 + spec.extent_y() * rng.uniform(counter + 1)};
        counter += 2;
        return p;
    };

    std::vector<Point2> seeds(n_grains);
    for (auto& s : seeds)
        s = draw();
    for (std::size_t round = 0; round <= max_retries; ++round) {
        auto t = assign_grains(seeds, spec);
        const auto sizes = t.grain_sizes();
        bool ok = true;
        for (std::size_t g = 0; g < n_grains; ++g) {
            if (sizes[g] == 0) {
                ok = false;
                seeds[g] = draw();
            }
        }
        if (ok)
            return t;
    }
    throw Error("degenerate tessellation");
}

double equivalent_grain_diameter(double domain_area, std::size_t n_grains)
{
    if (!(domain_area > 0.0) || n_grains == 0)
        throw Error("grain diameter needs a positive area and grain count");
    return std::sqrt(4.0 / pi * domain_area / static_cast<double>(n_grains));
}

std::vector<Orientation> sample_orientations(std::size_t n_grains, std::uint64_t seed,
                                             OrientationSampling mode, std::uint64_t stream)
{
    if (n_grains < 1)
        throw Error("orientation sampling needs at least one grain");
    const auto rng = CounterRng::substream(seed, StreamPurpose::orientations, stream);
    std::vector<Orientation> out(n_grains);
    for (std::size_t g = 0; g < n_grains; ++g) {
        const double u1 = rng.uniform(3 * g);
        const double u2 = rng.uniform(3 * g + 1);
        const double u3 = rng.uniform(3 * g + 2);
        out[g].phi1 = 2.0 * pi * u1;
        out[g].Phi = mode == OrientationSampling::sphere_uniform ? std::acos(1.0 - 2.0 * u2) : pi * u2;
        out[g].phi2 = 2.0 * pi * u3;
    }
    return out;
}

Mat3 crystal_to_sample(const Orientation& o)
{
    const double c1 = std::cos(o.phi1), s1 = std::sin(o.phi1);
    const double c = std::cos(o.Phi), s = std::sin(o.Phi);
    const double c2 = std::cos(o.phi2), s2 = std::sin(o.phi2);
    // Bunge g maps sample to crystal coordinates; its transpose is returned.
    const Mat3 g = {{{c1 * c2 - s1 * s2 * c, s1 * c2 + c1 * s2 * c, s2 * s},
                     {-c1 * s2 - s1 * c2 * c, -s1 * s2 + c1 * c2 * c, c2 * s},
                     {s1 * s, -c1 * s, c}}};
    Mat3 t{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
            t[i][j] = g[j][i];
    }
    return t;
}

const std::vector<SlipSystem>& slip_systems_bcc24()
{
    static const std::vector<SlipSystem> table = build_bcc24();
    return table;
}

Mat3 schmid_tensor(const SlipSystem& sys)
{
    Mat3 r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
            r[i][j] = 0.5 * (sys.direction[i] * sys.normal[j] + sys.direction[j] * sys.normal[i]);
    }
    return r;
}

double resolved_shear(const Mat3& stress, const SlipSystem& sys, const Orientation& orientation)
{
    const Mat3 rot = crystal_to_sample(orientation);
    const SlipSystem rotated{mul(rot, sys.normal), mul(rot, sys.direction), sys.family};
    const Mat3 r = schmid_tensor(rotated);
    double tau = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
            tau += r[i][j] * stress[i][j];
    }
    return tau;
}

Mat3 uniaxial_stress(int axis)
{
    if (axis < 0 || axis > 2)
        throw Error("loading axis must be 0, 1 or 2");
    Mat3 s{};
    s[axis][axis] = 1.0;
    return s;
}

std::vector<double> grain_response_proxy(const std::vector<Orientation>& orientations, int loading_axis)
{
    const Mat3 load = uniaxial_stress(loading_axis);
    std::vector<double> g(orientations.size());
    double mean = 0.0;
    for (std::size_t n = 0; n < orientations.size(); ++n) {
        double best = 0.0;
        for (const auto& sys : slip_systems_bcc24())
            best = std::max(best, std::abs(resolved_shear(load, sys, orientations[n])));
        g[n] = 1.0 / best;
        mean += g[n];
    }
    mean /= static_cast<double>(g.size());
    for (double& v : g)
        v -= mean;
    return g;
}

GridField surrogate_stress_field(const Tessellation& tess, const std::vector<Orientation>& orientations,
                                 const SurrogateParams& params)
{
    if (orientations.size() != tess.n_grains)
        throw Error("one orientation per grain is required");
    const auto proxy = grain_response_proxy(orientations, params.loading_axis);

    SynthesisPlan plan;
    plan.model = params.intra_model;
    plan.spec = tess.spec;
    plan.seed = params.seed;
    plan.mean = 0.0;
    const GridField intra = FieldSynthesizer(plan).realization(params.realization);

    std::vector<double> v(tess.spec.size());
    const auto w = intra.values();
    for (std::size_t q = 0; q < v.size(); ++q)
        v[q] = params.base_mean + params.schmid_gain * proxy[tess.grain_map[q]] + w[q];
    return GridField(tess.spec, std::move(v));
}

std::string orientations_csv(const std::vector<Orientation>& orientations)
{
    std::string out = "grain,phi1,Phi,phi2\n";
    for (std::size_t g = 0; g < orientations.size(); ++g) {
        out += std::to_string(g) + "," + format_number(orientations[g].phi1) + "," +
               format_number(orientations[g].Phi) + "," + format_number(orientations[g].phi2) + "\n";
    }
    return out;
}

}  // namespace rfid
