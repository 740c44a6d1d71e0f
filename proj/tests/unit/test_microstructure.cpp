#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rfid/diagnostics.hpp"
#include "rfid/error.hpp"
#include "rfid/microstructure.hpp"
#include "rfid/synthesis.hpp"

using namespace rfid;

namespace {

constexpr double pi = std::numbers::pi;

std::uint32_t brute_nearest(const std::vector<Point2>& seeds, double x, double y)
{
    std::uint32_t best = 0;
    for (std::uint32_t s = 1; s < seeds.size(); ++s) {
        const double a = std::pow(seeds[s].x - x, 2) + std::pow(seeds[s].y - y, 2);
        const double b = std::pow(seeds[best].x - x, 2) + std::pow(seeds[best].y - y, 2);
        if (a < b)
            best = s;
    }
    return best;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double max_factor(SlipFamily family, const Orientation& o, int axis)
{
    double best = 0.0;
    for (const auto& s : slip_systems_bcc24())
        if (s.family == family)
            best = std::max(best, std::abs(resolved_shear(uniaxial_stress(axis), s, o)));
    return best;
}

Mat3 random_symmetric(double a)
{
    return {{{a, 0.3 * a, -1.1}, {0.3 * a, -2.0, 0.7}, {-1.1, 0.7, 0.5 * a}}};
}

}  // namespace

TEST_CASE("single grain")
{
    const auto t = voronoi_tessellation(1, GridSpec{10, 8, 1.0, 1.0, 0.0, 0.0}, 3);
    for (auto g : t.grain_map)
        CHECK(g == 0);
}

TEST_CASE("quadrant seeds")
{
    const GridSpec s{16, 16, 1.0, 1.0, 0.0, 0.0};
    const std::vector<Point2> seeds{{3.5, 3.5}, {11.5, 3.5}, {3.5, 11.5}, {11.5, 11.5}};
    const auto t = assign_grains(seeds, s);
    for (std::size_t j = 0; j < 16; ++j)
        for (std::size_t i = 0; i < 16; ++i) {
            CHECK(t.grain_at(i, j) == brute_nearest(seeds, s.x(i), s.y(j)));
            CHECK(t.grain_at(i, j) == (i >= 8) + 2 * (j >= 8));
        }
}

TEST_CASE("random tessellations match brute force")
{
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const GridSpec s{64, 48, 1.5, 2.0, -3.0, 4.0};
        const auto t = voronoi_tessellation(25, s, seed);
        for (std::size_t j = 0; j < s.ny; ++j)
            for (std::size_t i = 0; i < s.nx; ++i)
                REQUIRE(t.grain_at(i, j) == brute_nearest(t.seeds, s.x(i), s.y(j)));
        for (const auto& p : t.seeds) {
            CHECK(p.x >= s.origin_x - 0.75);
            CHECK(p.x <= s.origin_x - 0.75 + s.extent_x());
        }
    }
}

TEST_CASE("every grain is populated")
{
    const GridSpec s{100, 100, 10.0, 10.0, 0.0, 0.0};
    const auto t = voronoi_tessellation(100, s, 12);
    const auto sizes = t.grain_sizes();
    std::size_t total = 0;
    for (auto n : sizes) {
        CHECK(n >= 1);
        total += n;
    }
    CHECK(total / 100 == 100);
    CHECK_THROWS_AS(voronoi_tessellation(0, s, 1), Error);
    CHECK_THROWS_AS(voronoi_tessellation(17, GridSpec{4, 4, 1.0, 1.0, 0.0, 0.0}, 1), Error);
    CHECK_THROWS_WITH(voronoi_tessellation(16, GridSpec{4, 4, 1.0, 1.0, 0.0, 0.0}, 1, 0, 0),
                      "degenerate tessellation");
}

TEST_CASE("grain diameter")
{
    CHECK(std::round(equivalent_grain_diameter(1e6, 100) * 10.0) / 10.0 == doctest::Approx(112.8));
    CHECK(equivalent_grain_diameter(pi / 4.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(equivalent_grain_diameter(640000.0, 64) == doctest::Approx(equivalent_grain_diameter(1e6, 100)));
    CHECK_THROWS_AS(equivalent_grain_diameter(0.0, 3), Error);
}

TEST_CASE("orientation sampling")
{
    const auto a = sample_orientations(50, 8);
    const auto b = sample_orientations(50, 8);
    for (std::size_t g = 0; g < 50; ++g) {
        CHECK(a[g].phi1 == b[g].phi1);
        CHECK(a[g].Phi == b[g].Phi);
        CHECK(a[g].phi2 == b[g].phi2);
    }

    const auto s = sample_orientations(100000, 2);
    double mc = 0.0;
    for (const auto& o : s) {
        CHECK_UNARY(o.phi1 >= 0.0 && o.phi1 < 2 * pi);
        CHECK_UNARY(o.phi2 >= 0.0 && o.phi2 < 2 * pi);
        CHECK_UNARY(o.Phi >= 0.0 && o.Phi <= pi);
        mc += std::cos(o.Phi) / 1e5;
    }
    CHECK(std::abs(mc) < 0.01);

    const std::size_t n = 1000000;
    const auto l = sample_orientations(n, 2, OrientationSampling::literal_uniform);
    std::vector<double> decile(10, 0.0);
    for (const auto& o : l)
        decile[std::min<std::size_t>(9, static_cast<std::size_t>(o.Phi / pi * 10.0))] += 1.0;
    for (double d : decile)
        CHECK(std::abs(d / (n / 10.0) - 1.0) < 0.02);
}

TEST_CASE("rotation convention")
{
    const Orientation o{0.7, 0.0, 0.0};
    const Mat3 r = crystal_to_sample(o);
    CHECK(r[0][0] == doctest::Approx(std::cos(0.7)));
    CHECK(r[1][0] == doctest::Approx(std::sin(0.7)));
    const Mat3 q = crystal_to_sample({1.1, 0.4, 2.5});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += q[k][i] * q[k][j];
            CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0));
        }
    // rotating about the loading axis leaves the Schmid factors unchanged
    for (const auto& s : slip_systems_bcc24())
        CHECK(resolved_shear(uniaxial_stress(2), s, o) ==
              doctest::Approx(resolved_shear(uniaxial_stress(2), s, {})).scale(1.0));
}

TEST_CASE("slip system table")
{
    const auto& t = slip_systems_bcc24();
    CHECK(t.size() == 24);
    CHECK(std::count_if(t.begin(), t.end(), [](const SlipSystem& s) { return s.family == SlipFamily::plane110; }) == 12);
    for (const auto& s : t) {
        CHECK(std::abs(dot(s.normal, s.normal) - 1.0) < 1e-12);
        CHECK(std::abs(dot(s.direction, s.direction) - 1.0) < 1e-12);
        CHECK(std::abs(dot(s.normal, s.direction)) < 1e-12);
    }
    for (std::size_t a = 0; a < 24; ++a)
        for (std::size_t b = a + 1; b < 24; ++b) {
            const bool same_plane = std::abs(std::abs(dot(t[a].normal, t[b].normal)) - 1.0) < 1e-12;
            const bool same_dir = std::abs(std::abs(dot(t[a].direction, t[b].direction)) - 1.0) < 1e-12;
            CHECK_FALSE((same_plane && same_dir));
        }
}

TEST_CASE("Schmid tensor")
{
    for (const auto& s : slip_systems_bcc24()) {
        const Mat3 r = schmid_tensor(s);
        CHECK(std::abs(r[0][0] + r[1][1] + r[2][2]) < 1e-12);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(r[i][j] == r[j][i]);
    }
    const double a = 1.0 / std::sqrt(2.0), b = 1.0 / std::sqrt(3.0);
    const SlipSystem s{{0.0, a, a}, {b, b, -b}, SlipFamily::plane110};
    CHECK(schmid_tensor(s)[2][2] == doctest::Approx(-1.0 / std::sqrt(6.0)).epsilon(1e-14));
    CHECK(schmid_tensor(s)[2][2] == doctest::Approx(-0.40825).epsilon(1e-5));
}

TEST_CASE("resolved shear")
{
    const Orientation o{0.3, 1.2, 4.0};
    const Mat3 zero{};
    const Mat3 hydro{{{5.0, 0.0, 0.0}, {0.0, 5.0, 0.0}, {0.0, 0.0, 5.0}}};
    const Mat3 s1 = random_symmetric(2.0), s2 = random_symmetric(-0.7);
    Mat3 comb{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            comb[i][j] = 1.5 * s1[i][j] - 2.5 * s2[i][j];
    for (const auto& s : slip_systems_bcc24()) {
        CHECK(resolved_shear(zero, s, o) == 0.0);
        CHECK(std::abs(resolved_shear(hydro, s, o)) < 1e-12);
        CHECK(std::abs(resolved_shear(comb, s, o) - (1.5 * resolved_shear(s1, s, o) - 2.5 * resolved_shear(s2, s, o))) <
              1e-12);
    }
    CHECK_THROWS_AS(uniaxial_stress(3), Error);
}

TEST_CASE("maximum Schmid factors per family")
{
    // identity orientation, tension along axis 3
    CHECK(max_factor(SlipFamily::plane110, {}, 2) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));
    CHECK(max_factor(SlipFamily::plane112, {}, 2) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));
    // a crystal never has a Schmid factor above 1/2
    for (const auto& o : sample_orientations(200, 4))
        for (int axis = 0; axis < 3; ++axis)
            CHECK(std::max(max_factor(SlipFamily::plane110, o, axis), max_factor(SlipFamily::plane112, o, axis)) <=
                  0.5 + 1e-12);
}

TEST_CASE("surrogate field composition")
{
    const GridSpec s{64, 64, 10.0, 10.0, 0.0, 0.0};
    const auto t = voronoi_tessellation(30, s, 1);
    const auto o = sample_orientations(30, 1);

    SurrogateParams p;
    p.base_mean = 720.0;
    p.intra_model = PsdModel::single(ModelFamily::gaussian, {0.0, 40.0, 40.0, 0.0, 0.0});
    const auto flat = surrogate_stress_field(t, o, p);
    for (double v : flat.values())
        CHECK(v == 720.0);

    p.intra_model.first.sigma = 30.0;
    p.realization = 3;
    p.seed = 77;
    SynthesisPlan plan;
    plan.model = p.intra_model;
    plan.spec = s;
    plan.seed = 77;
    plan.mean = 720.0;
    const auto expect = FieldSynthesizer(plan).realization(3);
    const auto got = surrogate_stress_field(t, o, p);
    CHECK(std::equal(got.values().begin(), got.values().end(), expect.values().begin()));

    // grain plateaus: with no intra-grain noise, a grain is constant
    p.intra_model.first.sigma = 0.0;
    p.schmid_gain = 100.0;
    const auto plateau = surrogate_stress_field(t, o, p);
    const auto proxy = grain_response_proxy(o);
    for (std::size_t q = 0; q < s.size(); ++q)
        CHECK(plateau.values()[q] == doctest::Approx(720.0 + 100.0 * proxy[t.grain_map[q]]));

    CHECK_THROWS_AS(surrogate_stress_field(t, sample_orientations(29, 1), p), Error);
}

TEST_CASE("surrogate calibration to an 11 percent coefficient of variation")
{
    const GridSpec s{100, 100, 10.0, 10.0, 0.0, 0.0};
    const auto t = voronoi_tessellation(100, s, 5);
    const auto o = sample_orientations(100, 5);
    const auto proxy = grain_response_proxy(o);
    double sd = 0.0;
    for (double g : proxy)
        sd += g * g / proxy.size();
    sd = std::sqrt(sd);

    SurrogateParams p;
    p.base_mean = 720.0;
    p.schmid_gain = 50.0 / sd;
    p.intra_model = PsdModel::single(ModelFamily::gaussian, {60.0, 30.0, 30.0, 0.0, 0.0});
    p.seed = 5;
    const double cv = *spatial_stats(surrogate_stress_field(t, o, p)).cv;
    CHECK(cv >= 0.09);
    CHECK(cv <= 0.13);
}

TEST_CASE("surrogate ensembles look homogeneous")
{
    const GridSpec s{64, 64, 10.0, 10.0, 0.0, 0.0};
    SurrogateParams p;
    p.base_mean = 720.0;
    p.schmid_gain = 300.0;
    p.intra_model = PsdModel::single(ModelFamily::gaussian, {40.0, 40.0, 40.0, 0.0, 0.0});
    p.seed = 31;
    std::vector<GridField> fields;
    for (std::uint64_t r = 0; r < 35; ++r) {
        p.realization = r;
        fields.push_back(surrogate_stress_field(voronoi_tessellation(40, s, 31, r), sample_orientations(40, 31,
                                                OrientationSampling::sphere_uniform, r), p));
    }
    const auto rep = homogeneity_curves(Ensemble(fields));
    for (const auto* c : {&rep.cv_mean, &rep.cv_var}) {
        CHECK(*c->back() < *c->front());
        for (std::size_t i = 1; i < c->size(); ++i)
            CHECK(*(*c)[i] - *(*c)[i - 1] <= 0.2 * *c->front());
    }
}

TEST_CASE("orientation CSV")
{
    const std::string csv = orientations_csv({{0.5, 1.0, 2.0}, {0.25, 0.0, 6.0}});
    CHECK(csv == "grain,phi1,Phi,phi2\n0,0.5,1,2\n1,0.25,0,6\n");
}
