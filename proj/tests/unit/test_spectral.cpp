#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>

#include "rfid/error.hpp"
#include "rfid/random.hpp"
#include "rfid/spectral.hpp"
#include "rfid/synthesis.hpp"

using namespace rfid;

namespace {

GridField noise(const GridSpec& s, std::uint64_t seed, double offset = 0.0)
{
    const CounterRng rng(seed, 0);
    std::vector<double> v(s.size());
    for (std::size_t q = 0; q < v.size(); ++q)
        v[q] = offset + rng.normal(q);
    return GridField(s, v);
}

GridSpec unit(std::size_t nx, std::size_t ny) { return GridSpec{nx, ny, 1.0, 1.0, 0.0, 0.0}; }

}  // namespace

TEST_CASE("periodogram of a constant")
{
    const auto c = GridField::constant(unit(4, 4), 2.0);
    const auto p = modified_periodogram(c, WindowKind::rectangular, false);
    CHECK(p.at(2, 2) == doctest::Approx(64.0).epsilon(1e-14));
    CHECK(p.at_freq(0, 0) == doctest::Approx(64.0).epsilon(1e-14));
    for (std::size_t q = 0; q < p.values.size(); ++q)
        if (q != p.spec.index(2, 2))
            CHECK(std::abs(p.values[q]) < 1e-24);

    const auto d = modified_periodogram(c, WindowKind::rectangular, true);
    for (double v : d.values)
        CHECK(v == 0.0);
}

TEST_CASE("frequency grid layout")
{
    const auto p = modified_periodogram(noise(GridSpec{6, 5, 2.0, 0.5, 0.0, 0.0}, 1), WindowKind::hann, true);
    CHECK(p.freq_index_x(0) == -3);
    CHECK(p.freq_index_x(5) == 2);
    CHECK(p.freq_index_y(0) == -2);
    CHECK(p.freq_index_y(4) == 2);
    CHECK(p.fx(4) == doctest::Approx(1.0 / 12.0));
    CHECK(p.fy(3) == doctest::Approx(1.0 / 2.5));
    CHECK(p.frequency_spec().origin_x == doctest::Approx(-0.25));
}

TEST_CASE("periodogram against a brute-force DFT")
{
    const GridSpec s{5, 6, 0.7, 1.3, 0.0, 0.0};
    const auto f = noise(s, 42, 3.0);
    const auto p = modified_periodogram(f, WindowKind::hann, true);

    double mean = 0.0;
    for (double v : f.values())
        mean += v / static_cast<double>(s.size());
    auto hann = [](double k, double half) { return 0.5 + 0.5 * std::cos(std::numbers::pi * k / half); };
    std::vector<double> w(s.size());
    double sumsq = 0.0;
    for (std::size_t j = 0; j < s.ny; ++j)
        for (std::size_t i = 0; i < s.nx; ++i) {
            w[s.index(i, j)] = hann(i - 2.0, 2.0) * hann(j - 2.5, 2.5);
            sumsq += w[s.index(i, j)] * w[s.index(i, j)];
        }
    const double u = sumsq / (s.extent_x() * s.extent_y());
    for (std::size_t jc = 0; jc < s.ny; ++jc) {
        for (std::size_t ic = 0; ic < s.nx; ++ic) {
            const double k = static_cast<double>(p.freq_index_x(ic));
            const double l = static_cast<double>(p.freq_index_y(jc));
            std::complex<double> acc = 0.0;
            for (std::size_t m = 0; m < s.ny; ++m)
                for (std::size_t n = 0; n < s.nx; ++n) {
                    const double ph = -2.0 * std::numbers::pi * (k * n / 5.0 + l * m / 6.0);
                    acc += (f.at(n, m) - mean) * w[s.index(n, m)] * std::polar(1.0, ph);
                }
            CHECK(p.at(ic, jc) == doctest::Approx(std::norm(acc) / (30.0 * u)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Parseval identity")
{
    const auto f = noise(unit(32, 20), 7, 5.0);
    const auto p = modified_periodogram(f, WindowKind::rectangular, true);
    double avg = 0.0;
    for (double v : p.values)
        avg += v / static_cast<double>(p.values.size());
    CHECK(std::abs(avg / spatial_stats(f).variance - 1.0) < 1e-10);
}

TEST_CASE("periodogram symmetry and sign")
{
    for (auto [nx, ny] : {std::pair{16, 16}, std::pair{15, 10}, std::pair{7, 9}}) {
        const auto p = modified_periodogram(noise(unit(nx, ny), 9), WindowKind::blackman, false);
        double peak = *std::max_element(p.values.begin(), p.values.end());
        for (std::ptrdiff_t l = -ny / 2; l < (ny + 1) / 2; ++l)
            for (std::ptrdiff_t k = -nx / 2; k < (nx + 1) / 2; ++k)
                CHECK(std::abs(p.at_freq(k, l) - p.at_freq(-k, -l)) <= 1e-10 * peak);
        for (double v : p.values)
            CHECK(v >= 0.0);
    }
}

TEST_CASE("averaging")
{
    const auto f = noise(unit(8, 8), 3);
    const auto single = modified_periodogram(f, WindowKind::hann, true);
    const auto avg = average_periodogram(Ensemble({f, f, f}), WindowKind::hann, true);
    CHECK(avg.n_averaged == 3);
    for (std::size_t q = 0; q < avg.values.size(); ++q)
        CHECK(avg.values[q] == doctest::Approx(single.values[q]).epsilon(1e-14));

    const auto a = noise(unit(2, 2), 11), b = noise(unit(2, 2), 12);
    const auto pa = modified_periodogram(a, WindowKind::rectangular, false);
    const auto pb = modified_periodogram(b, WindowKind::rectangular, false);
    const auto pab = average_periodogram(Ensemble({a, b}), WindowKind::rectangular, false);
    for (std::size_t q = 0; q < 4; ++q)
        CHECK(pab.values[q] == doctest::Approx((pa.values[q] + pb.values[q]) / 2.0).epsilon(1e-15));

    std::vector<GridField> first, second, all;
    for (std::uint64_t s = 0; s < 7; ++s) {
        const auto g = noise(unit(12, 10), 100 + s);
        (s < 3 ? first : second).push_back(g);
        all.push_back(g);
    }
    const auto p1 = average_periodogram(Ensemble(first), WindowKind::blackman, true);
    const auto p2 = average_periodogram(Ensemble(second), WindowKind::blackman, true);
    const auto p12 = average_periodogram(Ensemble(all), WindowKind::blackman, true);
    for (std::size_t q = 0; q < p12.values.size(); ++q)
        CHECK(std::abs(p12.values[q] - (3.0 * p1.values[q] + 4.0 * p2.values[q]) / 7.0) <=
              1e-12 * p12.values[q]);

    CHECK_THROWS_AS(Ensemble({noise(unit(4, 4), 1), noise(unit(4, 5), 1)}), Error);
}

TEST_CASE("averaging law on white noise")
{
    const std::size_t groups = 40;
    std::uint64_t next = 0;
    std::vector<double> lx, ly;
    for (std::size_t L : {1, 4, 16}) {
        std::vector<double> sum(256, 0.0), sum2(256, 0.0);
        for (std::size_t g = 0; g < groups; ++g) {
            std::vector<GridField> fields;
            for (std::size_t r = 0; r < L; ++r)
                fields.push_back(noise(unit(16, 16), 5000 + next++));
            const auto p = average_periodogram(Ensemble(fields), WindowKind::rectangular, false);
            for (std::size_t q = 0; q < 256; ++q) {
                sum[q] += p.values[q];
                sum2[q] += p.values[q] * p.values[q];
            }
        }
        double pooled = 0.0;
        for (std::size_t q = 0; q < 256; ++q)
            pooled += (sum2[q] - sum[q] * sum[q] / groups) / (groups - 1);
        lx.push_back(std::log(static_cast<double>(L)));
        ly.push_back(std::log(pooled));
    }
    const double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("covariance estimator")
{
    const auto ones = GridField::constant(unit(6, 5), 1.0);
    const auto c = covariance_estimate(ones, 5, 4);
    for (std::size_t l = 0; l <= 4; ++l)
        for (std::size_t k = 0; k <= 5; ++k)
            CHECK(c.at(k, l) == doctest::Approx((6.0 - k) * (5.0 - l) / 30.0).epsilon(1e-15));

    const auto f = noise(GridSpec{3, 3, 2.0, 3.0, 0.0, 0.0}, 21);
    const auto e = covariance_estimate(f, 2, 2);
    double ms = 0.0;
    for (double v : f.values())
        ms += v * v / 9.0;
    CHECK(e.at(0, 0) == doctest::Approx(ms).epsilon(1e-15));
    CHECK(e.dx == 2.0);
    for (std::size_t l = 0; l <= 2; ++l)
        for (std::size_t k = 0; k <= 2; ++k) {
            double s = 0.0;
            for (std::size_t m = 0; m + l < 3; ++m)
                for (std::size_t n = 0; n + k < 3; ++n)
                    s += f.at(n + k, m + l) * f.at(n, m);
            CHECK(e.at(k, l) == doctest::Approx(s / 9.0).epsilon(1e-13));
        }

    CHECK_THROWS_WITH_AS(covariance_estimate(f, 3, 0), doctest::Contains("lag out of range"), Error);
}

TEST_CASE("Bartlett bias weights")
{
    CHECK(bartlett_bias_weight(0, 0, 4, 4) == 1.0);
    CHECK(bartlett_bias_weight(4, 4, 4, 4) == 0.0);
    CHECK(bartlett_bias_weight(1, 2, 4, 4) == 0.375);
    CHECK(bartlett_bias_weight(-1, -2, 4, 4) == 0.375);
    CHECK(bartlett_bias_weight(5, 0, 4, 4) == 0.0);
    const auto t = bartlett_bias_weights(4, 3);
    CHECK(t.at(1, 2) == doctest::Approx(0.75 / 3.0));
    CHECK(t.at(4, 3) == 0.0);
}

TEST_CASE("covariance estimator bias structure")
{
    SynthesisPlan plan;
    plan.model = PsdModel::single(ModelFamily::exponential, {1.5, 6.0, 5.0, 0.0, 0.0});
    plan.spec = unit(16, 16);
    plan.seed = 77;
    plan.embedding_factor = 4;
    const auto ens = simulate_ensemble(plan, 2000);
    std::vector<double> mean(25, 0.0);
    for (const auto& f : ens.fields()) {
        const auto c = covariance_estimate(f, 4, 4);
        for (std::size_t q = 0; q < 25; ++q)
            mean[q] += c.values[q] / 2000.0;
    }
    for (std::size_t l = 0; l <= 4; ++l)
        for (std::size_t k = 0; k <= 4; ++k) {
            const double expect = bartlett_bias_weight(k, l, 16, 16) * cov_eval(plan.model, k, l);
            CHECK(std::abs(mean[l * 5 + k] / expect - 1.0) < 0.05);
        }
}

TEST_CASE("periodogram file round trip")
{
    const auto dir = std::filesystem::temp_directory_path() / "rfid_unit_spectral";
    std::filesystem::create_directories(dir);
    const auto p = average_periodogram(Ensemble({noise(GridSpec{9, 8, 2.5, 0.5, 0.0, 0.0}, 1),
                                                 noise(GridSpec{9, 8, 2.5, 0.5, 0.0, 0.0}, 2)}),
                                       WindowKind::hamming, false);
    save_periodogram(p, dir / "p.rfg");
    CHECK(std::filesystem::exists(periodogram_meta_path(dir / "p.rfg")));
    const auto q = load_periodogram(dir / "p.rfg");
    CHECK(q.spec == p.spec);
    CHECK(q.values == p.values);
    CHECK(q.window == WindowKind::hamming);
    CHECK(q.n_averaged == 2);
    CHECK_FALSE(q.demean);
}
