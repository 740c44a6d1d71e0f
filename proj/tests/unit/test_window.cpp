#include <doctest.h>

#include <cmath>

#include "rfid/error.hpp"
#include "rfid/window.hpp"

using namespace rfid;

namespace {
const WindowKind all_kinds[] = {WindowKind::rectangular, WindowKind::bartlett, WindowKind::hann,
                                WindowKind::hamming, WindowKind::blackman};
}

TEST_CASE("tabulated window values")
{
    CHECK(window_value(WindowKind::blackman, 0, 0, 8, 8) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(window_value(WindowKind::blackman, 8, 0, 8, 8) == doctest::Approx(0.0));
    CHECK(std::abs(window_value(WindowKind::blackman, 8, 0, 8, 8)) < 1e-15);
    CHECK(window_value(WindowKind::hamming, 8, 6, 8, 6) == doctest::Approx(0.0064).epsilon(1e-12));
    CHECK(window_value(WindowKind::hann, 4, 0, 8, 8) == doctest::Approx(0.5));
    CHECK(window_value(WindowKind::bartlett, 1, 2, 4, 4) == doctest::Approx(0.375));
    CHECK(window_value(WindowKind::rectangular, 3, 3, 4, 4) == 1.0);
    CHECK(window_value(WindowKind::hann, 9, 0, 8, 8) == 0.0);
    CHECK_THROWS_AS(window_value(WindowKind::hann, 0, 0, 0, 8), Error);
    CHECK_THROWS_AS(window_value(WindowKind::hann, 0, 0, 8, -1), Error);
}

TEST_CASE("window names")
{
    for (auto k : all_kinds)
        CHECK(window_from_string(to_string(k)) == k);
    CHECK(to_string(WindowKind::rectangular) == "rect");
    CHECK_THROWS_AS(window_from_string("kaiser"), Error);
}

TEST_CASE("window grids")
{
    const GridSpec s5{5, 5, 1.0, 1.0, 0.0, 0.0};
    const auto rect = window_grid(WindowKind::rectangular, GridSpec{7, 4, 1.0, 1.0, 0.0, 0.0});
    for (double w : rect.weights)
        CHECK(w == 1.0);

    const auto b = window_grid(WindowKind::bartlett, s5);
    CHECK(b.at(2, 2) == 1.0);
    CHECK(b.at(0, 0) == 0.0);
    CHECK(b.at(4, 4) == 0.0);
    CHECK(b.at(1, 2) == doctest::Approx(0.5));

    const GridSpec s64{64, 64, 1.0, 1.0, 0.0, 0.0};
    const auto bl = window_grid(WindowKind::blackman, s64);
    for (std::size_t j = 0; j < 64; ++j)
        for (std::size_t i = 0; i < 64; ++i)
            CHECK(std::abs(bl.at(i, j) - bl.at(63 - i, 63 - j)) <= 1e-15);
}

TEST_CASE("window energy")
{
    const GridSpec s10{10, 10, 1.0, 1.0, 0.0, 0.0};
    CHECK(window_grid(WindowKind::rectangular, s10).energy == doctest::Approx(1.0));
    CHECK(window_grid(WindowKind::rectangular, GridSpec{10, 10, 2.0, 2.0, 0.0, 0.0}).energy ==
          doctest::Approx(0.25));

    const GridSpec s101{101, 101, 1.0, 1.0, 0.0, 0.0};
    const auto b = window_grid(WindowKind::bartlett, s101);
    double brute = 0.0;
    for (std::size_t j = 0; j < 101; ++j)
        for (std::size_t i = 0; i < 101; ++i) {
            const double wx = 1.0 - std::abs(static_cast<double>(i) - 50.0) / 50.0;
            const double wy = 1.0 - std::abs(static_cast<double>(j) - 50.0) / 50.0;
            brute += wx * wx * wy * wy;
        }
    CHECK(b.energy == doctest::Approx(brute / (101.0 * 101.0)).epsilon(1e-12));
    CHECK(std::abs(b.energy / (1.0 / 9.0) - 1.0) < 0.02);
    CHECK(window_energy(b) == b.energy);

    WindowGrid zero = b;
    std::fill(zero.weights.begin(), zero.weights.end(), 0.0);
    CHECK_THROWS_WITH(window_energy(zero), "degenerate window");
}

TEST_CASE("window properties")
{
    for (const GridSpec& s : {GridSpec{33, 17, 1.0, 1.0, 0.0, 0.0}, GridSpec{64, 48, 0.5, 2.0, 0.0, 0.0}}) {
        double prev = 1e300;
        for (auto k : all_kinds) {
            const auto w = window_grid(k, s);
            const double peak = *std::max_element(w.weights.begin(), w.weights.end());
            CHECK(peak <= 1.0);
            // even sizes have no node at the window center
            CHECK(peak > (k == WindowKind::bartlett ? 0.95 : 0.99));
            if (s.nx % 2 == 1 && s.ny % 2 == 1)
                CHECK(w.at(s.nx / 2, s.ny / 2) == doctest::Approx(1.0).epsilon(1e-15));
            for (double v : w.weights) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
            // rank one: w(i,j) w(0',0') == w(i,0') w(0',j) about the center row/column
            const std::size_t ci = s.nx / 2, cj = s.ny / 2;
            for (std::size_t j = 0; j < s.ny; ++j)
                for (std::size_t i = 0; i < s.nx; ++i)
                    CHECK(std::abs(w.at(i, j) * w.at(ci, cj) - w.at(i, cj) * w.at(ci, j)) <= 1e-14);
        }
        for (auto k : {WindowKind::rectangular, WindowKind::hamming, WindowKind::hann, WindowKind::blackman}) {
            const double u = window_grid(k, s).energy;
            CHECK(u > 0.0);
            CHECK(u <= prev);
            prev = u;
        }
    }
}
