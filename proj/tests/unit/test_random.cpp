#include <doctest.h>

#include <cmath>

#include "rfid/random.hpp"

using namespace rfid;

TEST_CASE("Philox4x32-10 known answers")
{
    using C = std::array<std::uint32_t, 4>;
    using K = std::array<std::uint32_t, 2>;
    CHECK(philox4x32(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter streams are pure and distinct")
{
    const auto a = CounterRng::substream(7, StreamPurpose::field, 3);
    const auto b = CounterRng::substream(7, StreamPurpose::field, 3);
    const auto c = CounterRng::substream(7, StreamPurpose::field, 4);
    const auto d = CounterRng::substream(7, StreamPurpose::phases, 3);
    for (std::uint64_t i = 0; i < 100; ++i) {
        CHECK(a.bits(i) == b.bits(i));
        CHECK(a.bits(i) != c.bits(i));
        CHECK(a.bits(i) != d.bits(i));
    }
    CHECK(a.uniform(1000000) == b.uniform(1000000));
}

TEST_CASE("uniform and normal moments")
{
    const CounterRng r(1, 2);
    const std::size_t n = 200000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0, sn3 = 0, sn4 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = r.uniform(i);
        CHECK_UNARY(u >= 0.0 && u < 1.0);
        su += u;
        su2 += u * u;
        const double z = r.normal(i);
        sn += z;
        sn2 += z * z;
        sn3 += z * z * z;
        sn4 += z * z * z * z;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(sn3 / n) < 0.03);
    CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.03));
}
