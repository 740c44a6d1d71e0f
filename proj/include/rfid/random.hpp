#pragma once

#include <array>
#include <cstdint>

namespace rfid {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the output
/// depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Purpose tags keep independent consumers of one seed on disjoint streams.
enum class StreamPurpose : std::uint32_t {
    field = 1,
    phases = 2,
    tessellation = 3,
    orientations = 4,
    multistart = 5,
    subsample = 6,
    surrogate = 7,
};

/// Random variates addressed by (seed, stream, index).
///
/// Each variate is a pure function of its address, so values never depend on
/// evaluation order or thread count. The 64-bit seed is the Philox key; the
/// stream id fills the upper counter words and the variate index the lower.
class CounterRng
{
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    /// Stream for realization/item `index` of a given purpose.
    static CounterRng substream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index)
    {
        return CounterRng(seed, (static_cast<std::uint64_t>(purpose) << 48) ^ index);
    }

    /// Two 64-bit words from block `block`.
    std::array<std::uint64_t, 2> block(std::uint64_t block) const;

    std::uint64_t bits(std::uint64_t index) const { return block(index >> 1)[index & 1]; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t index) const;

    /// Standard normal; indices 2i and 2i+1 are a Box-Muller pair from block i.
    double normal(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace rfid
