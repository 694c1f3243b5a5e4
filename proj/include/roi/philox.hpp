// Philox4x32-10 counter-based generator (Salmon et al., SC'11, "Parallel
// random numbers: as easy as 1, 2, 3").
//
// The generator is a pure function of (counter, key): ten rounds of a
// multiply/xor bijection over a 128-bit counter, with the 64-bit key bumped
// by the Weyl constants between rounds. Every Monte Carlo iteration owns the
// substream keyed by the run seed with the counter (iteration, domain, block),
// so any iteration can be regenerated in isolation and results do not depend
// on execution order or on how iterations are split across threads.

#ifndef ROI_PHILOX_HPP
#define ROI_PHILOX_HPP

#include <array>
#include <cstdint>

namespace roi::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr Counter philox4x32_10(Counter ctr, Key key) noexcept
{
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

/// Maps 64 random bits to [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Independent stream of uniforms for one (seed, index, domain) triple.
/// Each Philox block yields two doubles; the block counter has 2^32 values,
/// so a single substream supplies 2^33 deviates and the full space of
/// (index, domain) pairs is far beyond 2^64.
class Substream {
public:
    constexpr Substream(std::uint64_t seed, std::uint64_t index, std::uint32_t domain) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), domain, 0u}
    {
    }

    /// Uniform on [0, 1).
    constexpr double uniform01() noexcept
    {
        if (pos_ == 2) {
            block_ = philox4x32_10(ctr_, key_);
            ++ctr_[3];
            pos_ = 0;
        }
        const std::uint64_t bits = (std::uint64_t{block_[2 * pos_ + 1]} << 32) | block_[2 * pos_];
        ++pos_;
        return to_unit(bits);
    }

    /// Uniform on [lo, hi].
    constexpr double uniform(double lo, double hi) noexcept
    {
        const double x = lo + (hi - lo) * uniform01();
        return x < hi ? x : hi;
    }

    /// Uniform on [-1, 1).
    constexpr double symmetric() noexcept { return 2.0 * uniform01() - 1.0; }

private:
    Key key_;
    Counter ctr_;
    Counter block_{};
    int pos_ = 2;
};

} // namespace roi::rng

#endif // ROI_PHILOX_HPP
