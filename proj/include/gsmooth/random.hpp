#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace gsmooth {

/// SplitMix64 step; also used as a 64-bit mixing function.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a textual label (FNV-1a + mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;

/// Counter-keyed generator: the stream for (seed, index) is fixed regardless of
/// which worker draws it. xoshiro256++ underneath.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal (Marsaglia polar method, spare value cached).
    double normal() noexcept;

    /// Gamma(shape, 1) via Marsaglia-Tsang.
    double gamma(double shape) noexcept;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace gsmooth
