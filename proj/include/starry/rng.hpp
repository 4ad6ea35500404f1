#pragma once

#include <cstdint>

namespace starry {

/// Counter-based random stream.
///
/// Every draw is a pure function of (key, counter): the 64-bit output at
/// counter c is the SplitMix64 finalizer applied to key + (c + 1) * golden,
/// where key itself is the finalizer applied to seed ^ (stream * golden2).
/// Draws can therefore be produced in any order or in parallel and remain
/// bit-identical.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t bits(std::uint64_t counter) const noexcept;

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform(std::uint64_t counter) const noexcept;

    /// Standard normal via Box-Muller on the uniforms at counters 2c and 2c+1
    /// (cosine branch only, so each Gaussian owns its two counters).
    double gaussian(std::uint64_t counter) const noexcept;

private:
    std::uint64_t key_;
};

std::uint64_t splitmix64_mix(std::uint64_t x) noexcept;

// Stream tags. Distinct consumers of the same user seed never share draws.
inline constexpr std::uint64_t kWienerStream = 1;
inline constexpr std::uint64_t kSnakeStream = 2;
inline constexpr std::uint64_t kProbeStream = 3;

}  // namespace starry
