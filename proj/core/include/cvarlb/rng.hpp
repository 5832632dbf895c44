#pragma once
// Counter-based random stream keyed by (seed, stream index).
//
// Draw i of stream k is a pure function of (seed, k, i), so replicates can run
// in any order or on any thread and still see the same numbers. There is no
// shared generator state.

#include <cstdint>

namespace cvarlb::rng {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    /// Raw 64 bits at an arbitrary position in this stream.
    std::uint64_t bits_at(std::uint64_t counter) const noexcept;

    std::uint64_t next_bits() noexcept { return bits_at(counter_++); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace cvarlb::rng
