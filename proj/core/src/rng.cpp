#include "cvarlb/rng.hpp"

#include <cmath>
#include <numbers>

namespace cvarlb::rng {

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(mix64(seed) ^ mix64(stream * 0xD1B54A32D192ED03ull + 1))) {}

std::uint64_t CounterRng::bits_at(std::uint64_t counter) const noexcept {
    return mix64(key_ + mix64(counter));
}

double CounterRng::uniform() noexcept {
    return static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = static_cast<double>((next_bits() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace cvarlb::rng
