#pragma once
// Two-armed bandit policies used as test subjects for the regret bounds.
//
// Arms are 0-based internally; transcripts report them as 1 and 2. All
// policies break ties toward arm 0.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "cvarlb/rng.hpp"

namespace cvarlb::sim {

enum class PolicyKind { UniformRandom, ExploreThenCommit, UCB, ThompsonGaussian };

struct PolicySpec {
    PolicyKind kind = PolicyKind::UniformRandom;
    /// Explore-then-commit pulls per arm; 0 selects default_etc_tau(T).
    std::int64_t tau = 0;
    /// UCB bonus scale c in mu_hat + c sqrt(2 ln t / N_a).
    double c_explore = 1.0;
};

/// ceil(T^{2/3}) capped at floor(T / 2).
std::int64_t default_etc_tau(std::int64_t horizon);

/// Stable lowercase name: uniform, etc, ucb, thompson.
std::string_view policy_name(PolicyKind kind) noexcept;
/// Inverse of policy_name; throws std::invalid_argument on unknown names.
PolicyKind parse_policy(std::string_view name);

class BanditPolicy {
public:
    virtual ~BanditPolicy() = default;
    /// Arm (0 or 1) for round t, 1-based.
    virtual int select(std::int64_t round, rng::CounterRng& rng) = 0;
    virtual void update(int arm, double reward) = 0;
};

/// Fresh policy state for one run over the given horizon. Throws
/// std::invalid_argument if the spec is infeasible for this horizon.
std::unique_ptr<BanditPolicy> make_policy(const PolicySpec& spec, std::int64_t horizon);

}  // namespace cvarlb::sim
