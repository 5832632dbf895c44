#include "cvarlb/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cvarlb::sim {

namespace {

struct ArmStats {
    std::array<std::int64_t, 2> pulls{0, 0};
    std::array<double, 2> sums{0.0, 0.0};

    void add(int arm, double reward) {
        ++pulls[arm];
        sums[arm] += reward;
    }
    double mean(int arm) const { return sums[arm] / static_cast<double>(pulls[arm]); }
};

class UniformRandomPolicy final : public BanditPolicy {
public:
    int select(std::int64_t, rng::CounterRng& rng) override {
        return rng.uniform() < 0.5 ? 0 : 1;
    }
    void update(int, double) override {}
};

// Alternates arms for 2 tau rounds, then commits to the better empirical mean.
class ExploreThenCommitPolicy final : public BanditPolicy {
public:
    explicit ExploreThenCommitPolicy(std::int64_t tau) : tau_(tau) {}

    int select(std::int64_t round, rng::CounterRng&) override {
        if (round <= 2 * tau_) return static_cast<int>((round - 1) % 2);
        if (committed_ < 0) committed_ = stats_.mean(1) > stats_.mean(0) ? 1 : 0;
        return committed_;
    }
    void update(int arm, double reward) override { stats_.add(arm, reward); }

private:
    std::int64_t tau_;
    int committed_ = -1;
    ArmStats stats_;
};

class UcbPolicy final : public BanditPolicy {
public:
    explicit UcbPolicy(double c) : c_(c) {}

    int select(std::int64_t round, rng::CounterRng&) override {
        if (stats_.pulls[0] == 0) return 0;
        if (stats_.pulls[1] == 0) return 1;
        const double log_t = std::log(static_cast<double>(round));
        const double i0 = index(0, log_t);
        const double i1 = index(1, log_t);
        return i1 > i0 ? 1 : 0;
    }
    void update(int arm, double reward) override { stats_.add(arm, reward); }

private:
    double index(int arm, double log_t) const {
        return stats_.mean(arm) +
               c_ * std::sqrt(2.0 * log_t / static_cast<double>(stats_.pulls[arm]));
    }

    double c_;
    ArmStats stats_;
};

// Independent N(0, 1) priors on each arm mean, unit-variance rewards:
// posterior after N pulls with reward sum S is N(S / (N + 1), 1 / (N + 1)).
class ThompsonGaussianPolicy final : public BanditPolicy {
public:
    int select(std::int64_t, rng::CounterRng& rng) override {
        const double draw0 = sample(0, rng);
        const double draw1 = sample(1, rng);
        return draw1 > draw0 ? 1 : 0;
    }
    void update(int arm, double reward) override { stats_.add(arm, reward); }

private:
    double sample(int arm, rng::CounterRng& rng) const {
        const double precision = 1.0 + static_cast<double>(stats_.pulls[arm]);
        return stats_.sums[arm] / precision + rng.normal() / std::sqrt(precision);
    }

    ArmStats stats_;
};

}  // namespace

std::int64_t default_etc_tau(std::int64_t horizon) {
    const auto tau = static_cast<std::int64_t>(
        std::ceil(std::pow(static_cast<double>(horizon), 2.0 / 3.0) - 1e-9));
    return std::min(tau, horizon / 2);
}

std::string_view policy_name(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::UniformRandom: return "uniform";
        case PolicyKind::ExploreThenCommit: return "etc";
        case PolicyKind::UCB: return "ucb";
        case PolicyKind::ThompsonGaussian: return "thompson";
    }
    return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
    for (auto k : {PolicyKind::UniformRandom, PolicyKind::ExploreThenCommit, PolicyKind::UCB,
                   PolicyKind::ThompsonGaussian}) {
        if (policy_name(k) == name) return k;
    }
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::unique_ptr<BanditPolicy> make_policy(const PolicySpec& spec, std::int64_t horizon) {
    switch (spec.kind) {
        case PolicyKind::UniformRandom:
            return std::make_unique<UniformRandomPolicy>();
        case PolicyKind::ExploreThenCommit: {
            const std::int64_t tau = spec.tau == 0 ? default_etc_tau(horizon) : spec.tau;
            if (tau < 1 || 2 * tau > horizon) {
                throw std::invalid_argument("explore-then-commit requires 1 <= tau <= T/2");
            }
            return std::make_unique<ExploreThenCommitPolicy>(tau);
        }
        case PolicyKind::UCB:
            if (!(spec.c_explore >= 0.0) || !std::isfinite(spec.c_explore)) {
                throw std::invalid_argument("UCB exploration constant must be nonnegative");
            }
            return std::make_unique<UcbPolicy>(spec.c_explore);
        case PolicyKind::ThompsonGaussian:
            return std::make_unique<ThompsonGaussianPolicy>();
    }
    throw std::invalid_argument("unknown policy kind");
}

}  // namespace cvarlb::sim
