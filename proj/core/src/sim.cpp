#include "cvarlb/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "cvarlb/rng.hpp"

namespace cvarlb::sim {

namespace {

// Runs body(i) for i in [0, count), striped over worker threads. Each index is
// visited exactly once and body must only touch slot i of its output.
template <typename Body>
void parallel_for(std::int64_t count, unsigned threads, Body&& body) {
    unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1u, 64u);
    if (workers == 1 || count < 2) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::int64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
        const std::int64_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &body] {
            for (std::int64_t i = begin; i < end; ++i) body(i);
        });
    }
}

// Arm means (arm 0, arm 1) under model 1 or 2.
std::array<double, 2> arm_means(int model_index, double gap) {
    return model_index == 1 ? std::array{gap / 2.0, -gap / 2.0}
                            : std::array{-gap / 2.0, gap / 2.0};
}

}  // namespace

std::string_view estimator_name(Estimator e) noexcept {
    switch (e) {
        case Estimator::SampleMean: return "sample_mean";
        case Estimator::SignCommit: return "sign_commit";
        case Estimator::AlwaysZero: return "always_zero";
    }
    return "unknown";
}

Estimator parse_estimator(std::string_view name) {
    for (auto e : {Estimator::SampleMean, Estimator::SignCommit, Estimator::AlwaysZero}) {
        if (estimator_name(e) == name) return e;
    }
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

void EstimationConfig::validate() const {
    if (n < 1) throw std::invalid_argument("n: must be >= 1");
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("delta: must be positive and finite");
    }
    if (replicates < 1) throw std::invalid_argument("replicates: must be >= 1");
}

void BanditConfig::validate() const {
    if (horizon < 1) throw std::invalid_argument("horizon: must be >= 1");
    if (!(gap > 0.0) || !std::isfinite(gap)) {
        throw std::invalid_argument("gap: must be positive and finite");
    }
    if (replicates < 1) throw std::invalid_argument("replicates: must be >= 1");
    if (policy.kind == PolicyKind::ExploreThenCommit) {
        const std::int64_t tau = policy.tau == 0 ? default_etc_tau(horizon) : policy.tau;
        if (tau < 1 || 2 * tau > horizon) {
            throw std::invalid_argument("tau: explore-then-commit requires 1 <= tau <= T/2");
        }
    }
    if (policy.kind == PolicyKind::UCB &&
        (!(policy.c_explore >= 0.0) || !std::isfinite(policy.c_explore))) {
        throw std::invalid_argument("ucb_c: must be nonnegative and finite");
    }
}

double bandit_regret(int model_index, std::int64_t pulls_arm1, std::int64_t pulls_arm2,
                     double gap) noexcept {
    return gap * static_cast<double>(model_index == 1 ? pulls_arm2 : pulls_arm1);
}

double estimation_loss(double theta_hat, double theta, double delta) noexcept {
    return std::min(std::abs(theta_hat - theta), 2.0 * delta);
}

EstimationOutcome simulate_estimation_replicate(const EstimationConfig& config,
                                                std::int64_t replicate) {
    rng::CounterRng stream(config.seed, static_cast<std::uint64_t>(replicate));
    const double theta = stream.uniform() < 0.5 ? config.delta : -config.delta;

    double sum = 0.0;
    for (std::int64_t i = 0; i < config.n; ++i) sum += theta + stream.normal();
    const double mean = sum / static_cast<double>(config.n);

    double theta_hat = 0.0;
    switch (config.estimator) {
        case Estimator::SampleMean: theta_hat = mean; break;
        case Estimator::SignCommit: theta_hat = mean >= 0.0 ? config.delta : -config.delta; break;
        case Estimator::AlwaysZero: theta_hat = 0.0; break;
    }
    return {theta, theta_hat, estimation_loss(theta_hat, theta, config.delta)};
}

namespace {

// Shared bandit loop; on_step sees every (arm, reward). Returns pull counts.
template <typename OnStep>
std::array<std::int64_t, 2> run_bandit(const BanditConfig& config, rng::CounterRng& stream,
                                       int model_index, OnStep&& on_step) {
    const auto means = arm_means(model_index, config.gap);
    auto policy = make_policy(config.policy, config.horizon);
    std::array<std::int64_t, 2> pulls{0, 0};
    for (std::int64_t t = 1; t <= config.horizon; ++t) {
        const int arm = policy->select(t, stream);
        const double reward = means[arm] + stream.normal();
        policy->update(arm, reward);
        ++pulls[arm];
        on_step(arm, reward);
    }
    return pulls;
}

}  // namespace

Transcript simulate_bandit_transcript(const BanditConfig& config, std::int64_t replicate) {
    rng::CounterRng stream(config.seed, static_cast<std::uint64_t>(replicate));
    Transcript tr;
    tr.model_index = stream.uniform() < 0.5 ? 1 : 2;
    tr.actions.reserve(static_cast<std::size_t>(config.horizon));
    const auto pulls = run_bandit(config, stream, tr.model_index, [&](int arm, double) {
        tr.actions.push_back(static_cast<std::uint8_t>(arm + 1));
    });
    tr.pulls_arm1 = pulls[0];
    tr.pulls_arm2 = pulls[1];
    tr.loss = bandit_regret(tr.model_index, tr.pulls_arm1, tr.pulls_arm2, config.gap);
    return tr;
}

riskcore::SampleSet simulate_estimation(const EstimationConfig& config) {
    config.validate();
    std::vector<double> losses(static_cast<std::size_t>(config.replicates));
    parallel_for(config.replicates, config.threads, [&](std::int64_t r) {
        losses[static_cast<std::size_t>(r)] = simulate_estimation_replicate(config, r).loss;
    });
    return riskcore::SampleSet(
        std::move(losses),
        {config.seed, "estimation/" + std::string(estimator_name(config.estimator))});
}

riskcore::SampleSet simulate_bandit(const BanditConfig& config) {
    config.validate();
    std::vector<double> losses(static_cast<std::size_t>(config.replicates));
    parallel_for(config.replicates, config.threads, [&](std::int64_t r) {
        rng::CounterRng stream(config.seed, static_cast<std::uint64_t>(r));
        const int model = stream.uniform() < 0.5 ? 1 : 2;
        const auto pulls = run_bandit(config, stream, model, [](int, double) {});
        losses[static_cast<std::size_t>(r)] = bandit_regret(model, pulls[0], pulls[1], config.gap);
    });
    return riskcore::SampleSet(
        std::move(losses),
        {config.seed, "bandit/" + std::string(policy_name(config.policy.kind))});
}

riskcore::DiscreteLossDistribution exact_uniform_bandit_law(double gap, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("exact_uniform_bandit_law: horizon must be >= 1");
    if (horizon > 64) {
        throw std::domain_error("exact_uniform_bandit_law: horizon above 64 is not supported");
    }
    if (!(gap > 0.0) || !std::isfinite(gap)) {
        throw std::invalid_argument("exact_uniform_bandit_law: gap must be positive");
    }
    // Pascal's triangle in 64-bit integers is exact through row 64.
    std::vector<std::uint64_t> row{1};
    for (std::int64_t t = 1; t <= horizon; ++t) {
        std::vector<std::uint64_t> next(row.size() + 1, 0);
        for (std::size_t k = 0; k < row.size(); ++k) {
            next[k] += row[k];
            next[k + 1] += row[k];
        }
        row = std::move(next);
    }
    std::vector<riskcore::Atom> atoms;
    atoms.reserve(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
        atoms.push_back({gap * static_cast<double>(k),
                         std::ldexp(static_cast<double>(row[k]), -static_cast<int>(horizon))});
    }
    return riskcore::DiscreteLossDistribution(std::move(atoms));
}

double normal_upper_tail(double x) noexcept {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

riskcore::DiscreteLossDistribution exact_sign_estimator_law(std::int64_t n, double delta) {
    if (n < 1) throw std::invalid_argument("exact_sign_estimator_law: n must be >= 1");
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("exact_sign_estimator_law: delta must be positive");
    }
    const double p = normal_upper_tail(std::sqrt(static_cast<double>(n)) * delta);
    return riskcore::DiscreteLossDistribution({{0.0, 1.0 - p}, {2.0 * delta, p}});
}

KlEstimate mc_transcript_kl(const BanditConfig& config) {
    config.validate();
    if (config.replicates < 1000) {
        throw std::invalid_argument("replicates: mc_transcript_kl needs at least 1000");
    }
    const auto mu1 = arm_means(1, config.gap);
    const auto mu2 = arm_means(2, config.gap);

    std::vector<double> llr(static_cast<std::size_t>(config.replicates));
    parallel_for(config.replicates, config.threads, [&](std::int64_t r) {
        rng::CounterRng stream(config.seed, static_cast<std::uint64_t>(r));
        stream.uniform();  // model slot of the stream; the model is fixed to M1 here
        double acc = 0.0;
        run_bandit(config, stream, 1, [&](int arm, double y) {
            const double d2 = y - mu2[arm];
            const double d1 = y - mu1[arm];
            acc += 0.5 * (d2 * d2 - d1 * d1);
        });
        llr[static_cast<std::size_t>(r)] = acc;
    });

    const double count = static_cast<double>(llr.size());
    double mean = 0.0;
    for (double v : llr) mean += v;
    mean /= count;
    double ss = 0.0;
    for (double v : llr) ss += (v - mean) * (v - mean);
    const double variance = ss / (count - 1.0);
    return {mean, std::sqrt(variance / count)};
}

}  // namespace cvarlb::sim
