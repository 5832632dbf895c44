#pragma once
// Prior-predictive Monte Carlo for the two Gaussian two-point problems, plus
// exact loss laws where the estimator or policy makes them tractable.
//
// Estimation: theta uniform on {-delta, +delta}, Y_1..Y_n iid N(theta, 1),
//   loss min(|theta_hat - theta|, 2 delta).
// Bandit: model uniform on M1 = (+g/2, -g/2), M2 = (-g/2, +g/2), unit-variance
//   rewards, loss g * (pulls of the suboptimal arm).
//
// Replicate r draws only from CounterRng(seed, r); its first draw picks the
// model. Results are written by replicate index, so the returned SampleSet does
// not depend on the thread count.

#include <cstdint>
#include <string_view>
#include <vector>

#include "cvarlb/policies.hpp"
#include "cvarlb/riskcore.hpp"

namespace cvarlb::sim {

enum class Estimator { SampleMean, SignCommit, AlwaysZero };

/// Stable lowercase name: sample_mean, sign_commit, always_zero.
std::string_view estimator_name(Estimator e) noexcept;
/// Throws std::invalid_argument on unknown names.
Estimator parse_estimator(std::string_view name);

struct EstimationConfig {
    std::int64_t n = 1;
    double delta = 1.0;
    Estimator estimator = Estimator::SampleMean;
    std::int64_t replicates = 1;
    std::uint64_t seed = 0;
    unsigned threads = 0;  ///< 0 = hardware concurrency

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

struct BanditConfig {
    std::int64_t horizon = 1;
    double gap = 1.0;
    PolicySpec policy;
    std::int64_t replicates = 1;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    void validate() const;
};

struct EstimationOutcome {
    double theta;
    double theta_hat;
    double loss;
};

struct Transcript {
    std::vector<std::uint8_t> actions;  ///< arms in {1, 2}
    std::int64_t pulls_arm1 = 0;
    std::int64_t pulls_arm2 = 0;
    int model_index = 1;                ///< 1 or 2
    double loss = 0.0;
};

/// Regret of a pull-count pair under model 1 (g N2) or model 2 (g N1).
double bandit_regret(int model_index, std::int64_t pulls_arm1, std::int64_t pulls_arm2,
                     double gap) noexcept;

/// min(|theta_hat - theta|, 2 delta).
double estimation_loss(double theta_hat, double theta, double delta) noexcept;

/// One estimation replicate.
EstimationOutcome simulate_estimation_replicate(const EstimationConfig& config,
                                                std::int64_t replicate);

/// One bandit replicate with its full action sequence.
Transcript simulate_bandit_transcript(const BanditConfig& config, std::int64_t replicate);

riskcore::SampleSet simulate_estimation(const EstimationConfig& config);
riskcore::SampleSet simulate_bandit(const BanditConfig& config);

/// Law of g Binomial(T, 1/2): the regret of uniform arm choice under either
/// model. Throws std::domain_error for T > 64.
riskcore::DiscreteLossDistribution exact_uniform_bandit_law(double gap, std::int64_t horizon);

/// {(0, 1 - p), (2 delta, p)} with p = P(Z > sqrt(n) delta): the sign
/// estimator's loss law.
riskcore::DiscreteLossDistribution exact_sign_estimator_law(std::int64_t n, double delta);

/// P(Z > x) for standard normal Z, via erfc.
double normal_upper_tail(double x) noexcept;

struct KlEstimate {
    double estimate;
    double standard_error;
};

/// Monte Carlo E_{P1}[log dP1/dP2] over transcripts generated under model 1:
/// the mean over replicates of sum_t [(Y_t - mu2(A_t))^2 - (Y_t - mu1(A_t))^2] / 2.
/// Requires at least 1000 replicates.
KlEstimate mc_transcript_kl(const BanditConfig& config);

}  // namespace cvarlb::sim
