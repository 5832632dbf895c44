#pragma once
// Closed-form KL and squared-Hellinger divergences for the unit-variance
// Gaussian and Bernoulli families, and the transcript divergence budgets of
// the two Gaussian two-point constructions.
//
// Squared Hellinger is normalized as D_H^2(P||Q) = 1 - BC(P, Q), so it lies
// in [0, 1] and D_H^2 <= D_KL.

#include <cstdint>

namespace cvarlb::divergence {

enum class DivergenceKind { KL, SquaredHellinger };

/// Upper bound on the squared Hellinger distance between two transcript laws.
class HellingerBudget {
public:
    /// Throws std::invalid_argument unless gamma_h >= 0 and finite.
    explicit HellingerBudget(double gamma_h);
    double value() const noexcept { return gamma_h_; }

private:
    double gamma_h_;
};

/// KL(N(mu1, 1) || N(mu2, 1)) = (mu1 - mu2)^2 / 2.
double kl_gaussian_unit_var(double mu1, double mu2);

/// Binary KL with 0 log 0 := 0. Throws std::domain_error when the divergence
/// is infinite (a > 0, b = 0 or a < 1, b = 1) and std::invalid_argument when
/// a or b lies outside [0, 1].
double kl_bernoulli(double a, double b);

/// 1 - sqrt(ab) - sqrt((1 - a)(1 - b)), clamped to [0, 1].
double hellinger2_bernoulli(double a, double b);

/// Dispatch on kind.
double bernoulli_divergence(DivergenceKind kind, double a, double b);

/// Gaussian mean estimation: n KL(N(delta,1) || N(-delta,1)) = 2 n delta^2.
HellingerBudget estimation_budget(std::int64_t n, double delta);

/// Two-armed bandit with arm means (+g/2, -g/2) vs (-g/2, +g/2). Every round
/// contributes g^2 / 2 whichever arm is pulled, so the transcript KL is
/// g^2 T / 2 for any policy.
HellingerBudget bandit_budget(double gap, std::int64_t horizon);

/// hellinger2_bernoulli(a, b) <= kl_bernoulli(a, b) + 1e-12.
bool hellinger_le_kl_check(double a, double b);

}  // namespace cvarlb::divergence
