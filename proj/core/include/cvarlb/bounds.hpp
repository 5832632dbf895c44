#pragma once
// Two-point Hellinger lower bounds on Bayesian CVaR.
//
// Everything reduces to one scalar problem. For alpha in [0, 1), rho >= 0,
//
//   F(x) = 1/2 - x + (sqrt(x) - rho / sqrt(2))_+^2 / (1 - alpha),  x in [0, 1/2]
//
//   Psi_alpha(rho) = min_x F(x) =  1/2 - rho^2 / (2 alpha)        0 <= rho <= alpha (alpha > 0)
//                                  (1 - rho)^2 / (2 (1 - alpha))  alpha < rho <= 1
//                                  0                              rho >= 1
//
//   c_alpha = sup_rho rho Psi_alpha(rho)
//
// A balanced pair with loss ceiling L_max and Hellinger budget Gamma has
// CVaR_alpha >= L_max Psi_alpha(sqrt(2 Gamma)). The Gaussian estimation and
// two-armed bandit bounds are instances with (L_max, Gamma) = (2 delta,
// 2 n delta^2) and (g T, g^2 T / 2).
//
// The bounds hold for one fixed uniform two-point prior; a bound for a fixed
// prior also lower-bounds the supremum over priors, so nothing further is
// computed for the worst case over priors.

#include <cstdint>

#include "cvarlb/divergence.hpp"
#include "cvarlb/riskcore.hpp"

namespace cvarlb::bounds {

using divergence::DivergenceKind;
using divergence::HellingerBudget;
using riskcore::RiskLevel;

/// Which piece of the scalar minimization is active.
enum class Branch {
    InteriorQuadratic,  ///< interior critical point, rho <= alpha
    Boundary,           ///< minimizer at x = 1/2, i.e. t* = 0
    Zero,               ///< bound vanishes
};

enum class Method { ClosedForm, NumericMin, GridOracle };

const char* to_string(Branch b) noexcept;
const char* to_string(Method m) noexcept;

struct PsiEvaluation {
    RiskLevel alpha;
    double rho;
    double value;
    Branch branch;
};

/// Inputs to the general two-point template.
class TwoPointSpec {
public:
    /// Throws std::invalid_argument unless l_max > 0 and 0 <= c_sep <= 2 l_max.
    TwoPointSpec(double l_max, double c_sep, HellingerBudget budget);

    double l_max() const noexcept { return l_max_; }
    double c_sep() const noexcept { return c_sep_; }
    HellingerBudget budget() const noexcept { return budget_; }

private:
    double l_max_;
    double c_sep_;
    HellingerBudget budget_;
};

struct BoundResult {
    double value = 0.0;   ///< lower bound on CVaR, loss units
    double t_star = 0.0;  ///< smallest minimizing threshold in [0, L_max]
    Branch branch = Branch::Zero;
    Method method = Method::ClosedForm;
};

/// Piecewise closed form. At rho == alpha the quadratic branch is reported;
/// at rho == 1 the boundary branch (both evaluate to 0 there).
/// Throws std::invalid_argument for rho < 0.
PsiEvaluation psi(RiskLevel level, double rho);

/// F_{alpha,rho}(x) as defined above.
double psi_objective(RiskLevel level, double rho, double x) noexcept;

/// min of F over grid_points evenly spaced x in [0, 1/2], endpoints included.
/// Brute-force reference for psi. Requires grid_points >= 1000.
double psi_oracle(RiskLevel level, double rho, std::int64_t grid_points);

/// 2 / (27 (1 - alpha)) for alpha <= 1/3, sqrt(alpha) / (3 sqrt 3) above.
double c_alpha(RiskLevel level) noexcept;

/// Maximizer of rho Psi_alpha(rho): 1/3 for alpha <= 1/3, sqrt(alpha / 3) above.
double rho_star(RiskLevel level) noexcept;

/// min over t in [0, L_max] of
///   t + L_max / (1 - alpha) * (sqrt(((C/2 - t) / L_max)_+) - sqrt(Gamma))_+^2.
///
/// Minimized by piecewise analysis in s = sqrt((C/2 - t) / L_max) and
/// cross-checked against a 1e5-point grid over t; the smaller of the two is
/// returned.
BoundResult two_point_bound(const TwoPointSpec& spec, RiskLevel level);

/// Value of the two-point objective at threshold t.
double two_point_objective(const TwoPointSpec& spec, RiskLevel level, double t) noexcept;

/// L_max Psi_alpha(sqrt(2 Gamma)), with t* recovered from the active branch.
BoundResult balanced_bound(double l_max, HellingerBudget budget, RiskLevel level);

/// Gaussian mean estimation with n samples and separation delta:
/// 2 delta Psi_alpha(2 sqrt(n) delta).
BoundResult estimation_bound(std::int64_t n, double delta, RiskLevel level);

/// Two-armed Gaussian bandit with gap g over T rounds: g T Psi_alpha(g sqrt T).
BoundResult bandit_bound(double gap, std::int64_t horizon, RiskLevel level);

struct OptimalParameter {
    double argmax;  ///< delta* or g*
    double value;   ///< c_alpha / sqrt(n) or c_alpha sqrt(T)
};

/// delta* = rho*(alpha) / (2 sqrt n), value c_alpha / sqrt n.
OptimalParameter optimal_separation(std::int64_t n, RiskLevel level);

/// g* = rho*(alpha) / sqrt T, value c_alpha sqrt T.
OptimalParameter optimal_gap(std::int64_t horizon, RiskLevel level);

/// Hinge lower bound E[(L - t)_+] >= L_max a^-(B; b_t). Propagates inversion
/// domain errors.
double corollary_hinge_bound(double l_max, double budget, double b_t, DivergenceKind kind);

}  // namespace cvarlb::bounds
