#include "cvarlb/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cvarlb/inversion.hpp"

namespace cvarlb::bounds {

namespace {

constexpr std::int64_t kTemplateGridPoints = 100'000;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

double positive_part(double v) noexcept { return v > 0.0 ? v : 0.0; }

}  // namespace

const char* to_string(Branch b) noexcept {
    switch (b) {
        case Branch::InteriorQuadratic: return "interior_quadratic";
        case Branch::Boundary: return "boundary";
        case Branch::Zero: return "zero";
    }
    return "unknown";
}

const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::ClosedForm: return "closed_form";
        case Method::NumericMin: return "numeric_min";
        case Method::GridOracle: return "grid_oracle";
    }
    return "unknown";
}

TwoPointSpec::TwoPointSpec(double l_max, double c_sep, HellingerBudget budget)
    : l_max_(l_max), c_sep_(c_sep), budget_(budget) {
    require_positive(l_max, "TwoPointSpec: l_max");
    if (!(c_sep >= 0.0 && c_sep <= 2.0 * l_max)) {
        throw std::invalid_argument("TwoPointSpec: c_sep must lie in [0, 2 l_max]");
    }
}

PsiEvaluation psi(RiskLevel level, double rho) {
    if (!(rho >= 0.0)) throw std::invalid_argument("psi: rho must be nonnegative");
    const double a = level.alpha();

    if (rho > 1.0) return {level, rho, 0.0, Branch::Zero};
    if (a > 0.0 && rho <= a) {
        return {level, rho, 0.5 - rho * rho / (2.0 * a), Branch::InteriorQuadratic};
    }
    const double gap = 1.0 - rho;
    return {level, rho, gap * gap / (2.0 * (1.0 - a)), Branch::Boundary};
}

double psi_objective(RiskLevel level, double rho, double x) noexcept {
    const double d = positive_part(std::sqrt(x) - rho / std::sqrt(2.0));
    return 0.5 - x + d * d / level.tail_mass();
}

double psi_oracle(RiskLevel level, double rho, std::int64_t grid_points) {
    if (grid_points < 1000) {
        throw std::invalid_argument("psi_oracle: grid_points must be >= 1000");
    }
    if (!(rho >= 0.0)) throw std::invalid_argument("psi_oracle: rho must be nonnegative");

    const double shift = rho / std::sqrt(2.0);
    const double inv_tail = 1.0 / level.tail_mass();
    const double step = 0.5 / static_cast<double>(grid_points - 1);

    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < grid_points; ++i) {
        const double x = static_cast<double>(i) * step;
        double d = std::sqrt(x) - shift;
        d = d > 0.0 ? d : 0.0;
        const double f = 0.5 - x + d * d * inv_tail;
        best = f < best ? f : best;
    }
    return best;
}

double c_alpha(RiskLevel level) noexcept {
    const double a = level.alpha();
    if (a < 1.0 / 3.0) return 2.0 / (27.0 * (1.0 - a));
    return std::sqrt(a) / (3.0 * std::sqrt(3.0));
}

double rho_star(RiskLevel level) noexcept {
    const double a = level.alpha();
    if (a < 1.0 / 3.0) return 1.0 / 3.0;
    return std::sqrt(a / 3.0);
}

double two_point_objective(const TwoPointSpec& spec, RiskLevel level, double t) noexcept {
    const double lm = spec.l_max();
    const double hinge = std::sqrt(positive_part((spec.c_sep() / 2.0 - t) / lm));
    const double d = positive_part(hinge - std::sqrt(spec.budget().value()));
    return t + lm / level.tail_mass() * d * d;
}

BoundResult two_point_bound(const TwoPointSpec& spec, RiskLevel level) {
    const double lm = spec.l_max();
    const double half_c = spec.c_sep() / 2.0;
    const double gamma = spec.budget().value();
    const double alpha = level.alpha();

    // With x = (C/2 - t) / L_max and s = sqrt(x) the objective is
    //   L_max (c - s^2 + (s - r)_+^2 / (1 - alpha)),  s in [0, sqrt(c)],
    // where c = C / (2 L_max) and r = sqrt(Gamma). Beyond t = C/2 it is just t.
    // Candidates: both ends, the kink s = r, and the critical point s = r / alpha.
    const double c = half_c / lm;
    const double r = std::sqrt(gamma);

    struct Candidate {
        double t;
        bool interior;
    };
    auto t_of_x = [&](double x) { return std::clamp(half_c - lm * x, 0.0, half_c); };

    std::array<Candidate, 4> candidates{{
        {0.0, false},
        {half_c, false},
        {t_of_x(std::min(gamma, c)), false},
        {0.0, false},
    }};
    std::size_t count = 3;
    if (alpha > 0.0 && r < std::sqrt(c)) {
        const double s_crit = r / alpha;
        const double x_crit = s_crit * s_crit;
        if (x_crit <= c) {
            // Put the interior point first so it wins exact ties at rho == alpha.
            candidates[3] = candidates[0];
            candidates[0] = {t_of_x(x_crit), true};
            count = 4;
        }
    }

    const double tie = 1e-14 * lm;
    BoundResult best{std::numeric_limits<double>::infinity(), 0.0, Branch::Boundary,
                     Method::NumericMin};
    bool best_interior = false;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = two_point_objective(spec, level, candidates[i].t);
        const bool better = v < best.value - tie ||
                            (v <= best.value + tie && candidates[i].t < best.t_star);
        if (better) {
            best.value = v;
            best.t_star = candidates[i].t;
            best_interior = candidates[i].interior;
        }
    }

    // Grid fallback over [0, L_max]; replaces the analytic answer only if it is
    // strictly lower beyond rounding.
    double grid_best = std::numeric_limits<double>::infinity();
    double grid_t = 0.0;
    const double step = lm / static_cast<double>(kTemplateGridPoints - 1);
    for (std::int64_t i = 0; i < kTemplateGridPoints; ++i) {
        const double t = static_cast<double>(i) * step;
        const double v = two_point_objective(spec, level, t);
        if (v < grid_best) {
            grid_best = v;
            grid_t = t;
        }
    }
    if (grid_best < best.value - tie) {
        best.value = grid_best;
        best.t_star = grid_t;
        best.method = Method::GridOracle;
        best_interior = false;
    }

    best.value = positive_part(best.value);
    if (half_c == 0.0 || r > std::sqrt(c)) {
        best.branch = Branch::Zero;
    } else {
        best.branch = best_interior ? Branch::InteriorQuadratic : Branch::Boundary;
    }
    return best;
}

BoundResult balanced_bound(double l_max, HellingerBudget budget, RiskLevel level) {
    require_positive(l_max, "balanced_bound: l_max");
    const double rho = std::sqrt(2.0 * budget.value());
    const PsiEvaluation p = psi(level, rho);

    double t_star = 0.0;
    if (p.branch == Branch::InteriorQuadratic) {
        // Minimizer s* = rho / (sqrt 2 alpha), x* = s*^2.
        const double a = level.alpha();
        const double x_star = rho * rho / (2.0 * a * a);
        t_star = l_max * (0.5 - x_star);
    }
    return {l_max * p.value, t_star, p.branch, Method::ClosedForm};
}

BoundResult estimation_bound(std::int64_t n, double delta, RiskLevel level) {
    if (n < 1) throw std::invalid_argument("estimation_bound: n must be >= 1");
    require_positive(delta, "estimation_bound: delta");
    return balanced_bound(2.0 * delta, divergence::estimation_budget(n, delta), level);
}

BoundResult bandit_bound(double gap, std::int64_t horizon, RiskLevel level) {
    if (horizon < 1) throw std::invalid_argument("bandit_bound: horizon must be >= 1");
    require_positive(gap, "bandit_bound: gap");
    return balanced_bound(gap * static_cast<double>(horizon),
                          divergence::bandit_budget(gap, horizon), level);
}

OptimalParameter optimal_separation(std::int64_t n, RiskLevel level) {
    if (n < 1) throw std::invalid_argument("optimal_separation: n must be >= 1");
    const double root_n = std::sqrt(static_cast<double>(n));
    return {rho_star(level) / (2.0 * root_n), c_alpha(level) / root_n};
}

OptimalParameter optimal_gap(std::int64_t horizon, RiskLevel level) {
    if (horizon < 1) throw std::invalid_argument("optimal_gap: horizon must be >= 1");
    const double root_t = std::sqrt(static_cast<double>(horizon));
    return {rho_star(level) / root_t, c_alpha(level) * root_t};
}

double corollary_hinge_bound(double l_max, double budget, double b_t, DivergenceKind kind) {
    require_positive(l_max, "corollary_hinge_bound: l_max");
    return l_max * inversion::bernoulli_inverse(kind, budget, b_t).a_minus;
}

}  // namespace cvarlb::bounds
