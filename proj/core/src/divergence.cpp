#include "cvarlb/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cvarlb::divergence {

namespace {

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                    std::to_string(p));
    }
}

// p log(p / q) with 0 log(0 / q) = 0; caller guarantees q > 0 when p > 0.
double xlogy_ratio(double p, double q) {
    if (p == 0.0) return 0.0;
    return p * std::log(p / q);
}

}  // namespace

HellingerBudget::HellingerBudget(double gamma_h) : gamma_h_(gamma_h) {
    if (!(gamma_h >= 0.0) || !std::isfinite(gamma_h)) {
        throw std::invalid_argument("Hellinger budget must be finite and nonnegative");
    }
}

double kl_gaussian_unit_var(double mu1, double mu2) {
    if (!std::isfinite(mu1) || !std::isfinite(mu2)) {
        throw std::invalid_argument("Gaussian means must be finite");
    }
    const double d = mu1 - mu2;
    return 0.5 * d * d;
}

double kl_bernoulli(double a, double b) {
    require_probability(a, "a");
    require_probability(b, "b");
    if ((a > 0.0 && b == 0.0) || (a < 1.0 && b == 1.0)) {
        throw std::domain_error("KL(Bern(" + std::to_string(a) + ") || Bern(" +
                                std::to_string(b) + ")) is infinite");
    }
    const double kl = xlogy_ratio(a, b) + xlogy_ratio(1.0 - a, 1.0 - b);
    return std::max(kl, 0.0);
}

double hellinger2_bernoulli(double a, double b) {
    require_probability(a, "a");
    require_probability(b, "b");
    const double h = 1.0 - std::sqrt(a * b) - std::sqrt((1.0 - a) * (1.0 - b));
    return std::clamp(h, 0.0, 1.0);
}

double bernoulli_divergence(DivergenceKind kind, double a, double b) {
    switch (kind) {
        case DivergenceKind::KL: return kl_bernoulli(a, b);
        case DivergenceKind::SquaredHellinger: return hellinger2_bernoulli(a, b);
    }
    throw std::logic_error("unknown DivergenceKind");
}

HellingerBudget estimation_budget(std::int64_t n, double delta) {
    if (n < 1) throw std::invalid_argument("estimation_budget: n must be >= 1");
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("estimation_budget: delta must be positive");
    }
    return HellingerBudget(2.0 * static_cast<double>(n) * delta * delta);
}

HellingerBudget bandit_budget(double gap, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("bandit_budget: horizon must be >= 1");
    if (!(gap > 0.0) || !std::isfinite(gap)) {
        throw std::invalid_argument("bandit_budget: gap must be positive");
    }
    return HellingerBudget(gap * gap * static_cast<double>(horizon) / 2.0);
}

bool hellinger_le_kl_check(double a, double b) {
    return hellinger2_bernoulli(a, b) <= kl_bernoulli(a, b) + 1e-12;
}

}  // namespace cvarlb::divergence
