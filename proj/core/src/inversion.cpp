#include "cvarlb/inversion.hpp"

#include <cmath>
#include <stdexcept>

namespace cvarlb::inversion {

using divergence::DivergenceKind;

InversionResult bernoulli_inverse(DivergenceKind kind, double budget, double b) {
    if (!(budget >= 0.0) || std::isnan(budget)) {
        throw std::invalid_argument("bernoulli_inverse: budget must be nonnegative");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw std::invalid_argument("bernoulli_inverse: b must lie in [0, 1]");
    }
    if (budget == 0.0) return {b, 0.0, 0};
    if (kind == DivergenceKind::KL && (b == 0.0 || b == 1.0)) {
        throw std::domain_error("bernoulli_inverse: KL ball around a degenerate Bernoulli");
    }

    auto div = [&](double a) { return divergence::bernoulli_divergence(kind, a, b); };

    // Left endpoint: H^2 gives 1 - sqrt(1 - b), KL gives -log(1 - b).
    const double at_zero = div(0.0);
    if (at_zero <= budget) return {0.0, at_zero, 0};

    // Invariant: div(lo) > budget >= div(hi). Near a = 0 the Hellinger slope
    // grows like a^{-1/2}, so a narrow bracket alone does not pin div(hi) to
    // the budget; keep halving until the divergence gap is closed as well.
    double lo = 0.0;
    double hi = b;
    double div_hi = div(hi);
    int iterations = 0;
    while (hi - lo > kBisectionTolerance || budget - div_hi > kBisectionTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double div_mid = div(mid);
        if (div_mid <= budget) {
            hi = mid;
            div_hi = div_mid;
        } else {
            lo = mid;
        }
        ++iterations;
    }
    return {hi, div_hi, iterations};
}

double hellinger_inverse_closed(double budget, double b) {
    if (!(budget >= 0.0) || std::isnan(budget)) {
        throw std::invalid_argument("hellinger_inverse_closed: budget must be nonnegative");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw std::invalid_argument("hellinger_inverse_closed: b must lie in [0, 1]");
    }
    if (budget == 0.0) return b;
    const double root = std::sqrt(b) - std::sqrt(2.0 * budget);
    return root > 0.0 ? root * root : 0.0;
}

}  // namespace cvarlb::inversion
