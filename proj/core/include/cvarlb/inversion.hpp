#pragma once
// Lower inverse of a Bernoulli divergence ball:
//
//   a^-(B; b) = inf { a in [0, 1] : D(Bern(a) || Bern(b)) <= B }
//
// D(Bern(.) || Bern(b)) is nonincreasing on [0, b] and vanishes at b, so the
// feasible set meets [0, b] in an interval [a^-, b] and bisection applies.

#include "cvarlb/divergence.hpp"

namespace cvarlb::inversion {

struct InversionResult {
    double a_minus = 0.0;             ///< in [0, b]
    double achieved_divergence = 0.0; ///< D(Bern(a_minus) || Bern(b)) <= B
    int iterations = 0;               ///< bisection steps taken
};

/// Bracket width at which bisection stops.
inline constexpr double kBisectionTolerance = 1e-12;

/// Smallest feasible a in [0, b]. Returns b when B == 0 and 0 when a = 0 is
/// already inside the ball. The infimum is treated as attained (D is
/// continuous in a), so the returned point is always feasible.
///
/// Throws std::domain_error for KL with b in {0, 1} and B > 0, and
/// std::invalid_argument for B < 0 or b outside [0, 1].
InversionResult bernoulli_inverse(divergence::DivergenceKind kind, double budget, double b);

/// (sqrt(b) - sqrt(2B))_+^2, a lower bound on the squared-Hellinger inverse
/// obtained from D_H^2 >= (sqrt(a) - sqrt(b))^2 / 2.
double hellinger_inverse_closed(double budget, double b);

}  // namespace cvarlb::inversion
