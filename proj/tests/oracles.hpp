#pragma once
// Brute-force reference computations for the unit and acceptance tests.
// None of these call into the library code they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace cvarlb::testing {

/// min over t of t + mean((x - t)_+) / (1 - alpha), searched over an even grid
/// on [min, max] with step (max - min) * 1e-6 plus every sample point.
inline double ru_grid_min(const std::vector<double>& xs, double alpha) {
    const double lo = *std::min_element(xs.begin(), xs.end());
    const double hi = *std::max_element(xs.begin(), xs.end());
    auto objective = [&](double t) {
        double s = 0.0;
        for (double x : xs) s += std::max(x - t, 0.0);
        return t + s / static_cast<double>(xs.size()) / (1.0 - alpha);
    };
    double best = std::numeric_limits<double>::infinity();
    for (double x : xs) best = std::min(best, objective(x));
    if (hi > lo) {
        const std::int64_t steps = 1'000'000;
        const double h = (hi - lo) / static_cast<double>(steps);
        for (std::int64_t i = 0; i <= steps; ++i) {
            best = std::min(best, objective(lo + h * static_cast<double>(i)));
        }
    }
    return best;
}

/// Composite Simpson's rule with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::int64_t panels) {
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / static_cast<double>(panels);
    double s = f(a) + f(b);
    for (std::int64_t i = 1; i < panels; ++i) {
        s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    }
    return s * h / 3.0;
}

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

/// P(Z > x) by quadrature of the density over [x, x + 14].
inline double normal_tail_quadrature(double x) {
    return simpson(normal_pdf, x, x + 14.0, 200'000);
}

/// KL(N(mu1, 1) || N(mu2, 1)) by quadrature of p log(p / q).
inline double gaussian_kl_quadrature(double mu1, double mu2) {
    auto integrand = [&](double x) {
        const double lp = -0.5 * (x - mu1) * (x - mu1);
        const double lq = -0.5 * (x - mu2) * (x - mu2);
        return normal_pdf(x - mu1) * (lp - lq);
    };
    return simpson(integrand, mu1 - 14.0, mu1 + 14.0, 200'000);
}

/// Binary KL by explicit sum over the two outcomes.
inline double kl_two_outcome(double a, double b) {
    const double p[2] = {a, 1.0 - a};
    const double q[2] = {b, 1.0 - b};
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
        if (p[i] > 0.0) s += p[i] * std::log(p[i] / q[i]);
    }
    return s;
}

/// Squared Hellinger 1/2 sum (sqrt p - sqrt q)^2 over the two outcomes.
inline double hellinger2_two_outcome(double a, double b) {
    const double p[2] = {a, 1.0 - a};
    const double q[2] = {b, 1.0 - b};
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
        s += d * d;
    }
    return 0.5 * s;
}

/// Probability of k suboptimal pulls when each of T pulls picks an arm
/// uniformly, by enumerating all 2^T action sequences.
inline std::vector<double> enumerate_uniform_pulls(int horizon) {
    std::vector<double> probs(static_cast<std::size_t>(horizon) + 1, 0.0);
    const std::uint64_t total = 1ull << horizon;
    for (std::uint64_t seq = 0; seq < total; ++seq) {
        probs[static_cast<std::size_t>(__builtin_popcountll(seq))] += 1.0;
    }
    for (double& p : probs) p /= static_cast<double>(total);
    return probs;
}

inline std::vector<double> random_samples(std::mt19937_64& gen, std::size_t max_size) {
    std::uniform_int_distribution<std::size_t> size(1, max_size);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::vector<double> xs(size(gen));
    for (double& x : xs) x = value(gen);
    return xs;
}

}  // namespace cvarlb::testing
