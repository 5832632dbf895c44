#include "cvarlb/riskcore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace cvarlb::riskcore {

RiskLevel::RiskLevel(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("risk level alpha must lie in [0, 1), got " +
                                    std::to_string(alpha));
    }
}

SampleSet::SampleSet(std::vector<double> values, Provenance provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
    if (values_.empty()) {
        throw std::invalid_argument("SampleSet requires at least one value");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("SampleSet values must be finite");
        }
    }
    std::stable_sort(values_.begin(), values_.end(), std::greater<>{});
}

double SampleSet::mean() const noexcept {
    // Summed in stored (descending) order, same as empirical_cvar at alpha = 0.
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum / static_cast<double>(values_.size());
}

DiscreteLossDistribution::DiscreteLossDistribution(std::vector<Atom> atoms) {
    if (atoms.empty()) {
        throw std::invalid_argument("DiscreteLossDistribution requires at least one atom");
    }
    double total = 0.0;
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.value)) {
            throw std::invalid_argument("atom values must be finite");
        }
        if (!(a.probability >= 0.0)) {
            throw std::invalid_argument("atom probabilities must be nonnegative");
        }
        total += a.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("atom probabilities must sum to 1 (got " +
                                    std::to_string(total) + ")");
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.value > b.value; });
    for (const Atom& a : atoms) {
        if (!atoms_.empty() && atoms_.back().value == a.value) {
            atoms_.back().probability += a.probability;
        } else {
            atoms_.push_back(a);
        }
    }
}

double DiscreteLossDistribution::mean() const noexcept {
    double sum = 0.0;
    for (const Atom& a : atoms_) sum += a.value * a.probability;
    return sum;
}

double hinge_mean(const SampleSet& samples, double t) {
    double sum = 0.0;
    for (double v : samples.values()) {
        if (v <= t) break;  // sorted descending
        sum += v - t;
    }
    return sum / static_cast<double>(samples.size());
}

double ru_objective(const SampleSet& samples, RiskLevel level, double t) {
    return t + hinge_mean(samples, t) / level.tail_mass();
}

double empirical_cvar(const SampleSet& samples, RiskLevel level) {
    const auto xs = samples.values();
    const double m = level.tail_mass() * static_cast<double>(xs.size());
    if (m <= 1.0) return xs.front();

    const auto k = static_cast<std::size_t>(std::ceil(m));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) sum += xs[i];
    sum += (m - static_cast<double>(k - 1)) * xs[k - 1];
    return sum / m;
}

double exact_cvar(const DiscreteLossDistribution& dist, RiskLevel level) {
    if (level.alpha() == 0.0) return dist.mean();

    const double tail = level.tail_mass();
    double mass = 0.0;
    double weighted = 0.0;
    for (const Atom& a : dist.atoms()) {
        const double take = std::min(a.probability, tail - mass);
        if (take <= 0.0) break;
        weighted += take * a.value;
        mass += take;
    }
    return weighted / tail;
}

bool check_dominance(const SampleSet& samples, RiskLevel level) {
    return empirical_cvar(samples, level) >= samples.mean() - 1e-12;
}

std::size_t tail_count(std::size_t n, RiskLevel level) {
    const double m = level.tail_mass() * static_cast<double>(n);
    const auto k = static_cast<std::size_t>(std::ceil(m));
    return std::clamp<std::size_t>(k, 1, n);
}

}  // namespace cvarlb::riskcore
