#pragma once
// Upper-tail CVaR on empirical samples and finite atomic laws.
//
// CVaR_a(L) = min_t { t + E[(L - t)_+] / (1 - a) }   (Rockafellar-Uryasev)
//
// Both estimators below return the exact minimum of that objective for the
// measure they are given, so CVaR_0 is the mean and CVaR_a <= max.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cvarlb::riskcore {

/// Tail level alpha in [0, 1).
class RiskLevel {
public:
    /// Throws std::invalid_argument unless 0 <= alpha < 1.
    explicit RiskLevel(double alpha);

    double alpha() const noexcept { return alpha_; }
    /// 1 - alpha, the tail mass.
    double tail_mass() const noexcept { return 1.0 - alpha_; }

    friend bool operator==(RiskLevel, RiskLevel) = default;

private:
    double alpha_;
};

/// Where a SampleSet came from. Informational only.
struct Provenance {
    std::uint64_t seed = 0;
    std::string environment;
};

/// Loss realizations, stored sorted nonincreasing.
class SampleSet {
public:
    /// Throws std::invalid_argument on an empty input or any non-finite value.
    explicit SampleSet(std::vector<double> values, Provenance provenance = {});

    /// Values sorted so that values()[0] is the largest.
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double max() const noexcept { return values_.front(); }
    double min() const noexcept { return values_.back(); }
    double mean() const noexcept;
    const Provenance& provenance() const noexcept { return provenance_; }

private:
    std::vector<double> values_;
    Provenance provenance_;
};

struct Atom {
    double value;
    double probability;
};

/// Finite atomic law. Atoms with equal values are merged and the result is
/// sorted by value descending.
class DiscreteLossDistribution {
public:
    /// Throws std::invalid_argument on negative probabilities, non-finite
    /// values, or total mass farther than 1e-12 from 1.
    explicit DiscreteLossDistribution(std::vector<Atom> atoms);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    double mean() const noexcept;

private:
    std::vector<Atom> atoms_;
};

/// (1/N) sum_i (x_i - t)_+
double hinge_mean(const SampleSet& samples, double t);

/// Rockafellar-Uryasev objective t + hinge_mean(t) / (1 - alpha).
double ru_objective(const SampleSet& samples, RiskLevel level, double t);

/// Plug-in CVaR: the exact RU minimum on the empirical measure.
///
/// With m = (1 - alpha) N: m <= 1 gives the sample maximum; otherwise the
/// average of the top m order statistics, the k-th (k = ceil(m)) taken with
/// fractional weight m - (k - 1).
double empirical_cvar(const SampleSet& samples, RiskLevel level);

/// CVaR of a finite atomic law by fractional accumulation of the top
/// (1 - alpha) mass.
double exact_cvar(const DiscreteLossDistribution& dist, RiskLevel level);

/// True iff empirical_cvar >= mean - 1e-12. A regression guard; always holds.
bool check_dominance(const SampleSet& samples, RiskLevel level);

/// Number of top samples that carry the tail mass: ceil((1 - alpha) N), at least 1.
std::size_t tail_count(std::size_t n, RiskLevel level);

}  // namespace cvarlb::riskcore
