#include "cvarlb/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "cvarlb/bounds.hpp"
#include "cvarlb/divergence.hpp"

namespace cvarlb::cli {

using nlohmann::json;
using riskcore::RiskLevel;
using riskcore::SampleSet;

std::string_view kind_name(ExperimentKind kind) noexcept {
    switch (kind) {
        case ExperimentKind::Psi: return "psi";
        case ExperimentKind::Bound: return "bound";
        case ExperimentKind::SimulateEstimation: return "simulate_estimation";
        case ExperimentKind::SimulateBandit: return "simulate_bandit";
        case ExperimentKind::Verify: return "verify";
    }
    return "unknown";
}

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e.field + ": " + e.message;
    return msg;
}

const std::set<std::string>& known_fields() {
    static const std::set<std::string> fields{
        "kind",    "alphas",  "n",        "delta",  "estimators", "horizon", "gap",
        "policies", "tau",    "ucb_c",    "l_max",  "c_sep",      "gamma_h", "rho_max",
        "rho_step", "replicates", "seed", "threads", "format",    "out"};
    return fields;
}

// Collects field errors instead of throwing on the first one.
class FieldReader {
public:
    explicit FieldReader(const json& doc) : doc_(doc) {}

    bool has(const std::string& key) const { return doc_.contains(key); }

    void fail(std::string field, std::string message) {
        errors_.push_back({std::move(field), std::move(message)});
    }

    std::optional<std::int64_t> integer(const std::string& key, std::int64_t min_value) {
        if (!has(key)) return std::nullopt;
        const json& v = doc_.at(key);
        if (!v.is_number_integer()) {
            fail(key, "must be an integer");
            return std::nullopt;
        }
        if (v.is_number_unsigned() &&
            v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
            fail(key, "out of range");
            return std::nullopt;
        }
        const auto i = v.get<std::int64_t>();
        if (i < min_value) {
            fail(key, "must be >= " + std::to_string(min_value));
            return std::nullopt;
        }
        return i;
    }

    std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = doc_.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<std::int64_t>() < 0)) {
            fail(key, "must be a nonnegative integer");
            return std::nullopt;
        }
        return v.get<std::uint64_t>();
    }

    std::optional<double> number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = doc_.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            fail(key, "must be a finite number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<std::string> string(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = doc_.at(key);
        if (!v.is_string()) {
            fail(key, "must be a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    // A string or array of strings, with "all" expanding to every choice.
    template <typename T, typename Parse>
    std::optional<std::vector<T>> choices(const std::string& key, const std::vector<T>& all,
                                          Parse&& parse) {
        if (!has(key)) return std::nullopt;
        const json& v = doc_.at(key);
        std::vector<std::string> names;
        if (v.is_string()) {
            names.push_back(v.get<std::string>());
        } else if (v.is_array() && !v.empty()) {
            for (const json& e : v) {
                if (!e.is_string()) {
                    fail(key, "entries must be strings");
                    return std::nullopt;
                }
                names.push_back(e.get<std::string>());
            }
        } else {
            fail(key, "must be a name, a nonempty array of names, or \"all\"");
            return std::nullopt;
        }
        if (names.size() == 1 && names.front() == "all") return all;
        std::vector<T> out;
        for (const auto& name : names) {
            try {
                out.push_back(parse(name));
            } catch (const std::invalid_argument& e) {
                fail(key, e.what());
                return std::nullopt;
            }
        }
        return out;
    }

    std::optional<ParamSpec> param(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = doc_.at(key);
        ParamSpec spec;
        if (v.is_string()) {
            if (v.get<std::string>() != "optimal") {
                fail(key, "must be a positive number, an array of them, or \"optimal\"");
                return std::nullopt;
            }
            spec.optimal = true;
            return spec;
        }
        std::vector<json> items;
        if (v.is_array() && !v.empty()) {
            items.assign(v.begin(), v.end());
        } else {
            items.push_back(v);
        }
        for (const json& e : items) {
            if (!e.is_number() || !(e.get<double>() > 0.0) || !std::isfinite(e.get<double>())) {
                fail(key, "must be a positive number, an array of them, or \"optimal\"");
                return std::nullopt;
            }
            spec.values.push_back(e.get<double>());
        }
        return spec;
    }

    std::vector<FieldError>& errors() { return errors_; }

private:
    const json& doc_;
    std::vector<FieldError> errors_;
};

std::optional<ExperimentKind> parse_kind(const std::string& s) {
    for (auto k : {ExperimentKind::Psi, ExperimentKind::Bound, ExperimentKind::SimulateEstimation,
                   ExperimentKind::SimulateBandit, ExperimentKind::Verify}) {
        if (kind_name(k) == s) return k;
    }
    return std::nullopt;
}

const std::vector<sim::Estimator> kAllEstimators{
    sim::Estimator::SampleMean, sim::Estimator::SignCommit, sim::Estimator::AlwaysZero};
const std::vector<sim::PolicyKind> kAllPolicies{
    sim::PolicyKind::UniformRandom, sim::PolicyKind::ExploreThenCommit, sim::PolicyKind::UCB,
    sim::PolicyKind::ThompsonGaussian};

}  // namespace

ValidationError::ValidationError(std::vector<FieldError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ValidationError(std::vector<FieldError>{{"config", "must be a JSON object"}});

    FieldReader in(doc);
    ExperimentConfig cfg;

    for (const auto& [key, value] : doc.items()) {
        if (!known_fields().contains(key)) in.fail(key, "unknown field");
    }

    const auto kind_str = in.string("kind");
    if (!in.has("kind")) {
        in.fail("kind", "required");
    } else if (kind_str) {
        if (auto k = parse_kind(*kind_str)) {
            cfg.kind = *k;
        } else {
            in.fail("kind", "unknown kind '" + *kind_str + "'");
        }
    }
    const bool kind_ok = kind_str && parse_kind(*kind_str);

    // alphas
    if (!in.has("alphas")) {
        in.fail("alphas", "required");
    } else {
        const json& a = doc.at("alphas");
        std::vector<json> items;
        if (a.is_array()) {
            items.assign(a.begin(), a.end());
        } else {
            items.push_back(a);
        }
        if (items.empty()) in.fail("alphas", "must be nonempty");
        for (const json& e : items) {
            if (!e.is_number() || !(e.get<double>() >= 0.0 && e.get<double>() < 1.0)) {
                in.fail("alphas", "every entry must be a number in [0, 1)");
                cfg.alphas.clear();
                break;
            }
            cfg.alphas.emplace_back(e.get<double>());
        }
    }

    // Problem blocks.
    const bool wants_estimation = in.has("n") || in.has("delta") || in.has("estimators");
    const bool wants_bandit = in.has("horizon") || in.has("gap") || in.has("policies") ||
                              in.has("tau") || in.has("ucb_c");
    const bool wants_template = in.has("l_max") || in.has("c_sep") || in.has("gamma_h");

    const auto n = in.integer("n", 1);
    const auto delta = in.param("delta");
    const auto estimators = in.choices<sim::Estimator>("estimators", kAllEstimators,
                                                       sim::parse_estimator);
    const auto horizon = in.integer("horizon", 1);
    const auto gap = in.param("gap");
    const auto policy_kinds =
        in.choices<sim::PolicyKind>("policies", kAllPolicies, sim::parse_policy);
    const auto tau = in.integer("tau", 0);
    const auto ucb_c = in.number("ucb_c");
    const auto l_max = in.number("l_max");
    const auto c_sep = in.number("c_sep");
    const auto gamma_h = in.number("gamma_h");

    if (ucb_c && *ucb_c < 0.0) in.fail("ucb_c", "must be nonnegative");

    const bool simulate_like = cfg.kind == ExperimentKind::SimulateEstimation ||
                               cfg.kind == ExperimentKind::SimulateBandit ||
                               cfg.kind == ExperimentKind::Verify;
    const std::vector<sim::Estimator> default_estimators =
        cfg.kind == ExperimentKind::Verify ? kAllEstimators
                                           : std::vector{sim::Estimator::SampleMean};
    const std::vector<sim::PolicyKind> default_policies =
        cfg.kind == ExperimentKind::Verify ? kAllPolicies
                                           : std::vector{sim::PolicyKind::UniformRandom};

    if (kind_ok && cfg.kind == ExperimentKind::Psi) {
        for (const char* key : {"n", "delta", "estimators", "horizon", "gap", "policies", "tau",
                                "ucb_c", "l_max", "c_sep", "gamma_h"}) {
            if (in.has(key)) in.fail(key, "not used by kind psi");
        }
    }

    if (kind_ok && cfg.kind != ExperimentKind::Psi) {
        if (cfg.kind == ExperimentKind::SimulateEstimation && wants_bandit) {
            for (const char* key : {"horizon", "gap", "policies", "tau", "ucb_c"}) {
                if (in.has(key)) in.fail(key, "not used by kind simulate_estimation");
            }
        }
        if (cfg.kind == ExperimentKind::SimulateBandit && wants_estimation) {
            for (const char* key : {"n", "delta", "estimators"}) {
                if (in.has(key)) in.fail(key, "not used by kind simulate_bandit");
            }
        }
        if (wants_template && cfg.kind != ExperimentKind::Bound) {
            for (const char* key : {"l_max", "c_sep", "gamma_h"}) {
                if (in.has(key)) in.fail(key, "only used by kind bound");
            }
        }
        if (!simulate_like && in.has("estimators")) in.fail("estimators", "not used by kind bound");
        if (!simulate_like && in.has("policies")) in.fail("policies", "not used by kind bound");

        const bool need_estimation =
            cfg.kind == ExperimentKind::SimulateEstimation ||
            (wants_estimation && cfg.kind != ExperimentKind::SimulateBandit);
        const bool need_bandit = cfg.kind == ExperimentKind::SimulateBandit ||
                                 (wants_bandit && cfg.kind != ExperimentKind::SimulateEstimation);

        if (need_estimation) {
            if (!in.has("n")) in.fail("n", "required for the estimation problem");
            if (!in.has("delta")) in.fail("delta", "required for the estimation problem");
            if (n && delta) {
                cfg.estimation = EstimationProblem{*n, *delta,
                                                   estimators.value_or(default_estimators)};
            }
        }
        if (need_bandit) {
            if (!in.has("horizon")) in.fail("horizon", "required for the bandit problem");
            if (!in.has("gap")) in.fail("gap", "required for the bandit problem");
            if (horizon && gap) {
                BanditProblem bp{*horizon, *gap, {}};
                for (auto kind : policy_kinds.value_or(default_policies)) {
                    sim::PolicySpec spec{kind, tau.value_or(0), ucb_c.value_or(1.0)};
                    if (kind == sim::PolicyKind::ExploreThenCommit) {
                        const auto eff = spec.tau == 0 ? sim::default_etc_tau(*horizon) : spec.tau;
                        if (eff < 1 || 2 * eff > *horizon) {
                            in.fail("tau", "explore-then-commit needs 1 <= tau <= horizon/2");
                        }
                    }
                    bp.policies.push_back(spec);
                }
                cfg.bandit = std::move(bp);
            }
        }
        if (wants_template && cfg.kind == ExperimentKind::Bound) {
            if (!in.has("l_max")) in.fail("l_max", "required for the two-point template");
            if (!in.has("c_sep")) in.fail("c_sep", "required for the two-point template");
            if (!in.has("gamma_h")) in.fail("gamma_h", "required for the two-point template");
            if (l_max && !(*l_max > 0.0)) in.fail("l_max", "must be positive");
            if (l_max && c_sep && !(*c_sep >= 0.0 && *c_sep <= 2.0 * *l_max)) {
                in.fail("c_sep", "must lie in [0, 2 l_max]");
            }
            if (gamma_h && !(*gamma_h >= 0.0)) in.fail("gamma_h", "must be nonnegative");
            if (l_max && c_sep && gamma_h) cfg.two_point = TemplateProblem{*l_max, *c_sep, *gamma_h};
        }
        if (!wants_estimation && !wants_bandit && !wants_template &&
            (cfg.kind == ExperimentKind::Bound || cfg.kind == ExperimentKind::Verify)) {
            in.fail("problem", "give n/delta, horizon/gap, or l_max/c_sep/gamma_h");
        }
    }

    if (const auto v = in.number("rho_max")) {
        if (!(*v > 0.0)) in.fail("rho_max", "must be positive");
        cfg.rho_max = *v;
    }
    if (const auto v = in.number("rho_step")) {
        if (!(*v > 0.0)) {
            in.fail("rho_step", "must be positive");
        } else if (cfg.rho_max / *v > 1e7) {
            in.fail("rho_step", "too fine for rho_max (more than 1e7 points)");
        }
        cfg.rho_step = *v;
    }
    if (const auto v = in.integer("replicates", 1)) cfg.replicates = *v;
    if (const auto v = in.unsigned_integer("seed")) cfg.seed = *v;
    if (const auto v = in.integer("threads", 0)) cfg.threads = static_cast<unsigned>(*v);
    if (const auto v = in.string("format")) {
        if (*v == "csv") {
            cfg.format = OutputFormat::Csv;
        } else if (*v == "json") {
            cfg.format = OutputFormat::Json;
        } else {
            in.fail("format", "must be csv or json");
        }
    }
    if (const auto v = in.string("out")) {
        if (v->empty()) {
            in.fail("out", "must be a nonempty path");
        } else {
            cfg.output_path = *v;
        }
    }

    if (!in.errors().empty()) throw ValidationError(std::move(in.errors()));
    return cfg;
}

json load_config_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file '" + path.string() + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::vector<FieldError>{
            {"config", "'" + path.string() + "' is not valid JSON: " + e.what()}});
    }
}

bool ExperimentReport::all_dominated() const noexcept {
    for (const auto& row : rows) {
        if (!row.dominated) return false;
    }
    return true;
}

double tail_standard_error(const SampleSet& samples, RiskLevel level) {
    const std::size_t k = riskcore::tail_count(samples.size(), level);
    if (k < 2) return 0.0;
    const auto top = samples.values().first(k);
    double mean = 0.0;
    for (double v : top) mean += v;
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (double v : top) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(k - 1));
    return sd / std::sqrt(static_cast<double>(k));
}

double mc_slack(const SampleSet& samples, RiskLevel level) {
    return 5.0 * tail_standard_error(samples, level);
}

namespace {

constexpr double kExactTolerance = 1e-9;

std::vector<double> resolve(const ParamSpec& spec, double optimum, bool sweep) {
    if (!spec.optimal) return spec.values;
    if (sweep) return {0.5 * optimum, optimum, 2.0 * optimum};
    return {optimum};
}

void psi_rows(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const auto points = static_cast<std::int64_t>(std::floor(cfg.rho_max / cfg.rho_step + 1e-9));
    for (const RiskLevel level : cfg.alphas) {
        for (std::int64_t i = 0; i <= points; ++i) {
            const double rho = static_cast<double>(i) * cfg.rho_step;
            const auto p = bounds::psi(level, rho);
            const auto unit = bounds::balanced_bound(1.0, divergence::HellingerBudget(rho * rho / 2.0),
                                                     level);
            ReportRow row;
            row.alpha = level.alpha();
            row.param_name = "rho";
            row.param_value = rho;
            row.bound = rho * p.value;
            row.t_star = unit.t_star;
            row.psi = p.value;
            rep.rows.push_back(std::move(row));
        }
    }
}

ReportRow bound_row(RiskLevel level, const char* param, double value,
                    const bounds::BoundResult& b) {
    ReportRow row;
    row.alpha = level.alpha();
    row.param_name = param;
    row.param_value = value;
    row.bound = b.value;
    row.t_star = b.t_star;
    return row;
}

void bound_rows(const ExperimentConfig& cfg, ExperimentReport& rep) {
    for (const RiskLevel level : cfg.alphas) {
        if (cfg.estimation) {
            const auto& e = *cfg.estimation;
            const double opt = bounds::optimal_separation(e.n, level).argmax;
            for (double delta : resolve(e.delta, opt, false)) {
                const auto b = bounds::estimation_bound(e.n, delta, level);
                rep.rows.push_back(bound_row(level, "delta", delta, b));
            }
        }
        if (cfg.bandit) {
            const auto& bp = *cfg.bandit;
            const double opt = bounds::optimal_gap(bp.horizon, level).argmax;
            for (double gap : resolve(bp.gap, opt, false)) {
                const auto b = bounds::bandit_bound(gap, bp.horizon, level);
                rep.rows.push_back(bound_row(level, "gap", gap, b));
            }
        }
        if (cfg.two_point) {
            const auto& tp = *cfg.two_point;
            const bounds::TwoPointSpec spec(tp.l_max, tp.c_sep,
                                            divergence::HellingerBudget(tp.gamma_h));
            const auto b = bounds::two_point_bound(spec, level);
            rep.rows.push_back(bound_row(level, "gamma_h", tp.gamma_h, b));
        }
    }
}

ReportRow dominance_row(RiskLevel level, const std::string& subject, const char* param,
                        double value, const bounds::BoundResult& bound, const SampleSet& samples,
                        std::optional<double> exact) {
    ReportRow row;
    row.alpha = level.alpha();
    row.subject = subject;
    row.param_name = subject + "." + param;
    row.param_value = value;
    row.bound = bound.value;
    row.t_star = bound.t_star;
    row.empirical_cvar = riskcore::empirical_cvar(samples, level);
    row.standard_error = tail_standard_error(samples, level);
    row.mc_slack = 5.0 * *row.standard_error;
    row.exact_cvar = exact;
    row.dominated = *row.empirical_cvar >= bound.value - *row.mc_slack &&
                    (!exact || *exact >= bound.value - kExactTolerance);
    return row;
}

void estimation_rows(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const auto& e = *cfg.estimation;
    const bool sweep = cfg.kind == ExperimentKind::Verify;
    for (const auto estimator : e.estimators) {
        const std::string subject(sim::estimator_name(estimator));
        rep.metadata.subjects.push_back(subject);
        std::map<double, SampleSet> cache;
        for (const RiskLevel level : cfg.alphas) {
            const double opt = bounds::optimal_separation(e.n, level).argmax;
            for (double delta : resolve(e.delta, opt, sweep)) {
                auto it = cache.find(delta);
                if (it == cache.end()) {
                    sim::EstimationConfig sc{e.n, delta, estimator, cfg.replicates, cfg.seed,
                                             cfg.threads};
                    it = cache.emplace(delta, sim::simulate_estimation(sc)).first;
                }
                std::optional<double> exact;
                if (estimator == sim::Estimator::SignCommit) {
                    exact = riskcore::exact_cvar(sim::exact_sign_estimator_law(e.n, delta), level);
                } else if (estimator == sim::Estimator::AlwaysZero) {
                    exact = riskcore::exact_cvar(riskcore::DiscreteLossDistribution({{delta, 1.0}}),
                                                 level);
                }
                rep.rows.push_back(dominance_row(level, subject, "delta", delta,
                                                 bounds::estimation_bound(e.n, delta, level),
                                                 it->second, exact));
            }
        }
    }
}

void bandit_rows(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const auto& bp = *cfg.bandit;
    const bool sweep = cfg.kind == ExperimentKind::Verify;
    for (const auto& policy : bp.policies) {
        const std::string subject(sim::policy_name(policy.kind));
        rep.metadata.subjects.push_back(subject);
        std::map<double, SampleSet> cache;
        for (const RiskLevel level : cfg.alphas) {
            const double opt = bounds::optimal_gap(bp.horizon, level).argmax;
            for (double gap : resolve(bp.gap, opt, sweep)) {
                auto it = cache.find(gap);
                if (it == cache.end()) {
                    sim::BanditConfig sc{bp.horizon, gap, policy, cfg.replicates, cfg.seed,
                                         cfg.threads};
                    it = cache.emplace(gap, sim::simulate_bandit(sc)).first;
                }
                std::optional<double> exact;
                if (policy.kind == sim::PolicyKind::UniformRandom && bp.horizon <= 64) {
                    exact = riskcore::exact_cvar(sim::exact_uniform_bandit_law(gap, bp.horizon),
                                                 level);
                }
                rep.rows.push_back(dominance_row(level, subject, "gap", gap,
                                                 bounds::bandit_bound(gap, bp.horizon, level),
                                                 it->second, exact));
            }
        }
    }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.metadata.kind = std::string(kind_name(cfg.kind));
    rep.metadata.seed = cfg.seed;

    switch (cfg.kind) {
        case ExperimentKind::Psi:
            psi_rows(cfg, rep);
            break;
        case ExperimentKind::Bound:
            bound_rows(cfg, rep);
            break;
        case ExperimentKind::SimulateEstimation:
        case ExperimentKind::SimulateBandit:
        case ExperimentKind::Verify:
            rep.metadata.replicates = cfg.replicates;
            if (cfg.estimation) estimation_rows(cfg, rep);
            if (cfg.bandit) bandit_rows(cfg, rep);
            break;
    }

    rep.metadata.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

int exit_status(const ExperimentConfig& config, const ExperimentReport& report) noexcept {
    if (config.kind != ExperimentKind::Verify) return 0;
    return report.all_dominated() ? 0 : 1;
}

}  // namespace cvarlb::cli
