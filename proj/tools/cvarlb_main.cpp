// cvarlb: compute two-point Bayesian CVaR lower bounds and check them against
// simulated and exact loss laws.
//
//   cvarlb psi      --alpha 0 --alpha 0.5 [--rho-max 1.2 --rho-step 0.01]
//   cvarlb bound    --alpha 0 --n 100 --delta 0.0166667
//   cvarlb simulate --alpha 0.5 --horizon 200 --gap optimal --policy ucb
//   cvarlb verify   --alpha 0 --horizon 400 --gap optimal --policy uniform
//
// Exit status: 0 success (for verify: every bound dominated), 1 a verify row
// was violated, 2 usage or validation error, 3 I/O failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cvarlb/experiment.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Flags {
    std::vector<double> alphas;
    std::optional<std::int64_t> n;
    std::vector<std::string> delta;
    std::optional<std::int64_t> horizon;
    std::vector<std::string> gap;
    std::vector<std::string> policies;
    std::vector<std::string> estimators;
    std::optional<std::int64_t> tau;
    std::optional<double> ucb_c;
    std::optional<double> l_max;
    std::optional<double> c_sep;
    std::optional<double> gamma_h;
    std::optional<double> rho_max;
    std::optional<double> rho_step;
    std::optional<std::int64_t> replicates;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> threads;
    std::optional<std::string> format;
    std::optional<std::string> out;
    std::optional<std::string> config;
};

// "optimal" stays a keyword; anything numeric becomes a number; the rest is
// passed through as a string so validation can name the field.
nlohmann::json param_value(const std::vector<std::string>& raw) {
    auto one = [](const std::string& s) -> nlohmann::json {
        if (s == "optimal") return s;
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        return s;
    };
    if (raw.size() == 1) return one(raw.front());
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : raw) arr.push_back(one(s));
    return arr;
}

nlohmann::json names(const std::vector<std::string>& raw) {
    if (raw.size() == 1) return raw.front();
    return raw;
}

nlohmann::json build_config(const std::string& command, const Flags& f) {
    nlohmann::json doc = f.config ? cvarlb::cli::load_config_file(*f.config)
                                  : nlohmann::json::object();
    if (command == "simulate") {
        const bool bandit = f.horizon || !f.gap.empty() || !f.policies.empty() ||
                            (doc.is_object() && doc.contains("horizon"));
        doc["kind"] = bandit ? "simulate_bandit" : "simulate_estimation";
    } else {
        doc["kind"] = command;
    }
    if (!f.alphas.empty()) doc["alphas"] = f.alphas;
    if (f.n) doc["n"] = *f.n;
    if (!f.delta.empty()) doc["delta"] = param_value(f.delta);
    if (f.horizon) doc["horizon"] = *f.horizon;
    if (!f.gap.empty()) doc["gap"] = param_value(f.gap);
    if (!f.policies.empty()) doc["policies"] = names(f.policies);
    if (!f.estimators.empty()) doc["estimators"] = names(f.estimators);
    if (f.tau) doc["tau"] = *f.tau;
    if (f.ucb_c) doc["ucb_c"] = *f.ucb_c;
    if (f.l_max) doc["l_max"] = *f.l_max;
    if (f.c_sep) doc["c_sep"] = *f.c_sep;
    if (f.gamma_h) doc["gamma_h"] = *f.gamma_h;
    if (f.rho_max) doc["rho_max"] = *f.rho_max;
    if (f.rho_step) doc["rho_step"] = *f.rho_step;
    if (f.replicates) doc["replicates"] = *f.replicates;
    if (f.seed) doc["seed"] = *f.seed;
    if (f.threads) doc["threads"] = *f.threads;
    if (f.format) doc["format"] = *f.format;
    if (f.out) doc["out"] = *f.out;
    return doc;
}

void add_common(CLI::App& cmd, Flags& f) {
    cmd.add_option("--alpha", f.alphas, "Tail level in [0, 1); repeatable");
    cmd.add_option("--replicates", f.replicates, "Monte Carlo replicates");
    cmd.add_option("--seed", f.seed, "Master seed");
    cmd.add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    cmd.add_option("--format", f.format, "csv or json");
    cmd.add_option("--out", f.out, "Output file (default stdout)");
    cmd.add_option("--config", f.config, "JSON config file; flags override its fields");
}

void add_problem(CLI::App& cmd, Flags& f) {
    cmd.add_option("--n", f.n, "Estimation sample size");
    cmd.add_option("--delta", f.delta, "Separation, repeatable, or 'optimal'");
    cmd.add_option("--horizon", f.horizon, "Bandit horizon T");
    cmd.add_option("--gap", f.gap, "Bandit gap, repeatable, or 'optimal'");
}

void add_subjects(CLI::App& cmd, Flags& f) {
    cmd.add_option("--policy", f.policies, "uniform | etc | ucb | thompson | all; repeatable");
    cmd.add_option("--estimator", f.estimators,
                   "sample_mean | sign_commit | always_zero | all; repeatable");
    cmd.add_option("--tau", f.tau, "Explore-then-commit pulls per arm (0 = ceil(T^(2/3)))");
    cmd.add_option("--ucb-c", f.ucb_c, "UCB exploration scale");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-point Bayesian CVaR lower bounds and their Monte Carlo checks"};
    app.require_subcommand(1);
    Flags flags;

    auto* psi = app.add_subcommand("psi", "Sweep Psi_alpha(rho) and rho * Psi_alpha(rho)");
    add_common(*psi, flags);
    psi->add_option("--rho-max", flags.rho_max, "Largest rho (default 1.2)");
    psi->add_option("--rho-step", flags.rho_step, "rho grid step (default 0.01)");

    auto* bound = app.add_subcommand("bound", "Evaluate the lower bounds");
    add_common(*bound, flags);
    add_problem(*bound, flags);
    bound->add_option("--l-max", flags.l_max, "Two-point template: loss ceiling");
    bound->add_option("--c-sep", flags.c_sep, "Two-point template: pairwise separation C");
    bound->add_option("--gamma", flags.gamma_h, "Two-point template: Hellinger budget");

    auto* simulate = app.add_subcommand("simulate", "Simulate one problem and compare to its bound");
    add_common(*simulate, flags);
    add_problem(*simulate, flags);
    add_subjects(*simulate, flags);

    auto* verify = app.add_subcommand("verify", "Check every bound against simulation; exit 1 on violation");
    add_common(*verify, flags);
    add_problem(*verify, flags);
    add_subjects(*verify, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const auto config = cvarlb::cli::parse_config(build_config(command, flags));
        const auto report = cvarlb::cli::run_experiment(config);
        cvarlb::cli::emit_report(report, config.format, config.output_path, std::cout);
        const int status = cvarlb::cli::exit_status(config, report);
        if (status != 0) {
            std::cerr << "cvarlb: at least one bound was not dominated\n";
            return kExitViolation;
        }
        return 0;
    } catch (const cvarlb::cli::ValidationError& e) {
        std::cerr << "cvarlb: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cvarlb::cli::IoError& e) {
        std::cerr << "cvarlb: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "cvarlb: " << e.what() << '\n';
        return kExitUsage;
    }
}
