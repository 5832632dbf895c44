#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "cvarlb/bounds.hpp"
#include "cvarlb/experiment.hpp"

using namespace cvarlb::cli;
using nlohmann::json;

namespace {

std::set<std::string> error_fields(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ValidationError& e) {
        std::set<std::string> out;
        for (const auto& f : e.errors()) out.insert(f.field);
        return out;
    }
    return {};
}

ReportRow sample_row() {
    ReportRow r;
    r.alpha = 0.5;
    r.param_name = "uniform.gap";
    r.param_value = 0.0235702260396;
    r.bound = 2.0 / 9;
    r.t_star = 0.125;
    r.empirical_cvar = 1.75;
    r.exact_cvar = 1.7500000001;
    r.standard_error = 0.01;
    r.mc_slack = 0.05;
    r.dominated = true;
    r.subject = "uniform";
    return r;
}

}  // namespace

TEST(Formatting, TwelveSignificantDigits) {
    EXPECT_EQ(format_number(2.0 / 9), "0.222222222222");
    EXPECT_EQ(format_number(1.0 / 135), "0.00740740740741");
    EXPECT_EQ(format_number(0.0), "0");
}

TEST(Csv, HeaderOnlyWhenEmpty) {
    ExperimentReport empty;
    EXPECT_EQ(render_csv(empty), std::string(kCsvHeader) + "\n");
    EXPECT_EQ(std::string(kCsvHeader),
              "alpha,param_name,param_value,bound,t_star,empirical_cvar,exact_cvar,stderr,"
              "mc_slack,dominated");
}

TEST(Csv, RowRendering) {
    ExperimentReport rep;
    ReportRow r;
    r.alpha = 0;
    r.param_name = "delta";
    r.param_value = 1.0 / 60;
    r.bound = 1.0 / 135;
    rep.rows.push_back(r);
    rep.rows.push_back(sample_row());
    rep.rows.back().dominated = false;
    const std::string csv = render_csv(rep);
    EXPECT_NE(csv.find("\n0,delta,0.0166666666667,0.00740740740741,0,,,,,true\n"), std::string::npos);
    EXPECT_NE(csv.find("0.5,uniform.gap,0.0235702260396,0.222222222222,0.125,1.75,1.7500000001,0.01,0.05,false\n"),
              std::string::npos);
}

TEST(Json, RoundTrip) {
    ExperimentReport rep;
    rep.rows.push_back(sample_row());
    ReportRow psi_row;
    psi_row.param_name = "rho";
    psi_row.param_value = 0.3;
    psi_row.psi = 0.41;
    psi_row.bound = 0.123;
    rep.rows.push_back(psi_row);
    rep.metadata = {"verify", 17, 5000, {"uniform", "ucb"}, 1.25};
    const json doc = json::parse(render_json(rep).dump());
    const auto back = parse_json_report(doc);
    EXPECT_EQ(back.rows, rep.rows);
    EXPECT_EQ(back.metadata, rep.metadata);
    EXPECT_TRUE(doc["rows"][1]["empirical_cvar"].is_null());
    EXPECT_TRUE(doc["rows"][0].contains("stderr"));
}

TEST(ParseConfig, ValidationNamesEveryField) {
    EXPECT_EQ(error_fields({{"kind", "bogus"}, {"alphas", {0.0}}}), (std::set<std::string>{"kind"}));
    EXPECT_EQ(error_fields({{"kind", "psi"}}), (std::set<std::string>{"alphas"}));
    EXPECT_EQ(error_fields({{"kind", "bound"}, {"alphas", {1.0}}, {"n", 100}, {"delta", 0.1}}),
              (std::set<std::string>{"alphas"}));
    const auto many = error_fields({{"kind", "simulate_bandit"},
                                    {"alphas", {0.5}},
                                    {"horizon", -3},
                                    {"gap", "huge"},
                                    {"policies", {"greedy"}},
                                    {"replicates", 0},
                                    {"format", "xml"},
                                    {"colour", "red"}});
    for (const char* f : {"horizon", "gap", "policies", "replicates", "format", "colour"}) {
        EXPECT_TRUE(many.count(f)) << f;
    }
    EXPECT_TRUE(error_fields({{"kind", "bound"}, {"alphas", {0.0}}}).count("problem"));
    EXPECT_TRUE(error_fields({{"kind", "psi"}, {"alphas", {0.0}}, {"rho_step", 0.0}}).count("rho_step"));
    EXPECT_TRUE(error_fields({{"kind", "bound"}, {"alphas", {0.0}}, {"n", 10}, {"delta", -1}})
                    .count("delta"));
    EXPECT_TRUE(error_fields({{"kind", "simulate_estimation"},
                              {"alphas", {0.0}},
                              {"n", 10},
                              {"delta", 0.1},
                              {"estimators", {"median"}}})
                    .count("estimators"));
    EXPECT_TRUE(error_fields(json::array()).count("config"));
}

TEST(ParseConfig, Defaults) {
    const auto c = parse_config({{"kind", "verify"}, {"alphas", {0.0}}, {"horizon", 200}, {"gap", "optimal"}});
    ASSERT_TRUE(c.bandit);
    EXPECT_TRUE(c.bandit->gap.optimal);
    EXPECT_EQ(c.bandit->policies.size(), 4u);
    EXPECT_EQ(c.format, OutputFormat::Csv);
    EXPECT_FALSE(c.output_path);
}

TEST(ParseConfig, NoFileWrittenOnValidationFailure) {
    const auto path = std::filesystem::temp_directory_path() / "cvarlb_experiment_test_out.csv";
    std::filesystem::remove(path);
    const json doc = {{"kind", "bound"}, {"alphas", {2.0}}, {"n", 10}, {"delta", 0.1},
                      {"out", path.string()}};
    EXPECT_THROW(
        {
            const auto cfg = parse_config(doc);
            std::ostringstream sink;
            emit_report(run_experiment(cfg), cfg.format, cfg.output_path, sink);
        },
        ValidationError);
    EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(EmitReport, IoErrorNamesPath) {
    ExperimentReport rep;
    std::ostringstream sink;
    const std::filesystem::path bad = "/nonexistent-dir/x/report.csv";
    try {
        emit_report(rep, OutputFormat::Csv, bad, sink);
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
    }
    EXPECT_THROW(load_config_file("/nonexistent-dir/cfg.json"), IoError);
}

TEST(RunExperiment, BoundRowEstimation) {
    const auto rep = run_experiment(
        parse_config({{"kind", "bound"}, {"alphas", {0.0}}, {"n", 100}, {"delta", 1.0 / 60}}));
    ASSERT_EQ(rep.rows.size(), 1u);
    EXPECT_NEAR(rep.rows[0].bound, 1.0 / 135, 1e-15);
    EXPECT_EQ(rep.rows[0].param_name, "delta");
}

TEST(RunExperiment, TemplateRow) {
    const auto rep = run_experiment(parse_config(
        {{"kind", "bound"}, {"alphas", {0.0}}, {"l_max", 1.0}, {"c_sep", 1.0}, {"gamma_h", 1.0 / 18}}));
    ASSERT_EQ(rep.rows.size(), 1u);
    EXPECT_EQ(format_number(rep.rows[0].bound), "0.222222222222");
}

TEST(RunExperiment, PsiSweepPeaksAtCAlpha) {
    const auto rep = run_experiment(parse_config({{"kind", "psi"}, {"alphas", {0.0, 0.75}}}));
    EXPECT_EQ(rep.rows.size(), 2u * 121u);
    double best0 = 0.0, best75 = 0.0;
    for (const auto& r : rep.rows) {
        ASSERT_TRUE(r.psi);
        EXPECT_NEAR(r.bound, r.param_value * *r.psi, 1e-15);
        (r.alpha == 0.0 ? best0 : best75) = std::max(r.alpha == 0.0 ? best0 : best75, r.bound);
    }
    EXPECT_NEAR(best0, 2.0 / 27, 1e-5);
    EXPECT_NEAR(best75, 1.0 / 6, 1e-15);
}

TEST(RunExperiment, VerifyUniformOptimal) {
    const auto cfg = parse_config({{"kind", "verify"},
                                   {"alphas", {0.0}},
                                   {"horizon", 400},
                                   {"gap", "optimal"},
                                   {"policies", {"uniform"}},
                                   {"replicates", 20000},
                                   {"seed", 1}});
    const auto rep = run_experiment(cfg);
    ASSERT_EQ(rep.rows.size(), 3u);
    double sup = 0.0;
    for (const auto& r : rep.rows) {
        EXPECT_TRUE(r.dominated);
        EXPECT_TRUE(r.empirical_cvar);
        EXPECT_FALSE(r.exact_cvar);
        sup = std::max(sup, r.bound);
    }
    EXPECT_NEAR(sup, 2.0 / 27 * 20, 1e-12);
    EXPECT_EQ(exit_status(cfg, rep), 0);
}

TEST(RunExperiment, ExactRowsHaveExactColumn) {
    const auto cfg = parse_config({{"kind", "verify"},
                                   {"alphas", {0.0, 0.5, 0.9}},
                                   {"n", 4},
                                   {"delta", "optimal"},
                                   {"estimators", {"sign_commit", "always_zero"}},
                                   {"replicates", 2000}});
    const auto rep = run_experiment(cfg);
    for (const auto& r : rep.rows) {
        ASSERT_TRUE(r.exact_cvar);
        EXPECT_GE(*r.exact_cvar, r.bound - 1e-9);
    }
}

TEST(RunExperiment, DeterministicCsvAcrossThreads) {
    json doc = {{"kind", "simulate_bandit"}, {"alphas", {0.0, 0.5}}, {"horizon", 60},
                {"gap", "optimal"},          {"policies", "all"},      {"replicates", 3000},
                {"seed", 9},                 {"threads", 1}};
    const auto a = render_csv(run_experiment(parse_config(doc)));
    doc["threads"] = 4;
    const auto b = render_csv(run_experiment(parse_config(doc)));
    EXPECT_EQ(a, b);
}

TEST(Slack, TailStandardError) {
    const cvarlb::riskcore::SampleSet s({1, 2, 3, 4});
    const cvarlb::riskcore::RiskLevel half(0.5);
    // top 2 = {4, 3}: sd = sqrt(0.5), k = 2.
    EXPECT_NEAR(tail_standard_error(s, half), std::sqrt(0.5) / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(mc_slack(s, half), 5 * std::sqrt(0.5) / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(tail_standard_error(s, cvarlb::riskcore::RiskLevel(0.9)), 0.0);
}
