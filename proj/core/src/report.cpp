#include <cstdio>
#include <fstream>
#include <ostream>

#include "cvarlb/experiment.hpp"

namespace cvarlb::cli {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string optional_number(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string{};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& row, const char* key) {
    if (!row.contains(key) || row.at(key).is_null()) return std::nullopt;
    return row.at(key).get<double>();
}

}  // namespace

std::string render_csv(const ExperimentReport& report) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : report.rows) {
        out += format_number(r.alpha);
        out += ',';
        out += r.param_name;
        out += ',';
        out += format_number(r.param_value);
        out += ',';
        out += format_number(r.bound);
        out += ',';
        out += format_number(r.t_star);
        out += ',';
        out += optional_number(r.empirical_cvar);
        out += ',';
        out += optional_number(r.exact_cvar);
        out += ',';
        out += optional_number(r.standard_error);
        out += ',';
        out += optional_number(r.mc_slack);
        out += ',';
        out += r.dominated ? "true" : "false";
        out += '\n';
    }
    return out;
}

json render_json(const ExperimentReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row{
            {"alpha", r.alpha},
            {"param_name", r.param_name},
            {"param_value", r.param_value},
            {"bound", r.bound},
            {"t_star", r.t_star},
            {"empirical_cvar", optional_json(r.empirical_cvar)},
            {"exact_cvar", optional_json(r.exact_cvar)},
            {"stderr", optional_json(r.standard_error)},
            {"mc_slack", optional_json(r.mc_slack)},
            {"dominated", r.dominated},
        };
        if (!r.subject.empty()) row["subject"] = r.subject;
        if (r.psi) row["psi"] = *r.psi;
        rows.push_back(std::move(row));
    }
    const auto& m = report.metadata;
    return json{
        {"metadata",
         {{"kind", m.kind},
          {"seed", m.seed},
          {"replicates", m.replicates},
          {"subjects", m.subjects},
          {"wall_time_seconds", m.wall_time_seconds}}},
        {"rows", std::move(rows)},
    };
}

ExperimentReport parse_json_report(const json& doc) {
    ExperimentReport report;
    const json& m = doc.at("metadata");
    report.metadata.kind = m.at("kind").get<std::string>();
    report.metadata.seed = m.at("seed").get<std::uint64_t>();
    report.metadata.replicates = m.at("replicates").get<std::int64_t>();
    report.metadata.subjects = m.at("subjects").get<std::vector<std::string>>();
    report.metadata.wall_time_seconds = m.at("wall_time_seconds").get<double>();
    for (const json& row : doc.at("rows")) {
        ReportRow r;
        r.alpha = row.at("alpha").get<double>();
        r.param_name = row.at("param_name").get<std::string>();
        r.param_value = row.at("param_value").get<double>();
        r.bound = row.at("bound").get<double>();
        r.t_star = row.at("t_star").get<double>();
        r.empirical_cvar = optional_from(row, "empirical_cvar");
        r.exact_cvar = optional_from(row, "exact_cvar");
        r.standard_error = optional_from(row, "stderr");
        r.mc_slack = optional_from(row, "mc_slack");
        r.dominated = row.at("dominated").get<bool>();
        if (row.contains("subject")) r.subject = row.at("subject").get<std::string>();
        r.psi = optional_from(row, "psi");
        report.rows.push_back(std::move(r));
    }
    return report;
}

void emit_report(const ExperimentReport& report, OutputFormat format,
                 const std::optional<std::filesystem::path>& path, std::ostream& out) {
    const std::string text =
        format == OutputFormat::Csv ? render_csv(report) : render_json(report).dump(2) + "\n";
    if (!path) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(*path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path->string() + "' for writing");
    file << text;
    file.flush();
    if (!file) throw IoError("failed writing '" + path->string() + "'");
}

}  // namespace cvarlb::cli
