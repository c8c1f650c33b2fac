#include "cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace uncert::cli {

const char* const kReportVersion = "# uncert-report v1";

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<double> numbers(const ReportRow& r) {
    return {r.eps1,          r.eps2,         r.overall_q,        r.resolution_q,       r.error_bar_q,
            r.error_bar_spread_q, r.overall_p, r.resolution_p,   r.error_bar_p,        r.error_bar_spread_p,
            r.werner_q,      r.werner_p,     r.error_bar_product, r.resolution_product, r.bound_simple,
            r.bound_uffink,  r.margin_simple, r.margin_uffink,   r.margin_resolution};
}

// Value as printed, so both report formats carry the same digits.
nlohmann::ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return std::stod(format_number(v));
}

} // namespace

ReportRow to_row(const WidthReport& r) {
    ReportRow row;
    row.scenario_id = r.scenario_id;
    row.eps1 = r.eps.eps1;
    row.eps2 = r.eps.eps2;
    row.overall_q = r.q.overall;
    row.resolution_q = r.q.resolution;
    row.error_bar_q = r.q.error_bar.width;
    row.error_bar_spread_q = r.q.error_bar.spread;
    row.overall_p = r.p.overall;
    row.resolution_p = r.p.resolution;
    row.error_bar_p = r.p.error_bar.width;
    row.error_bar_spread_p = r.p.error_bar.spread;
    row.werner_q = r.q.werner;
    row.werner_p = r.p.werner;
    row.error_bar_product = r.error_bar_product;
    row.resolution_product = r.resolution_product;
    row.bound_simple = r.bound_simple;
    row.bound_uffink = r.bound_uffink;
    row.margin_simple = r.margin_simple;
    row.margin_uffink = r.margin_uffink;
    row.margin_resolution = r.margin_resolution;
    row.pass = r.pass();
    if (r.no_positive_bound) {
        row.note = "no positive bound";
    } else if (!r.q.error_bar.finite() || !r.p.error_bar.finite()) {
        row.note = "exceeds window";
    }
    return row;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0; // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols{
        "scenario_id",   "eps1",          "eps2",          "overall_q",          "resolution_q",
        "error_bar_q",   "error_bar_spread_q", "overall_p", "resolution_p",      "error_bar_p",
        "error_bar_spread_p", "werner_q", "werner_p",      "error_bar_product",  "resolution_product",
        "bound_simple",  "bound_uffink",  "margin_simple", "margin_uffink",      "margin_resolution",
        "pass",          "note"};
    return cols;
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << kReportVersion << '\n';
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const ReportRow& r : rows) {
        out << csv_field(r.scenario_id);
        for (double v : numbers(r)) out << ',' << format_number(v);
        out << ',' << (r.pass ? "true" : "false") << ',' << csv_field(r.note) << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<ReportRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    const auto& cols = report_columns();
    for (const ReportRow& r : rows) {
        nlohmann::ordered_json o;
        o[cols.front()] = r.scenario_id;
        const std::vector<double> v = numbers(r);
        for (std::size_t i = 0; i < v.size(); ++i) o[cols[i + 1]] = json_number(v[i]);
        o["pass"] = r.pass;
        o["note"] = r.note;
        arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
}

void write_reports(const std::string& dir, const std::vector<ReportRow>& rows) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    std::ofstream csv(base / "report.csv");
    std::ofstream js(base / "report.json");
    if (!csv || !js) throw std::runtime_error(dir + ": cannot write reports");
    write_csv(csv, rows);
    write_json(js, rows);
}

} // namespace uncert::cli
