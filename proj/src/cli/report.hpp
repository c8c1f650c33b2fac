#ifndef UNCERT_CLI_REPORT_HPP
#define UNCERT_CLI_REPORT_HPP

#include <ostream>
#include <string>
#include <vector>

#include "uncert/metrology.hpp"

namespace uncert::cli {

/// One line of report.csv / report.json. Unavailable quantities are NaN.
struct ReportRow {
    std::string scenario_id;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double overall_q = 0.0;
    double resolution_q = 0.0;
    double error_bar_q = 0.0;
    double error_bar_spread_q = 0.0;
    double overall_p = 0.0;
    double resolution_p = 0.0;
    double error_bar_p = 0.0;
    double error_bar_spread_p = 0.0;
    double werner_q = 0.0;
    double werner_p = 0.0;
    double error_bar_product = 0.0;
    double resolution_product = 0.0;
    double bound_simple = 0.0;
    double bound_uffink = 0.0;
    double margin_simple = 0.0;
    double margin_uffink = 0.0;
    double margin_resolution = 0.0;
    bool pass = false;
    std::string note;
};

ReportRow to_row(const WidthReport& r);

/// Scientific notation with 6 significant digits; "nan", "inf", "-inf" otherwise.
std::string format_number(double v);

extern const char* const kReportVersion;
const std::vector<std::string>& report_columns();

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_json(std::ostream& out, const std::vector<ReportRow>& rows);

/// Writes <dir>/report.csv and <dir>/report.json, creating dir.
void write_reports(const std::string& dir, const std::vector<ReportRow>& rows);

} // namespace uncert::cli

#endif // UNCERT_CLI_REPORT_HPP
