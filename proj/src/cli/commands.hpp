#ifndef UNCERT_CLI_COMMANDS_HPP
#define UNCERT_CLI_COMMANDS_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/report.hpp"

namespace uncert::cli {

enum ExitCode : int { kExitPass = 0, kExitRelationFailure = 1, kExitConfigError = 2 };

struct GlobalOptions {
    std::optional<double> hbar; ///< overrides the config value when set
    std::string out_dir = "./reports";
    Index grid_n = 4096;
};

/// Joint-observable rows (generator x confidence, then warped variants) and
/// smearing rows for every configured smearing.
std::vector<ReportRow> verify_rows(const ScenarioConfig& cfg, std::ostream& log);

/// Rows for Q*mu: resolution vs overall width, error bar vs resolution width
/// and error bar vs the distance bound.
ReportRow smearing_row(const SmearingSpec& spec, const ScenarioConfig& cfg, ConfidencePair eps);

int run_verify(const std::string& config_path, const GlobalOptions& opt, std::ostream& out, std::ostream& err);
int run_widths(const std::string& state, const std::string& eps, double x_max, const GlobalOptions& opt,
               std::ostream& out, std::ostream& err);
int run_scan(const std::string& config_path, const GlobalOptions& opt, std::ostream& out, std::ostream& err);

/// "e" or "e1,e2".
ConfidencePair parse_eps(const std::string& text);

struct ScanRow {
    std::vector<double> params;
    ConfidencePair eps{0.05, 0.05};
    double width_q = 0.0;
    double width_p = 0.0;
    double product = 0.0;
    double bound_simple = 0.0;
    double bound_uffink = 0.0;
    double tolerance = 0.0;
};

std::vector<ScanRow> scan_rows(const ScanConfig& cfg);
void write_scan_csv(std::ostream& out, const ScanConfig& cfg, const std::vector<ScanRow>& rows);

} // namespace uncert::cli

#endif // UNCERT_CLI_COMMANDS_HPP
