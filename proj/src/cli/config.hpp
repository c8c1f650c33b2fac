#ifndef UNCERT_CLI_CONFIG_HPP
#define UNCERT_CLI_CONFIG_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uncert/metrology.hpp"

namespace uncert::cli {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GaussianSpec {
    double sigma = 1.0;
    double x0 = 0.0;
    double p0 = 0.0;
};

struct GeneratorSpec {
    std::string id;
    std::vector<std::pair<double, GaussianSpec>> components; ///< (weight, gaussian)
};

struct SmearingSpec {
    enum class Kind { Delta, Gaussian, Uniform };
    std::string id;
    Kind kind = Kind::Delta;
    double a = 0.0; ///< c, sigma or lower end
    double b = 0.0; ///< upper end (uniform)
};

struct WarpAxisSpec {
    std::vector<std::pair<double, double>> knots;
    std::optional<std::vector<double>> sinusoid; ///< amplitude, period, spacing, lo, hi
};

struct WarpSpec {
    std::string id;
    WarpAxisSpec q;
    WarpAxisSpec p;
};

struct ScenarioConfig {
    double hbar = 1.0;
    GridSpec grid;
    std::vector<ConfidencePair> confidence;
    std::vector<GeneratorSpec> generators;
    std::vector<SmearingSpec> smearings;
    std::vector<WarpSpec> warps;
    std::vector<double> delta_ladder{16.0, 8.0, 4.0, 2.0};
    std::vector<double> probe_centers{0.0};
    ProbeKind probe_kind = ProbeKind::Box;
};

/// `kind:key=val,...` with kind gaussian (sigma, x0, p0), box (width, center),
/// cat (sigma, separation) or mixture (sigma, separation). cat is the
/// superposition and mixture the equal mixture of Gaussians at +-separation/2.
struct StateSpec {
    std::string kind;
    std::map<std::string, double> params;

    double get(const std::string& key) const;
};

StateSpec parse_state_spec(const std::string& text);
StateSpec state_spec_from_json(const nlohmann::json& j, const std::string& path);

/// Grid of n points centred on 0 sized for the state: the balanced grid of
/// its Gaussian width (or 64 points across a box), widened when the state
/// would not fit. x_max > 0 forces [-x_max, x_max).
GridSpec auto_grid(const StateSpec& spec, Index n, double hbar, double x_max = 0.0);
MixedState build_state(const StateSpec& spec, const GridSpec& grid, double hbar);

struct LatticeAxis {
    std::string name;
    std::vector<double> values;
};

struct ScanConfig {
    double hbar = 1.0;
    std::optional<GridSpec> grid;
    Index grid_n = 4096;
    StateSpec state;
    ConfidencePair eps{0.05, 0.05};
    std::vector<LatticeAxis> lattice;
    std::size_t max_points = 10000;

    std::size_t point_count() const;
};

nlohmann::json read_json_file(const std::string& path);

/// Strict parsers: unknown keys and out-of-range values raise ConfigError.
ScenarioConfig parse_scenario(const nlohmann::json& j, std::optional<double> hbar_override = std::nullopt);
ScanConfig parse_scan(const nlohmann::json& j, std::optional<double> hbar_override = std::nullopt,
                      Index default_grid_n = 4096);

MixedState build_generator(const GeneratorSpec& spec, const GridSpec& grid, double hbar);
GridMeasure build_smearing(const SmearingSpec& spec, double dx);
WarpMap build_warp(const WarpSpec& spec);

} // namespace uncert::cli

#endif // UNCERT_CLI_CONFIG_HPP
