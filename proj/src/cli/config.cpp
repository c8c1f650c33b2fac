#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

namespace uncert::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            fail(path + "." + key, "unknown key");
        }
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

double required_number(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(path + "." + key, "missing");
    return number(j.at(key), path + "." + key);
}

double optional_number(const json& j, const char* key, const std::string& path, double fallback) {
    return j.contains(key) ? number(j.at(key), path + "." + key) : fallback;
}

double positive(double v, const std::string& path) {
    if (!(v > 0.0)) fail(path, "must be positive");
    return v;
}

const json& array_at(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(path + "." + key, "missing");
    const json& a = j.at(key);
    if (!a.is_array()) fail(path + "." + key, "expected an array");
    return a;
}

std::vector<double> number_list(const json& a, const std::string& path) {
    if (!a.is_array()) fail(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(number(a[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string id_or(const json& j, const std::string& path, const std::string& fallback) {
    if (!j.contains("id")) return fallback;
    if (!j.at("id").is_string()) fail(path + ".id", "expected a string");
    return j.at("id").get<std::string>();
}

ConfidencePair confidence_pair(const json& j, const std::string& path) {
    const std::vector<double> v = number_list(j, path);
    if (v.size() != 2) fail(path, "expected [eps1, eps2]");
    for (int i = 0; i < 2; ++i) {
        if (!(v[i] > 0.0 && v[i] < 1.0)) fail(path + "[" + std::to_string(i) + "]", "must lie in (0,1)");
    }
    return ConfidencePair{v[0], v[1]};
}

GaussianSpec gaussian_spec(const json& j, const std::string& path) {
    check_keys(j, path, {"sigma", "x0", "p0"});
    GaussianSpec g;
    g.sigma = positive(required_number(j, "sigma", path), path + ".sigma");
    g.x0 = optional_number(j, "x0", path, 0.0);
    g.p0 = optional_number(j, "p0", path, 0.0);
    return g;
}

GeneratorSpec generator_spec(const json& j, const std::string& path, std::size_t index) {
    check_keys(j, path, {"id", "gaussian", "mixture"});
    GeneratorSpec g;
    g.id = id_or(j, path, "gen" + std::to_string(index));
    if (j.contains("gaussian") == j.contains("mixture")) fail(path, "exactly one of gaussian, mixture required");
    if (j.contains("gaussian")) {
        g.components.emplace_back(1.0, gaussian_spec(j.at("gaussian"), path + ".gaussian"));
        return g;
    }
    const json& m = array_at(j, "mixture", path);
    if (m.empty()) fail(path + ".mixture", "must not be empty");
    double total = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::string p = path + ".mixture[" + std::to_string(i) + "]";
        check_keys(m[i], p, {"weight", "gaussian"});
        const double w = required_number(m[i], "weight", p);
        if (!(w >= 0.0)) fail(p + ".weight", "must be nonnegative");
        if (!m[i].contains("gaussian")) fail(p + ".gaussian", "missing");
        g.components.emplace_back(w, gaussian_spec(m[i].at("gaussian"), p + ".gaussian"));
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) fail(path + ".mixture", "weights must sum to 1");
    return g;
}

SmearingSpec smearing_spec(const json& j, const std::string& path, std::size_t index) {
    check_keys(j, path, {"id", "delta", "gaussian", "uniform"});
    SmearingSpec s;
    s.id = id_or(j, path, "smear" + std::to_string(index));
    const int kinds = static_cast<int>(j.contains("delta")) + static_cast<int>(j.contains("gaussian")) +
                      static_cast<int>(j.contains("uniform"));
    if (kinds != 1) fail(path, "exactly one of delta, gaussian, uniform required");
    if (j.contains("delta")) {
        const json& d = j.at("delta");
        check_keys(d, path + ".delta", {"c"});
        s.kind = SmearingSpec::Kind::Delta;
        s.a = required_number(d, "c", path + ".delta");
    } else if (j.contains("gaussian")) {
        const json& d = j.at("gaussian");
        check_keys(d, path + ".gaussian", {"sigma"});
        s.kind = SmearingSpec::Kind::Gaussian;
        s.a = positive(required_number(d, "sigma", path + ".gaussian"), path + ".gaussian.sigma");
    } else {
        const json& d = j.at("uniform");
        check_keys(d, path + ".uniform", {"a", "b"});
        s.kind = SmearingSpec::Kind::Uniform;
        s.a = required_number(d, "a", path + ".uniform");
        s.b = required_number(d, "b", path + ".uniform");
        if (!(s.b > s.a)) fail(path + ".uniform", "need a < b");
    }
    return s;
}

WarpAxisSpec warp_axis(const json& j, const std::string& path) {
    check_keys(j, path, {"knots", "sinusoid"});
    if (j.contains("knots") == j.contains("sinusoid")) fail(path, "exactly one of knots, sinusoid required");
    WarpAxisSpec w;
    if (j.contains("knots")) {
        const json& k = array_at(j, "knots", path);
        for (std::size_t i = 0; i < k.size(); ++i) {
            const std::vector<double> xy = number_list(k[i], path + ".knots[" + std::to_string(i) + "]");
            if (xy.size() != 2) fail(path + ".knots[" + std::to_string(i) + "]", "expected [x, y]");
            w.knots.emplace_back(xy[0], xy[1]);
        }
        if (w.knots.size() < 2) fail(path + ".knots", "need at least two knots");
        return w;
    }
    const json& s = j.at("sinusoid");
    const std::string sp = path + ".sinusoid";
    check_keys(s, sp, {"amplitude", "period", "spacing", "lo", "hi"});
    w.sinusoid = std::vector<double>{required_number(s, "amplitude", sp), positive(required_number(s, "period", sp), sp + ".period"),
                                     positive(required_number(s, "spacing", sp), sp + ".spacing"),
                                     required_number(s, "lo", sp), required_number(s, "hi", sp)};
    return w;
}

PiecewiseLinear build_warp_axis(const WarpAxisSpec& w) {
    if (w.sinusoid) {
        const auto& s = *w.sinusoid;
        return sinusoidal_warp(s[0], s[1], s[2], s[3], s[4]);
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [x, y] : w.knots) {
        xs.push_back(x);
        ys.push_back(y);
    }
    return PiecewiseLinear(xs, ys, PiecewiseLinear::Tail::UnitSlope);
}

double resolve_hbar(const json& j, std::optional<double> hbar_override) {
    if (hbar_override) return positive(*hbar_override, "--hbar");
    return positive(optional_number(j, "hbar", "config", 1.0), "config.hbar");
}

GridSpec grid_spec(const json& g, const std::string& path) {
    check_keys(g, path, {"n", "x_min", "x_max"});
    if (!g.contains("n")) fail(path + ".n", "missing");
    if (!g.at("n").is_number_integer()) fail(path + ".n", "expected an integer");
    const auto n = g.at("n").get<long long>();
    if (n < 4 || (n & (n - 1)) != 0) fail(path + ".n", "must be a power of two >= 4 (got " + std::to_string(n) + ")");
    const double lo = required_number(g, "x_min", path);
    const double hi = required_number(g, "x_max", path);
    if (!(hi > lo)) fail(path, "x_max must exceed x_min");
    const double dx = (hi - lo) / static_cast<double>(n);
    if (std::abs(lo + hi) > dx * (1.0 + 1e-9)) fail(path, "window must be symmetric about 0");
    return centered_grid(hi - lo, static_cast<Index>(n));
}

const std::map<std::string, std::vector<std::string>>& state_keys() {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"gaussian", {"sigma", "x0", "p0"}},
        {"box", {"width", "center"}},
        {"cat", {"sigma", "separation"}},
        {"mixture", {"sigma", "separation"}},
    };
    return keys;
}

void validate_state(const StateSpec& s, const std::string& path) {
    const auto it = state_keys().find(s.kind);
    if (it == state_keys().end()) fail(path, "unknown state kind '" + s.kind + "' (gaussian, box, cat, mixture)");
    for (const auto& [k, v] : s.params) {
        if (std::find(it->second.begin(), it->second.end(), k) == it->second.end()) {
            fail(path + "." + k, "unknown parameter for " + s.kind);
        }
    }
    const std::string first = it->second.front();
    if (!s.params.contains(first)) fail(path + "." + first, "missing");
    if (!(s.params.at(first) > 0.0)) fail(path + "." + first, "must be positive");
    if (s.params.contains("separation") && s.params.at("separation") < 0.0) {
        fail(path + ".separation", "must be nonnegative");
    }
}

} // namespace

double StateSpec::get(const std::string& key) const {
    const auto it = params.find(key);
    return it == params.end() ? 0.0 : it->second;
}

StateSpec parse_state_spec(const std::string& text) {
    StateSpec s;
    const auto colon = text.find(':');
    s.kind = text.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) fail("--state", "expected key=value, got '" + item + "'");
            const std::string key = item.substr(0, eq);
            try {
                std::size_t used = 0;
                const double v = std::stod(item.substr(eq + 1), &used);
                if (used != item.size() - eq - 1) throw std::invalid_argument(item);
                s.params[key] = v;
            } catch (const std::logic_error&) {
                fail("--state." + key, "not a number");
            }
        }
    }
    validate_state(s, "--state");
    return s;
}

StateSpec state_spec_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    if (!j.contains("kind") || !j.at("kind").is_string()) fail(path + ".kind", "missing or not a string");
    StateSpec s;
    s.kind = j.at("kind").get<std::string>();
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") continue;
        s.params[key] = number(value, path + "." + key);
    }
    validate_state(s, path);
    return s;
}

GridSpec auto_grid(const StateSpec& spec, Index n, double hbar, double x_max) {
    if (n < 4 || (n & (n - 1)) != 0) fail("--grid-n", "must be a power of two >= 4");
    if (x_max > 0.0) return centered_grid(2.0 * x_max, n);
    const double nd = static_cast<double>(n);
    if (spec.kind == "box") {
        const double width = spec.get("width");
        const double half = std::abs(spec.get("center")) + 0.5 * width;
        const double dx = std::max(width / 64.0, 2.2 * half / nd);
        return centered_grid(dx * nd, n);
    }
    const double sigma = spec.get("sigma");
    const double reach = std::abs(spec.get("x0")) + 0.5 * spec.get("separation") + 8.0 * sigma;
    const double p_reach = std::abs(spec.get("p0")) + 8.0 * hbar / (2.0 * sigma);
    double dx = balanced_grid(sigma, n, hbar).dx;
    dx = std::max(dx, 2.2 * reach / nd);
    dx = std::min(dx, std::numbers::pi * hbar / (1.1 * p_reach));
    return centered_grid(dx * nd, n);
}

MixedState build_state(const StateSpec& spec, const GridSpec& grid, double hbar) {
    if (spec.kind == "gaussian") {
        return gaussian_state(spec.get("x0"), spec.get("p0"), spec.get("sigma"), grid, hbar);
    }
    if (spec.kind == "box") return box_state(spec.get("center"), spec.get("width"), grid, hbar);
    const double sigma = spec.get("sigma");
    const double h = 0.5 * spec.get("separation");
    const WaveFunction left = gaussian_state(-h, 0.0, sigma, grid, hbar);
    const WaveFunction right = gaussian_state(h, 0.0, sigma, grid, hbar);
    if (spec.kind == "cat") return WaveFunction::normalized(grid, left.amps() + right.amps(), hbar);
    if (spec.kind == "mixture") return MixedState({{0.5, left}, {0.5, right}});
    throw ConfigError("state: unknown kind '" + spec.kind + "'");
}

std::size_t ScanConfig::point_count() const {
    if (lattice.empty()) return 0;
    std::size_t count = 1;
    for (const LatticeAxis& a : lattice) count *= a.values.size();
    return count;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

ScenarioConfig parse_scenario(const json& j, std::optional<double> hbar_override) {
    check_keys(j, "config", {"hbar", "grid", "confidence", "generators", "smearings", "warps", "calibration"});
    ScenarioConfig c;
    c.hbar = resolve_hbar(j, hbar_override);
    if (!j.contains("grid")) fail("config.grid", "missing");
    c.grid = grid_spec(j.at("grid"), "config.grid");

    const json& conf = array_at(j, "confidence", "config");
    for (std::size_t i = 0; i < conf.size(); ++i) {
        c.confidence.push_back(confidence_pair(conf[i], "config.confidence[" + std::to_string(i) + "]"));
    }
    if (j.contains("generators")) {
        const json& g = array_at(j, "generators", "config");
        for (std::size_t i = 0; i < g.size(); ++i) {
            c.generators.push_back(generator_spec(g[i], "config.generators[" + std::to_string(i) + "]", i));
        }
    }
    if (j.contains("smearings")) {
        const json& s = array_at(j, "smearings", "config");
        for (std::size_t i = 0; i < s.size(); ++i) {
            c.smearings.push_back(smearing_spec(s[i], "config.smearings[" + std::to_string(i) + "]", i));
        }
    }
    if (j.contains("warps")) {
        const json& w = array_at(j, "warps", "config");
        for (std::size_t i = 0; i < w.size(); ++i) {
            const std::string p = "config.warps[" + std::to_string(i) + "]";
            check_keys(w[i], p, {"id", "q", "p"});
            WarpSpec spec;
            spec.id = id_or(w[i], p, "warp" + std::to_string(i));
            spec.q = w[i].contains("q") ? warp_axis(w[i].at("q"), p + ".q") : WarpAxisSpec{{{0.0, 0.0}, {1.0, 1.0}}, {}};
            spec.p = w[i].contains("p") ? warp_axis(w[i].at("p"), p + ".p") : WarpAxisSpec{{{0.0, 0.0}, {1.0, 1.0}}, {}};
            try {
                build_warp(spec);
            } catch (const Error& e) {
                fail(p, e.what());
            }
            c.warps.push_back(std::move(spec));
        }
    }
    if (j.contains("calibration")) {
        const json& cal = j.at("calibration");
        check_keys(cal, "config.calibration", {"delta_ladder", "probe_centers", "probe_kind"});
        if (cal.contains("delta_ladder")) {
            c.delta_ladder = number_list(cal.at("delta_ladder"), "config.calibration.delta_ladder");
            if (c.delta_ladder.empty()) fail("config.calibration.delta_ladder", "must not be empty");
            for (std::size_t i = 0; i < c.delta_ladder.size(); ++i) {
                if (c.delta_ladder[i] < 2.0) fail("config.calibration.delta_ladder", "entries are grid steps >= 2");
                if (i > 0 && !(c.delta_ladder[i] < c.delta_ladder[i - 1])) {
                    fail("config.calibration.delta_ladder", "must be strictly decreasing");
                }
            }
        }
        if (cal.contains("probe_centers")) {
            c.probe_centers = number_list(cal.at("probe_centers"), "config.calibration.probe_centers");
            if (c.probe_centers.empty()) fail("config.calibration.probe_centers", "must not be empty");
        }
        if (cal.contains("probe_kind")) {
            const json& k = cal.at("probe_kind");
            if (k == "box") {
                c.probe_kind = ProbeKind::Box;
            } else if (k == "truncated_gaussian") {
                c.probe_kind = ProbeKind::TruncatedGaussian;
            } else {
                fail("config.calibration.probe_kind", "expected \"box\" or \"truncated_gaussian\"");
            }
        }
    }
    std::set<std::string> ids;
    for (const auto& g : c.generators) {
        if (!ids.insert(g.id).second) fail("config.generators", "duplicate id '" + g.id + "'");
    }
    return c;
}

ScanConfig parse_scan(const json& j, std::optional<double> hbar_override, Index default_grid_n) {
    check_keys(j, "config", {"hbar", "grid", "state", "eps", "lattice", "max_points"});
    ScanConfig c;
    c.hbar = resolve_hbar(j, hbar_override);
    c.grid_n = default_grid_n;
    if (j.contains("grid")) c.grid = grid_spec(j.at("grid"), "config.grid");
    if (!j.contains("state")) fail("config.state", "missing");
    c.state = state_spec_from_json(j.at("state"), "config.state");
    if (j.contains("eps")) c.eps = confidence_pair(j.at("eps"), "config.eps");
    if (j.contains("max_points")) {
        const json& m = j.at("max_points");
        if (!m.is_number_integer() || m.get<long long>() <= 0) fail("config.max_points", "expected a positive integer");
        c.max_points = j.at("max_points").get<std::size_t>();
    }
    const json& lat = array_at(j, "lattice", "config");
    if (lat.size() > 2) fail("config.lattice", "at most two parameters");
    const auto& allowed = state_keys().at(c.state.kind);
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const std::string p = "config.lattice[" + std::to_string(i) + "]";
        check_keys(lat[i], p, {"name", "values", "start", "stop", "count"});
        if (!lat[i].contains("name") || !lat[i].at("name").is_string()) fail(p + ".name", "missing or not a string");
        LatticeAxis a;
        a.name = lat[i].at("name").get<std::string>();
        const bool is_eps = a.name == "eps" || a.name == "eps1" || a.name == "eps2";
        if (!is_eps && std::find(allowed.begin(), allowed.end(), a.name) == allowed.end()) {
            fail(p + ".name", "'" + a.name + "' is not a parameter of " + c.state.kind + " or eps/eps1/eps2");
        }
        if (lat[i].contains("values")) {
            if (lat[i].contains("start") || lat[i].contains("stop") || lat[i].contains("count")) {
                fail(p, "use either values or start/stop/count");
            }
            a.values = number_list(lat[i].at("values"), p + ".values");
        } else {
            const double start = required_number(lat[i], "start", p);
            const double stop = required_number(lat[i], "stop", p);
            if (!lat[i].contains("count") || !lat[i].at("count").is_number_integer() ||
                lat[i].at("count").get<long long>() < 0) {
                fail(p + ".count", "expected a nonnegative integer");
            }
            const auto count = lat[i].at("count").get<std::size_t>();
            for (std::size_t k = 0; k < count; ++k) {
                const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
                a.values.push_back(start + t * (stop - start));
            }
        }
        for (double v : a.values) {
            if (is_eps && !(v > 0.0 && v < 1.0)) fail(p + ".values", "eps values must lie in (0,1)");
        }
        std::sort(a.values.begin(), a.values.end());
        c.lattice.push_back(std::move(a));
    }
    if (c.point_count() > c.max_points) {
        fail("config.lattice", std::to_string(c.point_count()) + " points exceed the cap of " +
                                   std::to_string(c.max_points) + "; coarsen the lattice or raise max_points");
    }
    return c;
}

MixedState build_generator(const GeneratorSpec& spec, const GridSpec& grid, double hbar) {
    std::vector<MixedState::Component> comps;
    for (const auto& [w, g] : spec.components) comps.push_back({w, gaussian_state(g.x0, g.p0, g.sigma, grid, hbar)});
    if (comps.size() == 1) return MixedState(comps.front().psi);
    return MixedState(std::move(comps));
}

GridMeasure build_smearing(const SmearingSpec& spec, double dx) {
    switch (spec.kind) {
    case SmearingSpec::Kind::Delta:
        return point_mass(spec.a, dx);
    case SmearingSpec::Kind::Gaussian:
        return gaussian_measure(0.0, spec.a, dx);
    case SmearingSpec::Kind::Uniform:
        return uniform_measure(spec.a, spec.b, dx);
    }
    throw ConfigError("smearing: unknown kind");
}

WarpMap build_warp(const WarpSpec& spec) { return make_warp_map(build_warp_axis(spec.q), build_warp_axis(spec.p)); }

} // namespace uncert::cli
