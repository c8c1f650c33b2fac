// Property checks at desk scale (n = 4096, hbar = 1). One PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "oracles.hpp"

using namespace uncert;
using namespace uncert::cli;

namespace {

constexpr Index kN = 4096;
constexpr double kHbar = 1.0;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

struct BatteryState {
    std::string label;
    GridSpec grid;
    MixedState rho;
};

std::vector<BatteryState> state_battery() {
    const std::vector<std::string> specs{
        "gaussian:sigma=0.25",       "gaussian:sigma=1",          "gaussian:sigma=4",
        "gaussian:sigma=1,x0=3,p0=-2", "box:width=0.5",           "box:width=1",
        "box:width=2,center=1",      "cat:sigma=1,separation=4",  "cat:sigma=0.5,separation=3",
        "cat:sigma=1,separation=8",  "mixture:sigma=1,separation=4", "mixture:sigma=0.7,separation=8",
    };
    std::vector<BatteryState> out;
    for (const std::string& s : specs) {
        const StateSpec spec = parse_state_spec(s);
        const GridSpec grid = auto_grid(spec, kN, kHbar);
        out.push_back({s, grid, build_state(spec, grid, kHbar)});
    }
    return out;
}

const GridSpec& unit_grid() {
    static const GridSpec g = balanced_grid(1.0, kN, kHbar);
    return g;
}

StateSpace unit_space() { return StateSpace{unit_grid(), kHbar}; }

std::vector<std::pair<std::string, GridMeasure>> smearing_battery() {
    const double dx = unit_grid().dx;
    return {{"delta_0", point_mass(0.0, dx)},
            {"delta_0.7", point_mass(0.7, dx)},
            {"gauss_0.5", gaussian_measure(0.0, 0.5, dx)},
            {"uniform_1", uniform_measure(-1.0, 1.0, dx)}};
}

std::vector<std::pair<std::string, MixedState>> generator_battery() {
    const GridSpec& g = unit_grid();
    return {{"vacuum", MixedState(gaussian_state(0.0, 0.0, 1.0, g, kHbar))},
            {"squeezed_0.3", MixedState(gaussian_state(0.0, 0.0, 0.3, g, kHbar))},
            {"squeezed_3", MixedState(gaussian_state(0.0, 0.0, 3.0, g, kHbar))},
            {"two_lobe", MixedState({{0.5, gaussian_state(-2.0, 0.0, 1.0, g, kHbar)},
                                     {0.5, gaussian_state(2.0, 0.0, 1.0, g, kHbar)}})}};
}

double product_tolerance(const GridSpec& grid, double wq, double wp) {
    const double dp = momentum_grid(grid, kHbar).dp;
    return 2.0 * grid.dx * wp + 2.0 * dp * wq + 4.0 * grid.dx * dp;
}

Outcome state_relation(bool uffink) {
    Outcome o;
    int checked = 0;
    for (const BatteryState& s : state_battery()) {
        const GridMeasure q = position_distribution(s.rho);
        const GridMeasure p = momentum_distribution(s.rho);
        for (double e : {0.01, 0.05, 0.1, 0.2}) {
            const ConfidencePair eps{e, e};
            const double wq = overall_width(q, e);
            const double wp = overall_width(p, e);
            const double bound = uffink ? bound_uffink(eps, kHbar) : bound_simple(eps, kHbar);
            o.require(wq * wp >= bound - product_tolerance(s.grid, wq, wp),
                      s.label + fmt(" eps=%g: product %.5f < bound %.5f", e, wq * wp, bound));
            ++checked;
        }
    }
    if (uffink) {
        for (int i = 1; i <= 100; ++i) {
            for (int j = 1; j <= 100; ++j) {
                const ConfidencePair e{i / 101.0, j / 101.0};
                if (!e.valid_bound()) continue;
                o.require(bound_uffink(e, kHbar) >= bound_simple(e, kHbar),
                          fmt("bound comparison fails at (%g, %g)", e.eps1, e.eps2));
                ++checked;
            }
        }
    }
    if (o.ok) o.detail = std::to_string(checked) + " comparisons";
    return o;
}

Outcome resolution_equals_width() {
    Outcome o;
    const double dx = unit_grid().dx;
    const ProbeSearch search = default_probe_search(unit_space(), Axis::Q);
    double worst = 0.0;
    for (const auto& [name, mu] : smearing_battery()) {
        for (double e : {0.05, 0.2}) {
            const double gamma = resolution_width(SmearedPosition{mu}, e, search);
            const double w = overall_width(mu, e);
            worst = std::max(worst, std::abs(gamma - w));
            o.require(std::abs(gamma - w) <= 2 * dx, name + fmt(" eps=%g: resolution %.5f vs width %.5f", e, gamma, w));
        }
    }
    if (o.ok) o.detail = fmt("max deviation %.3g (2dx = %.3g)", worst, 2 * dx);
    return o;
}

struct NamedKernel {
    std::string name;
    ObservableKernel kernel;
    double step;
};

std::vector<NamedKernel> kernel_battery(bool with_warps) {
    const double dx = unit_grid().dx;
    const double dp = unit_space().momentum().dp;
    std::vector<NamedKernel> ks;
    for (const auto& [name, mu] : smearing_battery()) ks.push_back({"smear:" + name, SmearedPosition{mu}, dx});
    for (const auto& [name, gen] : generator_battery()) {
        ks.push_back({name + "/q", phase_marginal(gen, Axis::Q), dx});
        ks.push_back({name + "/p", phase_marginal(gen, Axis::P), dp});
    }
    if (with_warps) {
        const MixedState vac(gaussian_state(0.0, 0.0, 1.0, unit_grid(), kHbar));
        const WarpMap w = make_warp_map(sinusoidal_warp(0.5, 8.0, 0.25, -40.0, 40.0),
                                        sinusoidal_warp(0.25, 4.0, 0.125, -20.0, 20.0));
        ks.push_back({"vacuum+ripple/q", warp(vac, w, Axis::Q), dx});
        ks.push_back({"vacuum+ripple/p", warp(vac, w, Axis::P), dp});
    }
    return ks;
}

Outcome error_bar_dominates_resolution() {
    Outcome o;
    CalibrationConfig cfg{unit_space()};
    cfg.probe_centers = {-64.0, 0.0, 64.0};
    int checked = 0;
    for (const NamedKernel& k : kernel_battery(true)) {
        const Axis axis = reference_axis(k.kernel);
        const ProbeSearch search = default_probe_search(unit_space(), axis, {-64.0 * k.step, 0.0, 64.0 * k.step});
        for (double e : {0.05, 0.2}) {
            const double eb = error_bar_width(k.kernel, e, cfg).width;
            const double res = resolution_width(k.kernel, e, search);
            o.require(eb >= res - 2 * k.step, k.name + fmt(" eps=%g: error bar %.5f < resolution %.5f", e, eb, res));
            ++checked;
        }
    }
    const double dx = unit_grid().dx;
    const GridMeasure dc = point_mass(0.7, dx);
    const double eb = error_bar_width(SmearedPosition{dc}, 0.05, cfg).width;
    const double res = resolution_width(SmearedPosition{dc}, 0.05, default_probe_search(unit_space(), Axis::Q));
    o.require(std::abs(eb - 1.4) <= 2 * dx, fmt("delta_0.7 error bar %.5f, expected 1.4", eb));
    o.require(res <= 2 * dx, fmt("delta_0.7 resolution %.5f, expected 0", res));
    o.require(std::abs((eb - res) - 1.4) <= 2 * dx, fmt("delta_0.7 gap %.5f, expected 1.4", eb - res));
    if (o.ok) o.detail = std::to_string(checked) + " kernels x eps; delta_0.7 error bar " + fmt("%.4f, resolution %.4f", eb, res);
    return o;
}

Outcome covariant_product() {
    Outcome o;
    const double z = oracle::normal_quantile(0.975);
    const double expected = 2.0 * kHbar * z * z;
    const CalibrationConfig cfg{unit_space()};
    const ConfidencePair eps{0.05, 0.05};
    std::string products;
    for (double sigma : {0.3, 1.0, 3.0}) {
        const MixedState gen(gaussian_state(0.0, 0.0, sigma, unit_grid(), kHbar));
        const WidthReport r = verify_joint_ur(gen, eps, cfg);
        const std::string tag = fmt("sigma=%g", sigma);
        o.require(std::abs(r.error_bar_product - expected) <= 0.02 * expected,
                  tag + fmt(": error-bar product %.5f vs %.5f", r.error_bar_product, expected));
        o.require(r.error_bar_product > r.bound_simple, tag + ": error-bar product below bound");
        o.require(r.resolution_product >= r.bound_simple - r.tolerance, tag + ": resolution product below bound");
        products += fmt(" %.4f", r.error_bar_product);
    }
    if (o.ok) o.detail = "products" + products + fmt(" vs %.4f, bound %.4f", expected, bound_simple(eps, kHbar));
    return o;
}

Outcome covariance() {
    Outcome o;
    const GridSpec& g = unit_grid();
    const double dp = unit_space().momentum().dp;
    const MixedState gen(gaussian_state(0.0, 0.0, 1.0, g, kHbar));
    const MixedState rho({{0.6, gaussian_state(1.0, 0.5, 0.8, g, kHbar)}, {0.4, gaussian_state(-2.0, 0.0, 1.5, g, kHbar)}});
    // outcome cells thinned to every fourth grid point per axis
    const PhaseSpaceObservable obs = phase_space_observable(gen, Index{4}, Index{4});
    double worst = 0.0;
    for (const auto& [q, p] : std::vector<std::pair<double, double>>{{8 * g.dx, 0.0}, {0.0, 16 * dp}, {-20 * g.dx, 8 * dp}}) {
        worst = std::max(worst, covariance_residual(obs, rho, q, p));
    }
    o.require(worst <= 1e-6, fmt("unwarped residual %.3g", worst));

    const WarpMap ripple = make_warp_map(sinusoidal_warp(0.5, 8.0, 0.25, -40.0, 40.0),
                                         sinusoidal_warp(0.25, 4.0, 0.125, -20.0, 20.0));
    const double warped_res = covariance_residual(obs, ripple, rho, 24 * g.dx, 0.0);
    o.require(warped_res > 1e-3, fmt("warped residual %.3g", warped_res));

    CalibrationConfig cfg{unit_space()};
    cfg.probe_centers = {-64.0, -32.0, 0.0, 32.0, 64.0};
    const WidthReport base = verify_joint_ur(gen, {0.05, 0.05}, cfg);
    const WidthReport warped = verify_joint_ur(gen, {0.05, 0.05}, cfg, ripple);
    o.require(warped.q.error_bar.finite() && warped.p.error_bar.finite(), "warped error bars not finite");
    const double dq_eb = std::abs(warped.q.error_bar.width - base.q.error_bar.width);
    const double dp_eb = std::abs(warped.p.error_bar.width - base.p.error_bar.width);
    o.require(dq_eb <= 2 * ripple.bound_q + 2 * g.dx, fmt("q error bar moved by %.4f (bound %.4f)", dq_eb, ripple.bound_q));
    o.require(dp_eb <= 2 * ripple.bound_p + 2 * dp, fmt("p error bar moved by %.4f (bound %.4f)", dp_eb, ripple.bound_p));
    if (o.ok) {
        o.detail = fmt("residual %.2g unwarped, %.2g warped; ", worst, warped_res) +
                   fmt("error bars moved %.3f (q) %.3f (p)", dq_eb, dp_eb);
    }
    return o;
}

Outcome werner_constant() {
    Outcome o;
    const double sigma = std::sqrt(kHbar / 2.0);
    const GridSpec g = balanced_grid(sigma, kN, kHbar);
    const double dp = momentum_grid(g, kHbar).dp;
    const MixedState vac(gaussian_state(0.0, 0.0, sigma, g, kHbar));
    const double dq = *covariant_distance(phase_marginal(vac, Axis::Q));
    const double dpp = *covariant_distance(phase_marginal(vac, Axis::P));
    const double sigma_p = kHbar / (2.0 * sigma);
    o.require(std::abs(dq - oracle::folded_normal_mean(sigma)) <= g.dx, fmt("q distance %.6f", dq));
    o.require(std::abs(dpp - oracle::folded_normal_mean(sigma_p)) <= dp, fmt("p distance %.6f", dpp));
    const double prod = dq * dpp;
    o.require(std::abs(prod - kHbar / std::numbers::pi) <= 0.01 * kHbar / std::numbers::pi,
              fmt("product %.6f vs hbar/pi", prod));
    o.require(prod >= 0.3047 * kHbar, fmt("product %.6f below 0.3047", prod));

    for (double s : {0.5, 1.0, 2.0}) {
        const double d = werner_distance_covariant(gaussian_measure(0.0, s, g.dx));
        o.require(std::abs(d - s * std::sqrt(2.0 / std::numbers::pi)) <= g.dx, fmt("folded mean at sigma %g: %.6f", s, d));
    }
    if (o.ok) o.detail = fmt("product %.5f (hbar/pi = %.5f)", prod, kHbar / std::numbers::pi);
    return o;
}

Outcome distance_bounds_error_bar() {
    Outcome o;
    const CalibrationConfig cfg{unit_space()};
    int checked = 0;
    double tightest = INFINITY;
    for (const NamedKernel& k : kernel_battery(false)) {
        for (double e : {0.05, 0.2, 0.5}) {
            const DistanceErrorCheck c = check_distance_error_inequality(k.kernel, e, cfg);
            o.require(c.holds, k.name + fmt(" eps=%g: error bar %.5f > %.5f", e, c.error_bar, c.rhs));
            tightest = std::min(tightest, c.rhs + c.tolerance - c.error_bar);
            ++checked;
        }
    }
    if (o.ok) o.detail = std::to_string(checked) + fmt(" checks, smallest slack %.4f", tightest);
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome hygiene() {
    Outcome o;
    double worst_mass = 0.0;
    for (const BatteryState& s : state_battery()) {
        const double dp = momentum_grid(s.grid, kHbar).dp;
        for (const auto& c : s.rho.components()) {
            worst_mass = std::max(worst_mass, std::abs(c.psi.norm_squared() - 1.0));
            worst_mass = std::max(worst_mass, std::abs(c.psi.momentum_amps().squaredNorm() * dp - 1.0));
        }
    }
    o.require(worst_mass <= 1e-9, fmt("mass deviation %.3g", worst_mass));

    const double dx = unit_grid().dx;
    double worst_var = 0.0;
    const std::vector<GridMeasure> ms{gaussian_measure(0.0, 0.6, dx), uniform_measure(-1.0, 2.0, dx),
                                      gaussian_measure(1.0, 1.3, dx)};
    for (const GridMeasure& a : ms) {
        for (const GridMeasure& b : ms) {
            const double v = convolve(a, b).variance();
            worst_var = std::max(worst_var, std::abs(v - (a.variance() + b.variance())) / (a.variance() + b.variance()));
        }
    }
    o.require(worst_var <= 1e-4, fmt("variance additivity off by %.3g", worst_var));

    const std::string config = R"({
      "grid": {"n": 1024, "x_min": -56.71852322897651, "x_max": 56.71852322897651},
      "confidence": [[0.05, 0.05], [0.6, 0.5]],
      "generators": [{"id": "vacuum", "gaussian": {"sigma": 1.0}}],
      "smearings": [{"id": "d", "delta": {"c": 0.7}}, {"id": "u", "uniform": {"a": -1, "b": 1}}],
      "warps": [{"id": "ripple", "q": {"sinusoid": {"amplitude": 0.5, "period": 8, "spacing": 0.25, "lo": -20, "hi": 20}}}]
    })";
    const auto dir = std::filesystem::temp_directory_path() / "uncert_acceptance";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "config.json") << config;
    std::ostringstream log;
    GlobalOptions opt;
    for (const char* sub : {"a", "b"}) {
        opt.out_dir = (dir / sub).string();
        run_verify((dir / "config.json").string(), opt, log, log);
    }
    bool same = true;
    for (const char* f : {"report.csv", "report.json"}) {
        const std::string a = slurp(dir / "a" / f);
        same = same && !a.empty() && a == slurp(dir / "b" / f);
    }
    o.require(same, "repeated reports differ");
    std::filesystem::remove_all(dir);
    if (o.ok) o.detail = fmt("mass %.2g, variance %.2g, reports identical", worst_mass, worst_var);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 state width relation", [] { return state_relation(false); }},
        {"AC2 refined bound", [] { return state_relation(true); }},
        {"AC3 resolution equals smearing width", resolution_equals_width},
        {"AC4 error bar dominates resolution", error_bar_dominates_resolution},
        {"AC5 covariant error-bar product", covariant_product},
        {"AC6 covariance and warped widths", covariance},
        {"AC7 distance constant", werner_constant},
        {"AC8 distance bounds the error bar", distance_bounds_error_bar},
        {"AC9 numerical hygiene", hygiene},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  %-40s %s (%.1fs)\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
