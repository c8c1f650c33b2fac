#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace uncert::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string eps_tag(ConfidencePair e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "eps=%g,%g", e.eps1, e.eps2);
    return buf;
}

CalibrationConfig calibration(const ScenarioConfig& cfg) {
    CalibrationConfig c{StateSpace{cfg.grid, cfg.hbar}};
    c.delta_ladder = cfg.delta_ladder;
    c.probe_centers = cfg.probe_centers;
    c.probe_kind = cfg.probe_kind;
    return c;
}

ReportRow blank_row(const std::string& id, ConfidencePair eps) {
    ReportRow r;
    r.scenario_id = id;
    r.eps1 = eps.eps1;
    r.eps2 = eps.eps2;
    for (double* v : {&r.overall_q, &r.resolution_q, &r.error_bar_q, &r.error_bar_spread_q, &r.overall_p,
                      &r.resolution_p, &r.error_bar_p, &r.error_bar_spread_p, &r.werner_q, &r.werner_p,
                      &r.error_bar_product, &r.resolution_product, &r.bound_simple, &r.bound_uffink,
                      &r.margin_simple, &r.margin_uffink, &r.margin_resolution}) {
        *v = kNaN;
    }
    return r;
}

void print_summary(std::ostream& out, const ReportRow& r) {
    out << (r.pass ? "PASS " : "FAIL ") << r.scenario_id << "  error_bar_product=" << format_number(r.error_bar_product)
        << " bound_uffink=" << format_number(r.bound_uffink);
    if (!r.note.empty()) out << "  [" << r.note << "]";
    out << '\n';
}

} // namespace

ConfidencePair parse_eps(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError("--eps: '" + item + "' is not a number");
        }
    }
    if (v.size() == 1) v.push_back(v.front());
    if (v.size() != 2) throw ConfigError("--eps: expected e or e1,e2");
    for (double e : v) {
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("--eps: values must lie in (0,1)");
    }
    return ConfidencePair{v[0], v[1]};
}

ReportRow smearing_row(const SmearingSpec& spec, const ScenarioConfig& cfg, ConfidencePair eps) {
    const StateSpace space{cfg.grid, cfg.hbar};
    const GridMeasure mu = build_smearing(spec, cfg.grid.dx);
    const ObservableKernel kernel = SmearedPosition{mu};
    const double e = eps.eps1;
    const double slack = 2.0 * cfg.grid.dx;

    ReportRow r = blank_row("smear:" + spec.id + "/" + eps_tag(eps), eps);
    r.overall_q = overall_width(mu, e);
    const ErrorBar eb = error_bar_width(kernel, e, calibration(cfg));
    r.error_bar_q = eb.width;
    r.error_bar_spread_q = eb.spread;
    r.resolution_q = resolution_width(kernel, e, default_probe_search(space, Axis::Q));
    r.werner_q = werner_distance_covariant(mu);

    const bool resolution_is_overall = std::abs(r.resolution_q - r.overall_q) <= slack;
    const bool error_bar_dominates = r.error_bar_q >= r.resolution_q - slack;
    const bool distance_bound = r.error_bar_q <= 2.0 / e * r.werner_q + slack;
    r.pass = resolution_is_overall && error_bar_dominates && distance_bound;
    r.note = "smearing on position";
    if (!resolution_is_overall) r.note += "; resolution differs from overall width";
    if (!error_bar_dominates) r.note += "; error bar below resolution";
    if (!distance_bound) r.note += "; error bar above distance bound";
    return r;
}

std::vector<ReportRow> verify_rows(const ScenarioConfig& cfg, std::ostream& log) {
    const CalibrationConfig cal = calibration(cfg);
    std::vector<ReportRow> rows;
    const auto run = [&](const std::string& id, auto&& body) {
        try {
            ReportRow r = body();
            print_summary(log, r);
            rows.push_back(std::move(r));
        } catch (const Error& e) {
            throw Error("scenario " + id + ": " + e.what());
        }
    };

    for (const GeneratorSpec& g : cfg.generators) {
        std::optional<MixedState> gen;
        try {
            gen = build_generator(g, cfg.grid, cfg.hbar);
        } catch (const Error& e) {
            throw Error("scenario " + g.id + ": " + e.what());
        }
        for (const ConfidencePair& eps : cfg.confidence) {
            const std::string id = g.id + "/" + eps_tag(eps);
            run(id, [&] {
                WidthReport w = verify_joint_ur(*gen, eps, cal);
                w.scenario_id = id;
                return to_row(w);
            });
        }
        for (const WarpSpec& ws : cfg.warps) {
            const WarpMap wm = build_warp(ws);
            for (const ConfidencePair& eps : cfg.confidence) {
                const std::string id = g.id + "+" + ws.id + "/" + eps_tag(eps);
                run(id, [&] {
                    WidthReport w = verify_joint_ur(*gen, eps, cal, wm);
                    w.scenario_id = id;
                    ReportRow r = to_row(w);
                    r.note = r.note.empty() ? "warped" : "warped; " + r.note;
                    return r;
                });
            }
        }
    }
    for (const SmearingSpec& s : cfg.smearings) {
        for (const ConfidencePair& eps : cfg.confidence) {
            run("smear:" + s.id, [&] { return smearing_row(s, cfg, eps); });
        }
    }
    return rows;
}

int run_verify(const std::string& config_path, const GlobalOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<ReportRow> rows;
    try {
        const ScenarioConfig cfg = parse_scenario(read_json_file(config_path), opt.hbar);
        rows = verify_rows(cfg, out);
        write_reports(opt.out_dir, rows);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    bool all = true;
    for (const ReportRow& r : rows) all = all && r.pass;
    out << rows.size() << " rows, " << (all ? "all pass" : "FAILURES") << "; reports in " << opt.out_dir << '\n';
    return all ? kExitPass : kExitRelationFailure;
}

int run_widths(const std::string& state, const std::string& eps_text, double x_max, const GlobalOptions& opt,
               std::ostream& out, std::ostream& err) {
    try {
        const double hbar = opt.hbar.value_or(1.0);
        if (!(hbar > 0.0)) throw ConfigError("--hbar: must be positive");
        const StateSpec spec = parse_state_spec(state);
        const ConfidencePair eps = parse_eps(eps_text);
        const GridSpec grid = auto_grid(spec, opt.grid_n, hbar, x_max);
        const MixedState rho = build_state(spec, grid, hbar);
        const double dp = momentum_grid(grid, hbar).dp;
        const double wq = overall_width(position_distribution(rho), eps.eps1);
        const double wp = overall_width(momentum_distribution(rho), eps.eps2);
        const double product = wq * wp;
        const double bs = bound_simple(eps, hbar);
        const double bu = bound_uffink(eps, hbar);
        const double tol = 2.0 * grid.dx * wp + 2.0 * dp * wq + 4.0 * grid.dx * dp;
        const auto line = [&](const char* name, const std::string& v) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%-14s", name);
            out << buf << v << '\n';
        };
        line("state", state);
        line("eps", eps_tag(eps).substr(4));
        line("grid", "n=" + std::to_string(grid.n) + " dx=" + format_number(grid.dx) + " dp=" + format_number(dp));
        line("width_q", format_number(wq));
        line("width_p", format_number(wp));
        line("product", format_number(product));
        line("bound_simple", format_number(bs));
        line("bound_uffink", format_number(bu));
        line("ratio_uffink", bu > 0.0 ? format_number(product / bu) : "inf");
        return product >= bu - tol ? kExitPass : kExitRelationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

std::vector<ScanRow> scan_rows(const ScanConfig& cfg) {
    std::vector<ScanRow> rows;
    const std::size_t total = cfg.point_count();
    for (std::size_t k = 0; k < total; ++k) {
        // first lattice axis varies slowest
        std::vector<double> params(cfg.lattice.size());
        std::size_t rest = k;
        for (std::size_t a = cfg.lattice.size(); a-- > 0;) {
            const auto& vals = cfg.lattice[a].values;
            params[a] = vals[rest % vals.size()];
            rest /= vals.size();
        }
        StateSpec spec = cfg.state;
        ConfidencePair eps = cfg.eps;
        for (std::size_t a = 0; a < params.size(); ++a) {
            const std::string& name = cfg.lattice[a].name;
            if (name == "eps") {
                eps = ConfidencePair{params[a], params[a]};
            } else if (name == "eps1") {
                eps.eps1 = params[a];
            } else if (name == "eps2") {
                eps.eps2 = params[a];
            } else {
                spec.params[name] = params[a];
            }
        }
        ScanRow row;
        row.params = params;
        row.eps = eps;
        try {
            const GridSpec grid = cfg.grid ? *cfg.grid : auto_grid(spec, cfg.grid_n, cfg.hbar);
            const MixedState rho = build_state(spec, grid, cfg.hbar);
            const double dp = momentum_grid(grid, cfg.hbar).dp;
            row.width_q = overall_width(position_distribution(rho), eps.eps1);
            row.width_p = overall_width(momentum_distribution(rho), eps.eps2);
            row.tolerance = 2.0 * grid.dx * row.width_p + 2.0 * dp * row.width_q + 4.0 * grid.dx * dp;
        } catch (const Error& e) {
            std::string at;
            for (std::size_t a = 0; a < params.size(); ++a) {
                at += (a ? "," : "") + cfg.lattice[a].name + "=" + format_number(params[a]);
            }
            throw Error("lattice point " + at + ": " + e.what());
        }
        row.product = row.width_q * row.width_p;
        row.bound_simple = bound_simple(eps, cfg.hbar);
        row.bound_uffink = bound_uffink(eps, cfg.hbar);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_scan_csv(std::ostream& out, const ScanConfig& cfg, const std::vector<ScanRow>& rows) {
    out << "# uncert-scan v1\n";
    for (const LatticeAxis& a : cfg.lattice) out << a.name << ',';
    out << "eps1,eps2,width_q,width_p,product,bound_simple,bound_uffink,ratio_uffink\n";
    for (const ScanRow& r : rows) {
        for (double v : r.params) out << format_number(v) << ',';
        out << format_number(r.eps.eps1) << ',' << format_number(r.eps.eps2) << ',' << format_number(r.width_q) << ','
            << format_number(r.width_p) << ',' << format_number(r.product) << ',' << format_number(r.bound_simple) << ','
            << format_number(r.bound_uffink) << ','
            << (r.bound_uffink > 0.0 ? format_number(r.product / r.bound_uffink) : "inf") << '\n';
    }
}

int run_scan(const std::string& config_path, const GlobalOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<ScanRow> rows;
    try {
        const ScanConfig cfg = parse_scan(read_json_file(config_path), opt.hbar, opt.grid_n);
        rows = scan_rows(cfg);
        std::filesystem::create_directories(opt.out_dir);
        const auto path = std::filesystem::path(opt.out_dir) / "scan.csv";
        std::ofstream csv(path);
        if (!csv) throw std::runtime_error(path.string() + ": cannot write");
        write_scan_csv(csv, cfg, rows);
        out << rows.size() << " lattice points; " << path.string() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    for (const ScanRow& r : rows) {
        if (r.product < r.bound_uffink - r.tolerance) return kExitRelationFailure;
    }
    return kExitPass;
}

} // namespace uncert::cli
