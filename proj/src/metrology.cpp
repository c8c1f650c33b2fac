#include "uncert/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace uncert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_eps(double eps, const char* what) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument(std::string(what) + ": eps must lie in (0,1)");
}

double snap_to_grid(double x, const GridSpec& g) {
    const double k = std::round((x - g.x_min) / g.dx);
    return g.x_min + k * g.dx;
}

WaveFunction point_probe(Axis axis, double x, const StateSpace& space) {
    return axis_box_state(axis, x, 0.0, space);
}

// Gaussian amplitude (sigma = half the support radius) restricted to the
// grid points x + t*step, |t| <= half_cells.
WaveFunction truncated_gaussian_probe(Axis axis, double x, Index half_cells, const StateSpace& space) {
    const GridSpec ag = space.axis_grid(axis);
    const auto center = static_cast<Index>(std::llround((x - ag.x_min) / ag.dx));
    const double sigma = 0.5 * static_cast<double>(half_cells);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(ag.n);
    for (Index t = -half_cells; t <= half_cells; ++t) {
        const Index j = center + t;
        if (j < 0 || j >= ag.n) throw WindowError("calibration probe leaves the axis grid");
        const double z = static_cast<double>(t) / sigma;
        amps[j] = std::exp(-0.25 * z * z);
    }
    if (axis == Axis::Q) return WaveFunction::normalized(space.grid, std::move(amps), space.hbar);
    return WaveFunction::from_momentum(space.grid, amps, space.hbar);
}

MixedState translate_along(const MixedState& s, Axis axis, double shift) {
    return axis == Axis::Q ? weyl_displace(s, shift, 0.0) : weyl_displace(s, 0.0, shift);
}

double expectation(const GridMeasure& m, const PiecewiseLinear& h) {
    double acc = 0.0;
    const GridSpec& g = m.grid();
    for (Index j = 0; j < g.n; ++j) {
        if (m.weights()[j] != 0.0) acc += h(g.point(j)) * m.weights()[j];
    }
    return acc;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, double& best_x) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 40 && (b - a) > 1e-4 * (hi - lo); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if (fc <= fd) {
        best_x = c;
        return fc;
    }
    best_x = d;
    return fd;
}

} // namespace

ConfidencePair make_confidence(double eps1, double eps2) {
    check_eps(eps1, "confidence eps1");
    check_eps(eps2, "confidence eps2");
    return ConfidencePair{eps1, eps2};
}

double bound_simple(ConfidencePair eps, double hbar) {
    if (!eps.valid_bound()) return 0.0;
    const double r = 1.0 - eps.eps1 - eps.eps2;
    return 2.0 * std::numbers::pi * hbar * (r * r);
}

double bound_uffink(ConfidencePair eps, double hbar) {
    if (!eps.valid_bound()) return 0.0;
    // sqrt((1-a)(1-b)) - sqrt(ab) = (1-a-b)/D with D <= 1 (Cauchy-Schwarz).
    double d = std::sqrt((1.0 - eps.eps1) * (1.0 - eps.eps2)) + std::sqrt(eps.eps1 * eps.eps2);
    d = std::min(d, 1.0);
    return bound_simple(eps, hbar) / (d * d);
}

double calibration_error(const ObservableKernel& kernel, double eps, double delta, const CalibrationConfig& cfg) {
    check_eps(eps, "calibration_error");
    const Axis axis = reference_axis(kernel);
    const GridSpec ag = cfg.space.axis_grid(axis);
    const double step = ag.dx;
    if (!(delta >= 2.0 * step * (1.0 - 1e-12))) {
        throw InvalidArgument("calibration_error: delta must be at least two grid steps");
    }
    const auto half_cells = static_cast<Index>(std::floor(0.5 * (delta - step) / step + 1e-9));

    std::vector<double> centers;
    if (is_covariant(kernel)) {
        centers.push_back(snap_to_grid(0.0, ag));
    } else {
        for (double c : cfg.probe_centers) centers.push_back(snap_to_grid(c * step, ag));
    }
    if (centers.empty()) throw InvalidArgument("calibration_error: no probe centers");

    const double window_lo = ag.x_min - 0.5 * step;
    const double window_hi = ag.x_max() + 0.5 * step;
    double worst = 0.0;
    for (double x : centers) {
        std::vector<MixedState> probes;
        for (Index t = -half_cells; t <= half_cells; ++t) {
            probes.emplace_back(point_probe(axis, x + static_cast<double>(t) * step, cfg.space));
        }
        if (half_cells >= 1) {
            probes.emplace_back(axis_box_state(axis, x, 2.0 * static_cast<double>(half_cells) * step, cfg.space));
            if (cfg.probe_kind == ProbeKind::TruncatedGaussian) {
                probes.emplace_back(truncated_gaussian_probe(axis, x, half_cells, cfg.space));
            }
        }
        for (const MixedState& probe : probes) {
            const double w = centered_width(outcome_distribution(kernel, probe), x, eps);
            if (x - 0.5 * w < window_lo || x + 0.5 * w > window_hi) return kInf;
            worst = std::max(worst, w);
        }
    }
    return worst;
}

bool ErrorBar::finite() const { return std::isfinite(width); }

ErrorBar error_bar_width(const ObservableKernel& kernel, double eps, const CalibrationConfig& cfg) {
    if (cfg.delta_ladder.empty()) throw InvalidArgument("error_bar_width: empty delta ladder");
    for (std::size_t i = 1; i < cfg.delta_ladder.size(); ++i) {
        if (!(cfg.delta_ladder[i] < cfg.delta_ladder[i - 1])) {
            throw InvalidArgument("error_bar_width: delta ladder must be strictly decreasing");
        }
    }
    const double step = cfg.space.axis_grid(reference_axis(kernel)).dx;
    ErrorBar out;
    double lo = kInf;
    double hi = -kInf;
    for (double cells : cfg.delta_ladder) {
        const double delta = cells * step;
        const double e = calibration_error(kernel, eps, delta, cfg);
        if (!out.ladder.empty()) {
            const double prev = out.ladder.back().error;
            if (std::isfinite(e) && std::isfinite(prev) && e > prev + step) {
                throw NumericalInconsistency("calibration error grew from " + std::to_string(prev) + " to " +
                                             std::to_string(e) + " as delta shrank to " + std::to_string(delta));
            }
        }
        out.ladder.push_back({delta, e});
        if (std::isfinite(e)) {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    }
    out.width = out.ladder.back().error;
    out.spread = hi >= lo ? hi - lo : 0.0;
    return out;
}

ProbeSearch default_probe_search(const StateSpace& space, Axis axis, std::vector<double> centers) {
    ProbeSearch s;
    s.centers = std::move(centers);
    const double step = space.axis_grid(axis).dx;
    s.family.emplace_back(point_probe(axis, 0.0, space));
    s.family.emplace_back(axis_box_state(axis, 0.0, 2.0 * step, space));
    s.family.emplace_back(axis_box_state(axis, 0.0, 4.0 * step, space));
    for (double cells : {4.0, 16.0}) {
        const double sigma_axis = cells * step;
        const double sigma_q = axis == Axis::Q ? sigma_axis : space.hbar / (2.0 * sigma_axis);
        try {
            s.family.emplace_back(gaussian_state(0.0, 0.0, sigma_q, space.grid, space.hbar));
        } catch (const WindowError&) {
            // does not fit this grid; the remaining candidates still bound the search
        }
    }
    return s;
}

double resolution_width(const ObservableKernel& kernel, double eps, const ProbeSearch& search) {
    check_eps(eps, "resolution_width");
    if (search.family.empty()) throw InvalidArgument("resolution_width: empty probe family");
    if (is_covariant(kernel)) {
        double best = kInf;
        for (const MixedState& s : search.family) {
            best = std::min(best, overall_width(outcome_distribution(kernel, s), eps));
        }
        return best;
    }

    if (search.centers.empty()) throw InvalidArgument("resolution_width: no probe centers");
    const Axis axis = reference_axis(kernel);
    const StateSpace space = search.family.front().space();
    const GridSpec ag = space.axis_grid(axis);
    const double step = ag.dx;
    int radius = search.search_radius;
    if (radius < 0) {
        const auto& k = std::get<WarpedMarginal>(kernel);
        radius = static_cast<int>(std::ceil(k.warp.bound(axis) / step)) + 4;
    }

    double worst = 0.0;
    for (double c : search.centers) {
        const double x = snap_to_grid(c, ag);
        double best = kInf;
        for (const MixedState& s : search.family) {
            for (int t = -radius; t <= radius; ++t) {
                const double shift = x + static_cast<double>(t) * step;
                try {
                    const GridMeasure out = outcome_distribution(kernel, translate_along(s, axis, shift));
                    best = std::min(best, centered_width(out, x, eps));
                } catch (const WindowError&) {
                    // translate left the grid
                }
            }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double werner_distance_covariant(const GridMeasure& mu) {
    return mu.weights().dot(mu.grid().points().cwiseAbs());
}

std::optional<double> covariant_distance(const ObservableKernel& kernel) {
    if (std::holds_alternative<SharpPosition>(kernel) || std::holds_alternative<SharpMomentum>(kernel)) return 0.0;
    if (const auto* k = std::get_if<SmearedPosition>(&kernel)) return werner_distance_covariant(k->mu);
    if (const auto* k = std::get_if<SmearedMomentum>(&kernel)) return werner_distance_covariant(k->nu);
    if (const auto* k = std::get_if<PhaseMarginal>(&kernel)) return werner_distance_covariant(k->smearing);
    return std::nullopt;
}

double werner_distance_lower_bound(const ObservableKernel& k1, const ObservableKernel& k2,
                                   std::span<const MixedState> states, std::span<const PiecewiseLinear> hats) {
    for (const PiecewiseLinear& h : hats) {
        if (h.tail() != PiecewiseLinear::Tail::Constant) {
            throw InvalidArgument("werner_distance_lower_bound: test functions must be bounded");
        }
        if (h.lipschitz_constant() > 1.0 + 1e-12) {
            throw InvalidArgument("werner_distance_lower_bound: test function is not 1-Lipschitz");
        }
    }
    double best = 0.0;
    for (const MixedState& rho : states) {
        const GridMeasure a = outcome_distribution(k1, rho);
        const GridMeasure b = outcome_distribution(k2, rho);
        for (const PiecewiseLinear& h : hats) best = std::max(best, std::abs(expectation(a, h) - expectation(b, h)));
    }
    return best;
}

DistanceErrorCheck check_distance_error_inequality(const ObservableKernel& kernel, double eps,
                                                   const CalibrationConfig& cfg) {
    const std::optional<double> d = covariant_distance(kernel);
    if (!d) throw InvalidArgument("check_distance_error_inequality: kernel has no closed-form distance");
    DistanceErrorCheck out;
    out.distance = *d;
    out.error_bar = error_bar_width(kernel, eps, cfg).width;
    out.rhs = 2.0 / eps * out.distance;
    out.tolerance = 2.0 * cfg.space.axis_grid(reference_axis(kernel)).dx;
    out.holds = out.error_bar <= out.rhs + out.tolerance;
    return out;
}

WidthReport verify_joint_ur(const MixedState& gen, ConfidencePair eps, const CalibrationConfig& cfg,
                            const std::optional<WarpMap>& warp_map) {
    const StateSpace space = gen.space();
    if (space.grid.n != cfg.space.grid.n || !same_step(space.grid, cfg.space.grid) || space.hbar != cfg.space.hbar) {
        throw GridMismatch("verify_joint_ur: generator and calibration state spaces differ");
    }
    WidthReport r;
    r.eps = eps;
    r.hbar = space.hbar;
    r.warped = warp_map.has_value();

    const auto fill_axis = [&](Axis axis, double e) {
        AxisWidths a;
        ObservableKernel kernel = warp_map ? ObservableKernel{warp(gen, *warp_map, axis)}
                                           : ObservableKernel{phase_marginal(gen, axis)};
        const GridMeasure& smearing =
            warp_map ? std::get<WarpedMarginal>(kernel).smearing : std::get<PhaseMarginal>(kernel).smearing;
        const double step = space.axis_grid(axis).dx;
        a.overall = overall_width(smearing, e);
        a.error_bar = error_bar_width(kernel, e, cfg);
        std::vector<double> centers{0.0};
        if (warp_map) {
            centers.clear();
            for (double c : cfg.probe_centers) centers.push_back(c * step);
        }
        a.resolution = resolution_width(kernel, e, default_probe_search(space, axis, centers));
        a.werner = covariant_distance(kernel).value_or(std::numeric_limits<double>::quiet_NaN());
        return a;
    };
    r.q = fill_axis(Axis::Q, eps.eps1);
    r.p = fill_axis(Axis::P, eps.eps2);

    const double dx = space.grid.dx;
    const double dp = space.momentum().dp;
    r.error_bar_product = r.q.error_bar.width * r.p.error_bar.width;
    r.resolution_product = r.q.resolution * r.p.resolution;
    r.werner_product = r.q.werner * r.p.werner;
    r.bound_simple = bound_simple(eps, space.hbar);
    r.bound_uffink = bound_uffink(eps, space.hbar);
    r.margin_simple = r.error_bar_product - r.bound_simple;
    r.margin_uffink = r.error_bar_product - r.bound_uffink;
    r.margin_resolution = r.resolution_product - r.bound_simple;
    r.no_positive_bound = !eps.valid_bound();
    if (std::isfinite(r.error_bar_product)) {
        r.tolerance = 2.0 * dx * r.p.error_bar.width + 2.0 * dp * r.q.error_bar.width + 4.0 * dx * dp;
    } else {
        r.tolerance = 0.0;
    }
    return r;
}

double width_product(const MixedState& rho, ConfidencePair eps) {
    return overall_width(position_distribution(rho), eps.eps1) * overall_width(momentum_distribution(rho), eps.eps2);
}

StateFamily gaussian_family(const StateSpace& space, double sigma_lo, double sigma_hi) {
    if (!(sigma_lo > 0.0) || !(sigma_hi > sigma_lo)) throw InvalidArgument("gaussian_family: bad sigma range");
    return StateFamily{"gaussian",
                       {{sigma_lo, sigma_hi}},
                       [space](std::span<const double> x) {
                           return MixedState(gaussian_state(0.0, 0.0, x[0], space.grid, space.hbar));
                       }};
}

StateFamily gaussian_mixture_family(const StateSpace& space, std::pair<double, double> sigma,
                                    std::pair<double, double> separation) {
    return StateFamily{"gaussian_mixture",
                       {sigma, separation},
                       [space](std::span<const double> x) {
                           return MixedState({{0.5, gaussian_state(-x[1], 0.0, x[0], space.grid, space.hbar)},
                                              {0.5, gaussian_state(x[1], 0.0, x[0], space.grid, space.hbar)}});
                       }};
}

ProductOptimum minimize_width_product(const StateFamily& family, ConfidencePair eps, int restarts, unsigned seed) {
    if (family.box.empty()) throw InvalidArgument("minimize_width_product: family has no parameters");
    for (const auto& [lo, hi] : family.box) {
        if (!(hi > lo)) throw InvalidArgument("minimize_width_product: empty parameter interval");
    }
    ProductOptimum best;
    best.product = kInf;
    int evaluations = 0;
    int rejected = 0;
    const auto objective = [&](std::span<const double> x) {
        ++evaluations;
        try {
            const double v = width_product(family.make(x), eps);
            if (std::isfinite(v)) return v;
        } catch (const Error&) {
        }
        ++rejected;
        return kInf;
    };

    std::mt19937 rng(seed);
    const std::size_t dims = family.box.size();
    for (int r = 0; r < std::max(1, restarts); ++r) {
        std::vector<double> x(dims);
        for (std::size_t i = 0; i < dims; ++i) {
            const auto [lo, hi] = family.box[i];
            x[i] = r == 0 ? 0.5 * (lo + hi) : std::uniform_real_distribution<double>(lo, hi)(rng);
        }
        double fx = objective(x);
        for (int sweep = 0; sweep < 3; ++sweep) {
            for (std::size_t i = 0; i < dims; ++i) {
                std::vector<double> trial = x;
                const auto line = [&](double v) {
                    trial[i] = v;
                    return objective(trial);
                };
                double xi = x[i];
                const double fi = golden_section(line, family.box[i].first, family.box[i].second, xi);
                if (fi < fx) {
                    fx = fi;
                    x[i] = xi;
                }
            }
        }
        if (fx < best.product) {
            best.product = fx;
            best.params = x;
        }
    }
    best.evaluations = evaluations;
    best.rejected = rejected;
    const double bu = bound_uffink(eps, family.make(best.params).hbar());
    const double bs = bound_simple(eps, family.make(best.params).hbar());
    best.ratio_uffink = bu > 0.0 ? best.product / bu : kInf;
    best.ratio_simple = bs > 0.0 ? best.product / bs : kInf;
    return best;
}

} // namespace uncert
