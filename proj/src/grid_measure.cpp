#include "uncert/grid_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fft.hpp"

namespace uncert {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kRenormTolerance = 1e-6;
// Absorbs roundoff in cumulative sums when a window holds exactly 1 - eps.
constexpr double kMassSlack = 1e-12;

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw InvalidArgument("confidence parameter eps must lie in (0,1), got " + std::to_string(eps));
    }
}

Eigen::VectorXd prefix_sums(const Eigen::VectorXd& w) {
    Eigen::VectorXd c(w.size() + 1);
    c[0] = 0.0;
    for (Index j = 0; j < w.size(); ++j) c[j + 1] = c[j] + w[j];
    return c;
}

// Shortest cell-model interval [i, b] (in cell units) starting on a cell
// boundary i and carrying at least `target`.
double shortest_from_left(const Eigen::VectorXd& w, double target) {
    const Index n = w.size();
    const Eigen::VectorXd c = prefix_sums(w);
    double best = std::numeric_limits<double>::infinity();
    Index k = 0;
    for (Index i = 0; i <= n; ++i) {
        const double y = c[i] + target;
        if (y > c[n]) break;
        while (k < n && c[k + 1] < y) ++k;
        if (k >= n) break;
        double frac = w[k] > 0.0 ? (y - c[k]) / w[k] : 0.0;
        frac = std::clamp(frac, 0.0, 1.0);
        best = std::min(best, static_cast<double>(k - i) + frac);
    }
    return std::max(best, 0.0);
}

// Cell-model CDF in cell-boundary coordinates u (cell j spans [j, j+1)).
double cell_cdf(const Eigen::VectorXd& c, const Eigen::VectorXd& w, double u) {
    const Index n = w.size();
    if (u <= 0.0) return 0.0;
    if (u >= static_cast<double>(n)) return c[n];
    const auto k = static_cast<Index>(std::floor(u));
    return c[k] + (u - static_cast<double>(k)) * w[k];
}

Eigen::VectorXd direct_convolution(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
    for (Index i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        out.segment(i, b.size()) += a[i] * b;
    }
    return out;
}

Eigen::VectorXd fft_convolution(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Index m = a.size() + b.size() - 1;
    const Index len = detail::next_pow2(m);
    Eigen::VectorXcd fa = Eigen::VectorXcd::Zero(len);
    Eigen::VectorXcd fb = Eigen::VectorXcd::Zero(len);
    fa.head(a.size()) = a.cast<std::complex<double>>();
    fb.head(b.size()) = b.cast<std::complex<double>>();
    const Eigen::VectorXcd prod = detail::dft_forward(fa).cwiseProduct(detail::dft_forward(fb));
    const Eigen::VectorXcd back = detail::dft_backward(prod);
    return back.head(m).real() / static_cast<double>(len);
}

struct Support {
    Index first = 0;
    Index last = -1;
};

Support support_of(const Eigen::VectorXd& w) {
    Support s;
    for (Index j = 0; j < w.size(); ++j) {
        if (w[j] > 0.0) {
            s.first = j;
            break;
        }
    }
    for (Index j = w.size() - 1; j >= 0; --j) {
        if (w[j] > 0.0) {
            s.last = j;
            break;
        }
    }
    return s;
}

} // namespace

Eigen::VectorXd GridSpec::points() const {
    Eigen::VectorXd x(n);
    for (Index j = 0; j < n; ++j) x[j] = point(j);
    return x;
}

GridSpec make_grid(double x_min, double dx, Index n) {
    if (!std::isfinite(x_min)) throw InvalidArgument("grid x_min must be finite");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw InvalidArgument("grid step dx must be positive");
    if (n < 2) throw InvalidArgument("grid needs at least 2 points");
    return GridSpec{x_min, dx, n};
}

GridSpec centered_grid(double length, Index n) {
    if (!(length > 0.0)) throw InvalidArgument("grid length must be positive");
    if (n < 2) throw InvalidArgument("grid needs at least 2 points");
    const double dx = length / static_cast<double>(n);
    return make_grid(-static_cast<double>(n / 2) * dx, dx, n);
}

bool same_step(const GridSpec& a, const GridSpec& b) {
    return std::abs(a.dx - b.dx) <= 1e-9 * std::max(a.dx, b.dx);
}

Index lattice_index(double x, double dx, const char* what) {
    const double u = x / dx;
    const double k = std::round(u);
    if (std::abs(u - k) > 1e-6) {
        throw InvalidArgument(std::string(what) + " must be an integer multiple of the grid step (" +
                              std::to_string(x) + " / " + std::to_string(dx) + ")");
    }
    return static_cast<Index>(k);
}

GridMeasure::GridMeasure(GridSpec grid, Eigen::VectorXd weights) : grid_(grid), weights_(std::move(weights)) {
    if (grid_.n < 2 || !(grid_.dx > 0.0)) throw InvalidArgument("invalid grid for measure");
    if (weights_.size() != grid_.n) throw InvalidArgument("weight vector length does not match grid");
    for (Index j = 0; j < weights_.size(); ++j) {
        if (!(weights_[j] >= 0.0) || !std::isfinite(weights_[j])) {
            throw InvalidArgument("measure weights must be finite and nonnegative");
        }
    }
    const double s = weights_.sum();
    if (std::abs(s - 1.0) > kNormTolerance) {
        throw InvalidArgument("measure weights must sum to 1 (got " + std::to_string(s) + ")");
    }
}

GridMeasure GridMeasure::renormalized(GridSpec grid, Eigen::VectorXd raw) {
    const double scale = raw.cwiseAbs().maxCoeff();
    for (Index j = 0; j < raw.size(); ++j) {
        if (!std::isfinite(raw[j])) throw NumericalInconsistency("non-finite weight in transform output");
        if (raw[j] < 0.0) {
            if (raw[j] < -kRenormTolerance * std::max(scale, 1.0)) {
                throw NumericalInconsistency("transform produced a negative weight " + std::to_string(raw[j]));
            }
            raw[j] = 0.0;
        }
    }
    const double total = raw.sum();
    if (std::abs(total - 1.0) >= kRenormTolerance) {
        throw NumericalInconsistency("mass not conserved: total " + std::to_string(total));
    }
    raw /= total;
    return GridMeasure(grid, std::move(raw));
}

double GridMeasure::mean() const { return weights_.dot(grid_.points()); }

double GridMeasure::central_moment(int order) const {
    const double m = mean();
    const Eigen::VectorXd x = grid_.points();
    double acc = 0.0;
    for (Index j = 0; j < weights_.size(); ++j) acc += weights_[j] * std::pow(x[j] - m, order);
    return acc;
}

double GridMeasure::variance() const { return central_moment(2); }

double mass(const GridMeasure& measure, const Interval& window) {
    if (window.width < 0.0) throw InvalidArgument("interval width must be nonnegative");
    const GridSpec& g = measure.grid();
    const double tol = 1e-9;
    const double lo = (window.lower() - g.x_min) / g.dx - tol;
    const double hi = (window.upper() - g.x_min) / g.dx + tol;
    const Index first = std::max<Index>(0, static_cast<Index>(std::ceil(lo)));
    const Index last = std::min<Index>(g.n - 1, static_cast<Index>(std::floor(hi)));
    if (last < first) return 0.0;
    return std::min(1.0, measure.weights().segment(first, last - first + 1).sum());
}

double overall_width(const GridMeasure& measure, double eps) {
    check_eps(eps);
    const Eigen::VectorXd& w = measure.weights();
    const double target = (1.0 - eps) * w.sum() - kMassSlack;
    const Eigen::VectorXd reversed = w.reverse();
    const double cells = std::min(shortest_from_left(w, target), shortest_from_left(reversed, target));
    return cells * measure.grid().dx;
}

double centered_width(const GridMeasure& measure, double center, double eps) {
    check_eps(eps);
    const GridSpec& g = measure.grid();
    const Eigen::VectorXd& w = measure.weights();
    const Eigen::VectorXd c = prefix_sums(w);
    const double target = (1.0 - eps) * c[g.n] - kMassSlack;
    const double uc = (center - g.x_min) / g.dx + 0.5;
    const auto window_mass = [&](double r) { return cell_cdf(c, w, uc + r) - cell_cdf(c, w, uc - r); };

    double lo = 0.0;
    double hi = std::max(std::abs(uc), std::abs(static_cast<double>(g.n) - uc)) + 1.0;
    if (window_mass(lo) >= target) return 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (window_mass(mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 2.0 * hi * g.dx;
}

GridMeasure convolve(const GridMeasure& a, const GridMeasure& b) {
    if (!same_step(a.grid(), b.grid())) {
        throw GridMismatch("convolution needs equal grid steps (" + std::to_string(a.grid().dx) + " vs " +
                           std::to_string(b.grid().dx) + ")");
    }
    const GridSpec out_grid{a.grid().x_min + b.grid().x_min, a.grid().dx, a.size() + b.size() - 1};
    const Support sa = support_of(a.weights());
    const Support sb = support_of(b.weights());
    const Eigen::VectorXd wa = a.weights().segment(sa.first, sa.last - sa.first + 1);
    const Eigen::VectorXd wb = b.weights().segment(sb.first, sb.last - sb.first + 1);

    const Eigen::VectorXd core = std::min(wa.size(), wb.size()) <= 64 ? direct_convolution(wa, wb)
                                                                        : fft_convolution(wa, wb);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(out_grid.n);
    out.segment(sa.first + sb.first, core.size()) = core;
    return GridMeasure::renormalized(out_grid, std::move(out));
}

GridMeasure reflect(const GridMeasure& measure) {
    const GridSpec& g = measure.grid();
    const GridSpec out{-g.x_max(), g.dx, g.n};
    return GridMeasure(out, measure.weights().reverse());
}

GridMeasure translate(const GridMeasure& measure, Index cells) {
    GridSpec g = measure.grid();
    g.x_min += static_cast<double>(cells) * g.dx;
    return GridMeasure(g, measure.weights());
}

GridMeasure point_mass(double c, double dx) {
    if (!(dx > 0.0)) throw InvalidArgument("point_mass: dx must be positive");
    const double k = std::round(c / dx);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
    w[1] = 1.0;
    return GridMeasure(GridSpec{(k - 1.0) * dx, dx, 3}, std::move(w));
}

GridMeasure gaussian_measure(double mean, double sigma, double dx) {
    if (!(sigma > 0.0)) throw InvalidArgument("gaussian_measure: sigma must be positive");
    if (!(dx > 0.0)) throw InvalidArgument("gaussian_measure: dx must be positive");
    const auto lo = static_cast<Index>(std::floor((mean - 8.0 * sigma) / dx)) - 1;
    const auto hi = static_cast<Index>(std::ceil((mean + 8.0 * sigma) / dx)) + 1;
    const GridSpec g{static_cast<double>(lo) * dx, dx, hi - lo + 1};
    Eigen::VectorXd w(g.n);
    for (Index j = 0; j < g.n; ++j) {
        const double z = (g.point(j) - mean) / sigma;
        w[j] = std::exp(-0.5 * z * z);
    }
    const double s = w.sum();
    if (!(s > 0.0)) return point_mass(mean, dx);
    w /= s;
    return GridMeasure(g, std::move(w));
}

GridMeasure uniform_measure(double a, double b, double dx) {
    if (!(dx > 0.0)) throw InvalidArgument("uniform_measure: dx must be positive");
    if (b < a) throw InvalidArgument("uniform_measure: need a <= b");
    const auto first = static_cast<Index>(std::ceil(a / dx - 1e-9));
    const auto last = static_cast<Index>(std::floor(b / dx + 1e-9));
    if (last < first) return point_mass(0.5 * (a + b), dx);
    const Index count = last - first + 1;
    const Index n = std::max<Index>(count, 2);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    w.head(count).setConstant(1.0 / static_cast<double>(count));
    return GridMeasure(GridSpec{static_cast<double>(first) * dx, dx, n}, std::move(w));
}

} // namespace uncert
