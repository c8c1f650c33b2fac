// Independent reference values used by the unit and acceptance tests.
#ifndef UNCERT_TESTS_ORACLES_HPP
#define UNCERT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uncert/grid_measure.hpp"

namespace oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Standard-normal quantile by bisection on the erfc-based CDF.
inline double normal_quantile(double p) {
    double lo = -40.0;
    double hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Shortest (1 - eps) interval of N(0, sigma^2).
inline double gaussian_width(double sigma, double eps) { return 2.0 * sigma * normal_quantile(1.0 - 0.5 * eps); }

/// E|X| for X ~ N(0, sigma^2).
inline double folded_normal_mean(double sigma) { return sigma * std::sqrt(2.0 / std::numbers::pi); }

/// Integral of sinc^2(pi u) over [-1, 1] by composite Simpson.
inline double sinc2_main_lobe(int panels = 20000) {
    const auto f = [](double u) {
        if (u == 0.0) return 1.0;
        const double s = std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
        return s * s;
    };
    const double h = 2.0 / panels;
    double acc = f(-1.0) + f(1.0);
    for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(-1.0 + k * h);
    return acc * h / 3.0;
}

/// Mass of [lo, hi] when each weight is spread uniformly over its cell.
inline double cell_mass(const uncert::GridMeasure& m, double lo, double hi) {
    const auto& g = m.grid();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < g.n; ++j) {
        const double a = std::max(lo, g.point(j) - 0.5 * g.dx);
        const double b = std::min(hi, g.point(j) + 0.5 * g.dx);
        if (b > a) acc += m.weights()[j] * (b - a) / g.dx;
    }
    return acc;
}

/// Shortest cell-model interval with mass >= 1 - eps: left ends on a
/// `sub`-fold refined lattice, length by bisection. Slow; small measures only.
inline double brute_width(const uncert::GridMeasure& m, double eps, int sub = 32) {
    const auto& g = m.grid();
    const double lo_end = g.x_min - 0.5 * g.dx;
    const double hi_end = g.x_max() + 0.5 * g.dx;
    double best = hi_end - lo_end;
    const double step = g.dx / sub;
    for (double a = lo_end; a <= hi_end; a += step) {
        if (cell_mass(m, a, hi_end) < 1.0 - eps - 1e-12) break;
        double lo = 0.0;
        double hi = hi_end - a;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (cell_mass(m, a, a + mid) >= 1.0 - eps - 1e-12 ? hi : lo) = mid;
        }
        best = std::min(best, hi);
    }
    return best;
}

/// Smallest w with cell-model mass of [c - w/2, c + w/2] >= 1 - eps.
inline double brute_centered_width(const uncert::GridMeasure& m, double c, double eps) {
    double lo = 0.0;
    double hi = 2.0 * (std::abs(c) + std::abs(m.grid().x_min) + std::abs(m.grid().x_max()) + m.grid().dx);
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cell_mass(m, c - 0.5 * mid, c + 0.5 * mid) >= 1.0 - eps - 1e-12 ? hi : lo) = mid;
    }
    return hi;
}

} // namespace oracle

#endif // UNCERT_TESTS_ORACLES_HPP
