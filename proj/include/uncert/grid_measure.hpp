#ifndef UNCERT_GRID_MEASURE_HPP
#define UNCERT_GRID_MEASURE_HPP

#include <Eigen/Core>

#include "uncert/error.hpp"

namespace uncert {

using Index = Eigen::Index;

/// Uniform 1-D grid x_j = x_min + j*dx, j = 0..n-1.
struct GridSpec {
    double x_min = 0.0;
    double dx = 1.0;
    Index n = 2;

    double point(Index j) const { return x_min + static_cast<double>(j) * dx; }
    double x_max() const { return point(n - 1); }
    Eigen::VectorXd points() const;
};

/// Validating constructor: dx > 0, n >= 2.
GridSpec make_grid(double x_min, double dx, Index n);

/// Grid of n points on [-L/2, L/2) with the origin on a grid point (index n/2).
GridSpec centered_grid(double length, Index n);

/// True when both grids have the same step to relative precision 1e-9.
bool same_step(const GridSpec& a, const GridSpec& b);

/// Offset of x from the origin in grid steps when x lies on dx*Z, otherwise throws.
Index lattice_index(double x, double dx, const char* what);

/// Closed interval J = [center - width/2, center + width/2].
struct Interval {
    double center = 0.0;
    double width = 0.0;

    double lower() const { return center - 0.5 * width; }
    double upper() const { return center + 0.5 * width; }
};

/// Nonnegative, normalized weight vector on a GridSpec. Immutable after
/// construction.
class GridMeasure {
public:
    /// Throws InvalidArgument unless every weight is >= 0 and the weights sum
    /// to 1 within 1e-9.
    GridMeasure(GridSpec grid, Eigen::VectorXd weights);

    /// Builds a measure from raw transform output: roundoff negatives are
    /// clamped, and the total is rescaled to 1 when it deviates by less than
    /// 1e-6. Larger deviations throw NumericalInconsistency.
    static GridMeasure renormalized(GridSpec grid, Eigen::VectorXd raw);

    const GridSpec& grid() const { return grid_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    Index size() const { return grid_.n; }

    double total() const { return weights_.sum(); }
    double mean() const;
    double variance() const;
    double central_moment(int order) const;

private:
    GridSpec grid_;
    Eigen::VectorXd weights_;
};

/// Sum of the weights whose grid points lie in the closed interval J.
double mass(const GridMeasure& measure, const Interval& window);

/// Shortest length of an interval carrying mass >= 1 - eps.
///
/// Widths are measured in the cell model: weight j is spread uniformly over
/// [x_j - dx/2, x_j + dx/2], so the returned length is continuous rather than a
/// multiple of dx. A point mass has width (1 - eps)*dx. The minimum is exact
/// for the piecewise-constant density (one endpoint always sits on a cell
/// boundary) and is found with a two-pointer scan over the cumulative sums.
double overall_width(const GridMeasure& measure, double eps);

/// Smallest w such that the cell-model mass of J_{center;w} is >= 1 - eps.
double centered_width(const GridMeasure& measure, double center, double eps);

/// Distribution of X + Y for independent X ~ a, Y ~ b. Steps must agree.
/// The output grid covers the Minkowski sum of both grids
/// (n_a + n_b - 1 points); transforms are zero padded.
GridMeasure convolve(const GridMeasure& a, const GridMeasure& b);

/// Distribution of -X.
GridMeasure reflect(const GridMeasure& measure);

/// Distribution of X + cells*dx.
GridMeasure translate(const GridMeasure& measure, Index cells);

/// Unit mass at the lattice point of dx*Z nearest to c.
GridMeasure point_mass(double c, double dx);

/// Sampled N(mean, sigma^2) on the lattice dx*Z, truncated at 8 sigma.
GridMeasure gaussian_measure(double mean, double sigma, double dx);

/// Equal weights on the lattice points of dx*Z inside [a, b].
GridMeasure uniform_measure(double a, double b, double dx);

} // namespace uncert

#endif // UNCERT_GRID_MEASURE_HPP
