#ifndef UNCERT_PIECEWISE_LINEAR_HPP
#define UNCERT_PIECEWISE_LINEAR_HPP

#include <vector>

namespace uncert {

/// Continuous piecewise-linear function through knots (x_i, y_i) with
/// strictly increasing x_i.
///
/// Outside the knot range the function continues either flat (bounded test
/// functions) or with unit slope (warps, so that f(x) - x stays bounded).
class PiecewiseLinear {
public:
    enum class Tail { Constant, UnitSlope };

    PiecewiseLinear(std::vector<double> xs, std::vector<double> ys, Tail tail);

    static PiecewiseLinear identity();

    double operator()(double x) const;

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    Tail tail() const { return tail_; }

    bool strictly_increasing() const;
    /// Largest |slope| over all segments, including the tails.
    double lipschitz_constant() const;
    /// sup_x |f(x) - x|; finite only for UnitSlope tails.
    double max_displacement() const;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    Tail tail_;
};

/// x clipped to [-radius, radius]; 1-Lipschitz.
PiecewiseLinear clipped_identity(double radius);

/// Tent of height `height` at `center` falling with slope 1; 1-Lipschitz.
PiecewiseLinear tent(double center, double height);

/// Trapezoid equal to `height` on [center - half_plateau, center + half_plateau]
/// and falling with slope 1 to zero.
PiecewiseLinear plateau(double center, double half_plateau, double height);

/// Monotone warp q + amplitude*sin(2 pi q/period) sampled at knots spaced
/// `spacing` apart on [lo, hi], unit-slope tails. Needs
/// 2*pi*amplitude < period for monotonicity.
PiecewiseLinear sinusoidal_warp(double amplitude, double period, double spacing, double lo, double hi);

/// q + shift.
PiecewiseLinear shift_warp(double shift);

} // namespace uncert

#endif // UNCERT_PIECEWISE_LINEAR_HPP
