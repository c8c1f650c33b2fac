#include "uncert/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uncert/error.hpp"

namespace uncert {

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys, Tail tail)
    : xs_(std::move(xs)), ys_(std::move(ys)), tail_(tail) {
    if (xs_.empty() || xs_.size() != ys_.size()) {
        throw InvalidArgument("piecewise-linear map needs matching, nonempty knot lists");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) throw InvalidArgument("knots must be finite");
        if (i > 0 && !(xs_[i] > xs_[i - 1])) throw InvalidArgument("knot abscissae must be strictly increasing");
    }
}

PiecewiseLinear PiecewiseLinear::identity() { return PiecewiseLinear({0.0}, {0.0}, Tail::UnitSlope); }

double PiecewiseLinear::operator()(double x) const {
    if (x <= xs_.front()) return tail_ == Tail::Constant ? ys_.front() : ys_.front() + (x - xs_.front());
    if (x >= xs_.back()) return tail_ == Tail::Constant ? ys_.back() : ys_.back() + (x - xs_.back());
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const auto i = static_cast<std::size_t>(it - xs_.begin());
    const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

bool PiecewiseLinear::strictly_increasing() const {
    if (tail_ == Tail::Constant) return false;
    for (std::size_t i = 1; i < ys_.size(); ++i) {
        if (!(ys_[i] > ys_[i - 1])) return false;
    }
    return true;
}

double PiecewiseLinear::lipschitz_constant() const {
    double l = tail_ == Tail::UnitSlope ? 1.0 : 0.0;
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        l = std::max(l, std::abs((ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1])));
    }
    return l;
}

double PiecewiseLinear::max_displacement() const {
    if (tail_ == Tail::Constant) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < xs_.size(); ++i) d = std::max(d, std::abs(ys_[i] - xs_[i]));
    return d;
}

PiecewiseLinear clipped_identity(double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("clip radius must be positive");
    return PiecewiseLinear({-radius, radius}, {-radius, radius}, PiecewiseLinear::Tail::Constant);
}

PiecewiseLinear tent(double center, double height) {
    if (!(height > 0.0)) throw InvalidArgument("tent height must be positive");
    return PiecewiseLinear({center - height, center, center + height}, {0.0, height, 0.0},
                           PiecewiseLinear::Tail::Constant);
}

PiecewiseLinear plateau(double center, double half_plateau, double height) {
    if (!(height > 0.0) || !(half_plateau > 0.0)) throw InvalidArgument("plateau needs positive height and width");
    const double a = center - half_plateau;
    const double b = center + half_plateau;
    return PiecewiseLinear({a - height, a, b, b + height}, {0.0, height, height, 0.0},
                           PiecewiseLinear::Tail::Constant);
}

PiecewiseLinear sinusoidal_warp(double amplitude, double period, double spacing, double lo, double hi) {
    if (!(period > 0.0) || !(spacing > 0.0) || !(hi > lo)) throw InvalidArgument("invalid sinusoidal warp layout");
    std::vector<double> xs;
    std::vector<double> ys;
    const auto count = static_cast<long>(std::floor((hi - lo) / spacing + 1e-9));
    for (long i = 0; i <= count; ++i) {
        const double x = lo + static_cast<double>(i) * spacing;
        xs.push_back(x);
        ys.push_back(x + amplitude * std::sin(2.0 * std::numbers::pi * x / period));
    }
    PiecewiseLinear f(std::move(xs), std::move(ys), PiecewiseLinear::Tail::UnitSlope);
    if (!f.strictly_increasing()) throw InvalidArgument("sinusoidal warp is not monotone; increase the period");
    return f;
}

PiecewiseLinear shift_warp(double shift) {
    return PiecewiseLinear({0.0}, {shift}, PiecewiseLinear::Tail::UnitSlope);
}

} // namespace uncert
