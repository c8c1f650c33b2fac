#ifndef UNCERT_STATES_HPP
#define UNCERT_STATES_HPP

#include <vector>

#include <Eigen/Core>

#include "uncert/grid_measure.hpp"

namespace uncert {

/// Phase-space coordinate an observable or probe refers to.
enum class Axis { Q, P };

/// Momentum grid dual to a position grid: p_k = (k - n/2)*dp with
/// dp*dx*n = 2*pi*hbar.
struct MomentumGrid {
    double p_min = 0.0;
    double dp = 1.0;
    Index n = 2;

    GridSpec as_grid() const { return GridSpec{p_min, dp, n}; }
};

MomentumGrid momentum_grid(const GridSpec& position, double hbar);

/// Discretized Hilbert space: a position grid plus hbar.
struct StateSpace {
    GridSpec grid;
    double hbar = 1.0;

    MomentumGrid momentum() const { return momentum_grid(grid, hbar); }
    GridSpec axis_grid(Axis axis) const { return axis == Axis::Q ? grid : momentum().as_grid(); }
};

/// Position grid of n points whose position and momentum steps are equal
/// fractions of a minimal-uncertainty state of width sigma and its momentum
/// width hbar/(2 sigma): dx = sigma*sqrt(4*pi/n).
GridSpec balanced_grid(double sigma, Index n, double hbar = 1.0);

/// Pure state sampled on the position grid, sum |a_j|^2 dx = 1.
class WaveFunction {
public:
    /// Throws InvalidArgument unless the amplitudes are L2-normalized within 1e-9.
    WaveFunction(GridSpec grid, Eigen::VectorXcd amps, double hbar = 1.0);

    /// Rescales raw amplitudes to unit norm.
    static WaveFunction normalized(GridSpec grid, Eigen::VectorXcd amps, double hbar = 1.0);

    /// Builds the state whose momentum-space amplitudes on momentum_grid(grid)
    /// are `phi` (rescaled to unit norm).
    static WaveFunction from_momentum(GridSpec grid, const Eigen::VectorXcd& phi, double hbar = 1.0);

    const GridSpec& grid() const { return grid_; }
    const Eigen::VectorXcd& amps() const { return amps_; }
    double hbar() const { return hbar_; }
    StateSpace space() const { return StateSpace{grid_, hbar_}; }
    double norm_squared() const;

    /// Momentum amplitudes phi_k with sum |phi_k|^2 dp = 1.
    Eigen::VectorXcd momentum_amps() const;

private:
    GridSpec grid_;
    Eigen::VectorXcd amps_;
    double hbar_;
};

/// Convex mixture of pure states sharing grid and hbar.
class MixedState {
public:
    struct Component {
        double weight;
        WaveFunction psi;
    };

    MixedState(const WaveFunction& psi); // NOLINT(google-explicit-constructor): pure states are mixed states
    explicit MixedState(std::vector<Component> components);

    const std::vector<Component>& components() const { return components_; }
    const GridSpec& grid() const { return components_.front().psi.grid(); }
    double hbar() const { return components_.front().psi.hbar(); }
    StateSpace space() const { return StateSpace{grid(), hbar()}; }

private:
    std::vector<Component> components_;
};

/// exp(-(x-x0)^2/(4 sigma^2) + i p0 x/hbar), normalized. The grid must hold
/// x0 +- 8 sigma and the momentum grid p0 +- 8 hbar/(2 sigma).
WaveFunction gaussian_state(double x0, double p0, double sigma, const GridSpec& grid, double hbar = 1.0);

/// Constant amplitude on the grid points of [center - width/2, center + width/2].
WaveFunction box_state(double center, double width, const GridSpec& grid, double hbar = 1.0);

/// Constant momentum amplitude on the momentum-grid points of
/// [center - width/2, center + width/2]; width >= 0 (a single point for width < dp).
WaveFunction momentum_box_state(double center, double width, const GridSpec& grid, double hbar = 1.0);

/// State supported on the single grid point nearest to x.
WaveFunction grid_point_state(double x, const GridSpec& grid, double hbar = 1.0);

/// Box (Axis::Q) or momentum box (Axis::P) around `center` on the matching axis grid.
WaveFunction axis_box_state(Axis axis, double center, double width, const StateSpace& space);

GridMeasure position_distribution(const MixedState& rho);
GridMeasure momentum_distribution(const MixedState& rho);
GridMeasure axis_distribution(const MixedState& rho, Axis axis);

/// W(q,p) psi with W(q,p) = exp(i qp/2hbar) exp(-i qP/hbar) exp(i pQ/hbar).
/// q must be a multiple of dx; the phase ramp realizes any p exactly.
WaveFunction weyl_displace(const WaveFunction& psi, double q, double p);
MixedState weyl_displace(const MixedState& rho, double q, double p);

/// (Pi psi)(x) = psi(-x). The grid must be symmetric about 0 within dx.
WaveFunction parity(const WaveFunction& psi);
MixedState parity(const MixedState& rho);

} // namespace uncert

#endif // UNCERT_STATES_HPP
