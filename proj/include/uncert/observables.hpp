#ifndef UNCERT_OBSERVABLES_HPP
#define UNCERT_OBSERVABLES_HPP

#include <variant>

#include <Eigen/Core>

#include "uncert/grid_measure.hpp"
#include "uncert/piecewise_linear.hpp"
#include "uncert/states.hpp"

namespace uncert {

/// gamma = (gamma_q, gamma_p): separate monotone bijections of the two
/// phase-space coordinates with bounded displacement.
struct WarpMap {
    PiecewiseLinear gamma_q = PiecewiseLinear::identity();
    PiecewiseLinear gamma_p = PiecewiseLinear::identity();
    double bound_q = 0.0; ///< sup |gamma_q(q) - q|
    double bound_p = 0.0; ///< sup |gamma_p(p) - p|

    const PiecewiseLinear& along(Axis axis) const { return axis == Axis::Q ? gamma_q : gamma_p; }
    double bound(Axis axis) const { return axis == Axis::Q ? bound_q : bound_p; }
};

/// Validates monotonicity and computes the displacement bounds.
WarpMap make_warp_map(PiecewiseLinear gamma_q, PiecewiseLinear gamma_p);

struct SharpPosition {};
struct SharpMomentum {};

/// Q * mu: outcome = position + independent noise drawn from mu.
struct SmearedPosition {
    GridMeasure mu;
};

/// P * nu: outcome = momentum + independent noise drawn from nu.
struct SmearedMomentum {
    GridMeasure nu;
};

/// One marginal of the covariant phase-space observable generated by `gen`.
/// `smearing` caches mu_m (axis Q) or nu_m (axis P).
struct PhaseMarginal {
    MixedState gen;
    Axis axis;
    GridMeasure smearing;
};

/// Marginal of G^m composed with gamma^-1: the covariant marginal pushed
/// forward through the warp of the same axis.
struct WarpedMarginal {
    MixedState gen;
    Axis axis;
    WarpMap warp;
    GridMeasure smearing;
};

using ObservableKernel =
    std::variant<SharpPosition, SharpMomentum, SmearedPosition, SmearedMomentum, PhaseMarginal, WarpedMarginal>;

PhaseMarginal phase_marginal(const MixedState& gen, Axis axis);

/// The warped (generally non-covariant) marginal G^m o gamma^-1 on `axis`.
WarpedMarginal warp(const MixedState& gen, const WarpMap& w, Axis axis);

/// Axis of the sharp observable the kernel approximates.
Axis reference_axis(const ObservableKernel& kernel);

/// True when translating the input state translates the outcome
/// distribution (all kinds except WarpedMarginal).
bool is_covariant(const ObservableKernel& kernel);

/// The state's outcome distribution rho^E for the kernel E.
GridMeasure outcome_distribution(const ObservableKernel& kernel, const MixedState& rho);

struct MarginalMeasures {
    GridMeasure mu; ///< position distribution of Pi m Pi*
    GridMeasure nu; ///< momentum distribution of Pi m Pi*
};

MarginalMeasures marginal_measures(const MixedState& gen);

/// Distribution of gamma(X) for X ~ measure, on the same grid. Mass landing
/// between grid points is split linearly between the two neighbours.
/// Throws WindowError if more than 1e-6 of the mass leaves the grid.
GridMeasure pushforward(const GridMeasure& measure, const PiecewiseLinear& gamma);

/// G^m with a rectangular outcome window. Outcome q values lie on dx*Z and
/// outcome p values on dp*Z of the generator's state space.
struct PhaseSpaceObservable {
    MixedState gen;
    GridSpec q_grid;
    GridSpec p_grid;

    double cell_area() const { return q_grid.dx * p_grid.dx; }
};

/// Outcome window covering the full position and momentum grids, thinned by
/// integer strides.
PhaseSpaceObservable phase_space_observable(const MixedState& gen, Index q_stride = 1, Index p_stride = 1);

/// Validating constructor for an explicit outcome window.
PhaseSpaceObservable phase_space_observable(const MixedState& gen, GridSpec q_grid, GridSpec p_grid);

/// Outcome density on the (q, p) window; rows are q, columns are p.
struct JointDistribution {
    GridSpec q_grid;
    GridSpec p_grid;
    Eigen::MatrixXd density;

    double cell_area() const { return q_grid.dx * p_grid.dx; }
    double total_mass() const { return density.sum() * cell_area(); }
    /// Row sums times cell area (not renormalized).
    Eigen::VectorXd q_marginal_masses() const;
    Eigen::VectorXd p_marginal_masses() const;
};

/// density(q,p) = (1/2 pi hbar) tr[rho W(q,p) m W(q,p)*], midpoint rule per
/// cell. Throws WindowError when the window misses more than 1e-3 of the mass.
JointDistribution joint_distribution(const PhaseSpaceObservable& g, const MixedState& rho);

/// Pushes the joint cell masses through gamma and returns the density on the
/// same window.
JointDistribution warp_joint(const JointDistribution& joint, const WarpMap& w);

/// Max |joint(W(q,p) rho) - joint(rho)(. - (q,p))| over the overlapping cells.
/// q and p must be multiples of the outcome steps.
double covariance_residual(const PhaseSpaceObservable& g, const MixedState& rho, double q, double p);

/// Same check for the warped observable G^m o gamma^-1.
double covariance_residual(const PhaseSpaceObservable& g, const WarpMap& w, const MixedState& rho, double q,
                           double p);

} // namespace uncert

#endif // UNCERT_OBSERVABLES_HPP
