#ifndef UNCERT_METROLOGY_HPP
#define UNCERT_METROLOGY_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uncert/grid_measure.hpp"
#include "uncert/observables.hpp"
#include "uncert/piecewise_linear.hpp"
#include "uncert/states.hpp"

namespace uncert {

/// Confidence parameters (eps1, eps2), each in (0,1).
struct ConfidencePair {
    double eps1;
    double eps2;

    bool valid_bound() const { return eps1 + eps2 < 1.0; }
};

ConfidencePair make_confidence(double eps1, double eps2);

/// 2 pi hbar (1 - eps1 - eps2)^2, or 0 when eps1 + eps2 >= 1.
double bound_simple(ConfidencePair eps, double hbar);

/// 2 pi hbar (sqrt((1-eps1)(1-eps2)) - sqrt(eps1 eps2))^2, or 0 when
/// eps1 + eps2 >= 1. Never below bound_simple, also in floating point.
double bound_uffink(ConfidencePair eps, double hbar);

enum class ProbeKind { Box, TruncatedGaussian };

/// Calibration probes for the error functionals.
///
/// `delta_ladder` and `probe_centers` are measured in grid steps of the
/// calibrated axis (dx for position, dp for momentum), so one config serves
/// both marginals of a joint observable.
struct CalibrationConfig {
    StateSpace space;
    std::vector<double> delta_ladder{16.0, 8.0, 4.0, 2.0};
    std::vector<double> probe_centers{0.0};
    ProbeKind probe_kind = ProbeKind::Box;
    double confidence = 0.05;
};

/// Smallest w such that every probe localized in J_{x;delta} puts mass
/// >= 1 - eps on J_{x;w}. A probe supported on grid point y counts as
/// localized when its cell lies in J_{x;delta}, i.e. |y - x| <= (delta - step)/2.
/// Probes are the single-point states of those grid points (the extreme
/// localized states), the box over all of them and optionally a truncated
/// Gaussian. Covariant kernels are probed at x = 0 only; others at every
/// cfg.probe_centers. Returns +infinity when the window would leave the axis
/// grid ("exceeds window").
double calibration_error(const ObservableKernel& kernel, double eps, double delta, const CalibrationConfig& cfg);

struct LadderRung {
    double delta;
    double error;
};

struct ErrorBar {
    double width = 0.0;  ///< calibration error at the smallest delta
    double spread = 0.0; ///< max - min over the finite ladder values
    std::vector<LadderRung> ladder;

    bool finite() const;
};

/// Evaluates calibration_error along cfg.delta_ladder (decreasing). Throws
/// NumericalInconsistency if the error grows by more than one step as delta
/// shrinks.
ErrorBar error_bar_width(const ObservableKernel& kernel, double eps, const CalibrationConfig& cfg);

/// Candidate states for the resolution-width search. Covariant kernels use
/// `family` as is. For other kernels each member is translated by up to
/// `search_radius` steps around every center in `centers` (axis units);
/// a negative radius is derived from the warp bound.
struct ProbeSearch {
    std::vector<MixedState> family;
    std::vector<double> centers{0.0};
    int search_radius = -1;
};

/// Grid-point state, narrow boxes and Gaussians of several widths on the
/// axis, all centred at 0.
ProbeSearch default_probe_search(const StateSpace& space, Axis axis, std::vector<double> centers = {0.0});

/// Smallest w such that for every center x some candidate puts mass >= 1 - eps on J_{x;w}.
double resolution_width(const ObservableKernel& kernel, double eps, const ProbeSearch& search);

/// Integral of |x| against mu: Werner distance between Q*mu and Q.
double werner_distance_covariant(const GridMeasure& mu);

/// Closed-form distance to the sharp observable for covariant kernels.
std::optional<double> covariant_distance(const ObservableKernel& kernel);

/// max over (rho, h) of |E_1[h] - E_2[h]|. Every h must be 1-Lipschitz.
double werner_distance_lower_bound(const ObservableKernel& k1, const ObservableKernel& k2,
                                   std::span<const MixedState> states, std::span<const PiecewiseLinear> hats);

struct DistanceErrorCheck {
    double error_bar = 0.0;
    double distance = 0.0;
    double rhs = 0.0;       ///< (2/eps) * distance
    double tolerance = 0.0; ///< 2 grid steps
    bool holds = false;
};

/// error_bar_width <= (2/eps) * distance + 2 steps for a covariant kernel.
/// Throws InvalidArgument for kernels without a closed-form distance.
DistanceErrorCheck check_distance_error_inequality(const ObservableKernel& kernel, double eps,
                                                   const CalibrationConfig& cfg);

struct AxisWidths {
    double overall = 0.0;    ///< overall width of the smearing measure
    double resolution = 0.0;
    ErrorBar error_bar;
    double werner = 0.0;     ///< NaN when no closed form exists
};

struct WidthReport {
    std::string scenario_id;
    ConfidencePair eps{0.05, 0.05};
    double hbar = 1.0;
    AxisWidths q;
    AxisWidths p;
    double error_bar_product = 0.0;
    double resolution_product = 0.0;
    double werner_product = 0.0;
    double bound_simple = 0.0;
    double bound_uffink = 0.0;
    double margin_simple = 0.0;     ///< error_bar_product - bound_simple
    double margin_uffink = 0.0;     ///< error_bar_product - bound_uffink
    double margin_resolution = 0.0; ///< resolution_product - bound_simple
    double tolerance = 0.0;         ///< product slack from 2-step width slack per axis
    bool no_positive_bound = false;
    bool warped = false;

    bool error_bar_holds() const { return margin_simple >= -tolerance && margin_uffink >= -tolerance; }
    bool resolution_holds() const { return margin_resolution >= -tolerance; }
    bool pass() const { return error_bar_holds() && resolution_holds(); }
};

/// Joint-measurement uncertainty check for the phase-space observable
/// generated by `gen` (optionally composed with a warp): error-bar and
/// resolution widths per marginal, their products against both bounds.
WidthReport verify_joint_ur(const MixedState& gen, ConfidencePair eps, const CalibrationConfig& cfg,
                            const std::optional<WarpMap>& warp_map = std::nullopt);

/// overall_width(rho^Q, eps1) * overall_width(rho^P, eps2).
double width_product(const MixedState& rho, ConfidencePair eps);

/// State family over a box of real parameters.
struct StateFamily {
    std::string name;
    std::vector<std::pair<double, double>> box;
    std::function<MixedState(std::span<const double>)> make;
};

StateFamily gaussian_family(const StateSpace& space, double sigma_lo, double sigma_hi);
/// Equal mixture of Gaussians (sigma) at +-d; parameters (sigma, d).
StateFamily gaussian_mixture_family(const StateSpace& space, std::pair<double, double> sigma,
                                    std::pair<double, double> separation);

struct ProductOptimum {
    std::vector<double> params;
    double product = 0.0;
    double ratio_uffink = 0.0;
    double ratio_simple = 0.0;
    int evaluations = 0;
    int rejected = 0;
};

/// Coordinate-wise golden-section descent with restarts on the width product.
/// Parameters whose state cannot be built (state escapes the grid) are
/// rejected and the search continues.
ProductOptimum minimize_width_product(const StateFamily& family, ConfidencePair eps, int restarts = 3,
                                      unsigned seed = 12345);

} // namespace uncert

#endif // UNCERT_METROLOGY_HPP
