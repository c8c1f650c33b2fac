#include "uncert/observables.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "fft.hpp"

namespace uncert {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Linear-split pushforward of a weight vector on grid g; returns the mass that
// left the grid through `lost`.
Eigen::VectorXd push_weights(const Eigen::VectorXd& w, const GridSpec& g, const PiecewiseLinear& gamma,
                             double& lost) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(w.size());
    lost = 0.0;
    for (Index j = 0; j < w.size(); ++j) {
        if (w[j] == 0.0) continue;
        const double u = (gamma(g.point(j)) - g.x_min) / g.dx;
        auto k = static_cast<Index>(std::floor(u));
        double f = u - static_cast<double>(k);
        if (f < 1e-9) {
            f = 0.0;
        } else if (f > 1.0 - 1e-9) {
            ++k;
            f = 0.0;
        }
        const double left = (1.0 - f) * w[j];
        const double right = f * w[j];
        if (k >= 0 && k < w.size()) {
            out[k] += left;
        } else {
            lost += left;
        }
        if (right > 0.0) {
            if (k + 1 >= 0 && k + 1 < w.size()) {
                out[k + 1] += right;
            } else {
                lost += right;
            }
        }
    }
    return out;
}

bool same_space(const StateSpace& a, const StateSpace& b) {
    return a.grid.n == b.grid.n && same_step(a.grid, b.grid) && std::abs(a.grid.x_min - b.grid.x_min) <= 1e-9 * a.grid.dx &&
           a.hbar == b.hbar;
}

Index integer_ratio(double big, double small, const char* what) {
    const double r = big / small;
    const double k = std::round(r);
    if (k < 1.0 || std::abs(r - k) > 1e-6) {
        throw InvalidArgument(std::string(what) + " must be a positive integer multiple of the state grid step");
    }
    return static_cast<Index>(k);
}

std::string window_text(const GridSpec& q, const GridSpec& p) {
    return "[" + std::to_string(q.x_min) + ", " + std::to_string(q.x_max()) + "] x [" + std::to_string(p.x_min) +
           ", " + std::to_string(p.x_max()) + "]";
}

double residual(const JointDistribution& moved, const JointDistribution& base, Index a, Index b) {
    double worst = 0.0;
    const Index nq = base.density.rows();
    const Index np = base.density.cols();
    for (Index i = 0; i < nq; ++i) {
        const Index i0 = i - a;
        if (i0 < 0 || i0 >= nq) continue;
        for (Index l = 0; l < np; ++l) {
            const Index l0 = l - b;
            if (l0 < 0 || l0 >= np) continue;
            worst = std::max(worst, std::abs(moved.density(i, l) - base.density(i0, l0)));
        }
    }
    return worst;
}

} // namespace

WarpMap make_warp_map(PiecewiseLinear gamma_q, PiecewiseLinear gamma_p) {
    if (!gamma_q.strictly_increasing()) throw InvalidArgument("warp gamma_q is not a monotone bijection");
    if (!gamma_p.strictly_increasing()) throw InvalidArgument("warp gamma_p is not a monotone bijection");
    WarpMap w{std::move(gamma_q), std::move(gamma_p), 0.0, 0.0};
    w.bound_q = w.gamma_q.max_displacement();
    w.bound_p = w.gamma_p.max_displacement();
    return w;
}

MarginalMeasures marginal_measures(const MixedState& gen) {
    const MixedState reflected = parity(gen);
    return MarginalMeasures{position_distribution(reflected), momentum_distribution(reflected)};
}

PhaseMarginal phase_marginal(const MixedState& gen, Axis axis) {
    const MarginalMeasures m = marginal_measures(gen);
    return PhaseMarginal{gen, axis, axis == Axis::Q ? m.mu : m.nu};
}

WarpedMarginal warp(const MixedState& gen, const WarpMap& w, Axis axis) {
    if (!w.along(axis).strictly_increasing()) throw InvalidArgument("warp map is not a monotone bijection");
    const MarginalMeasures m = marginal_measures(gen);
    return WarpedMarginal{gen, axis, w, axis == Axis::Q ? m.mu : m.nu};
}

Axis reference_axis(const ObservableKernel& kernel) {
    return std::visit(overloaded{
                          [](const SharpPosition&) { return Axis::Q; },
                          [](const SharpMomentum&) { return Axis::P; },
                          [](const SmearedPosition&) { return Axis::Q; },
                          [](const SmearedMomentum&) { return Axis::P; },
                          [](const PhaseMarginal& k) { return k.axis; },
                          [](const WarpedMarginal& k) { return k.axis; },
                      },
                      kernel);
}

bool is_covariant(const ObservableKernel& kernel) { return !std::holds_alternative<WarpedMarginal>(kernel); }

GridMeasure outcome_distribution(const ObservableKernel& kernel, const MixedState& rho) {
    return std::visit(overloaded{
                          [&](const SharpPosition&) { return position_distribution(rho); },
                          [&](const SharpMomentum&) { return momentum_distribution(rho); },
                          [&](const SmearedPosition& k) { return convolve(position_distribution(rho), k.mu); },
                          [&](const SmearedMomentum& k) { return convolve(momentum_distribution(rho), k.nu); },
                          [&](const PhaseMarginal& k) { return convolve(axis_distribution(rho, k.axis), k.smearing); },
                          [&](const WarpedMarginal& k) {
                              return pushforward(convolve(axis_distribution(rho, k.axis), k.smearing),
                                                 k.warp.along(k.axis));
                          },
                      },
                      kernel);
}

GridMeasure pushforward(const GridMeasure& measure, const PiecewiseLinear& gamma) {
    double lost = 0.0;
    Eigen::VectorXd out = push_weights(measure.weights(), measure.grid(), gamma, lost);
    if (lost > 1e-6) {
        throw WindowError("pushforward moves mass " + std::to_string(lost) + " off the outcome grid");
    }
    return GridMeasure::renormalized(measure.grid(), std::move(out));
}

PhaseSpaceObservable phase_space_observable(const MixedState& gen, Index q_stride, Index p_stride) {
    if (q_stride < 1 || p_stride < 1) throw InvalidArgument("outcome strides must be positive");
    const GridSpec& x = gen.grid();
    const MomentumGrid mg = gen.space().momentum();
    const double q_min = std::round(x.x_min / x.dx) * x.dx;
    const GridSpec q{q_min, x.dx * static_cast<double>(q_stride), (x.n - 1) / q_stride + 1};
    const GridSpec p{mg.p_min, mg.dp * static_cast<double>(p_stride), (mg.n - 1) / p_stride + 1};
    return phase_space_observable(gen, q, p);
}

PhaseSpaceObservable phase_space_observable(const MixedState& gen, GridSpec q_grid, GridSpec p_grid) {
    const StateSpace s = gen.space();
    const double dp = s.momentum().dp;
    integer_ratio(q_grid.dx, s.grid.dx, "outcome q step");
    integer_ratio(p_grid.dx, dp, "outcome p step");
    lattice_index(q_grid.x_min, s.grid.dx, "outcome q_min");
    lattice_index(p_grid.x_min, dp, "outcome p_min");
    if (q_grid.n < 1 || p_grid.n < 1) throw InvalidArgument("outcome window must be nonempty");
    return PhaseSpaceObservable{gen, q_grid, p_grid};
}

Eigen::VectorXd JointDistribution::q_marginal_masses() const { return density.rowwise().sum() * cell_area(); }

Eigen::VectorXd JointDistribution::p_marginal_masses() const {
    return density.colwise().sum().transpose() * cell_area();
}

JointDistribution joint_distribution(const PhaseSpaceObservable& g, const MixedState& rho) {
    const StateSpace s = g.gen.space();
    if (!same_space(s, rho.space())) throw GridMismatch("joint_distribution: state and generator grids differ");
    const Index n = s.grid.n;
    const double dx = s.grid.dx;
    const double dp = s.momentum().dp;
    const double pref = dx * dx / (2.0 * std::numbers::pi * s.hbar);

    JointDistribution out{g.q_grid, g.p_grid, Eigen::MatrixXd::Zero(g.q_grid.n, g.p_grid.n)};
    std::vector<Index> p_bins(static_cast<std::size_t>(g.p_grid.n));
    for (Index l = 0; l < g.p_grid.n; ++l) {
        const Index idx = lattice_index(g.p_grid.point(l), dp, "outcome p");
        p_bins[static_cast<std::size_t>(l)] = ((idx % n) + n) % n;
    }

    Eigen::VectorXcd prod(n);
    for (Index i = 0; i < g.q_grid.n; ++i) {
        const Index shift = lattice_index(g.q_grid.point(i), dx, "outcome q");
        for (const auto& a : rho.components()) {
            for (const auto& b : g.gen.components()) {
                const double weight = a.weight * b.weight * pref;
                if (weight == 0.0) continue;
                prod.setZero();
                const Eigen::VectorXcd& psi = a.psi.amps();
                const Eigen::VectorXcd& phi = b.psi.amps();
                const Index lo = std::max<Index>(0, shift);
                const Index hi = std::min<Index>(n, n + shift);
                if (hi <= lo) continue;
                prod.segment(lo, hi - lo) = psi.segment(lo, hi - lo).conjugate().cwiseProduct(
                    phi.segment(lo - shift, hi - lo));
                const Eigen::VectorXcd spec = detail::dft_backward(prod);
                for (Index l = 0; l < g.p_grid.n; ++l) {
                    out.density(i, l) += weight * std::norm(spec[p_bins[static_cast<std::size_t>(l)]]);
                }
            }
        }
    }

    const double total = out.total_mass();
    if (total < 1.0 - 1e-3) {
        throw WindowError("joint_distribution: outcome window " + window_text(g.q_grid, g.p_grid) +
                          " captures only mass " + std::to_string(total));
    }
    return out;
}

JointDistribution warp_joint(const JointDistribution& joint, const WarpMap& w) {
    const double area = joint.cell_area();
    Eigen::MatrixXd masses = joint.density * area;
    double lost = 0.0;
    for (Index l = 0; l < masses.cols(); ++l) {
        const Eigen::VectorXd col = masses.col(l);
        masses.col(l) = push_weights(col, joint.q_grid, w.gamma_q, lost);
    }
    for (Index i = 0; i < masses.rows(); ++i) {
        const Eigen::VectorXd row = masses.row(i).transpose();
        masses.row(i) = push_weights(row, joint.p_grid, w.gamma_p, lost).transpose();
    }
    return JointDistribution{joint.q_grid, joint.p_grid, masses / area};
}

double covariance_residual(const PhaseSpaceObservable& g, const MixedState& rho, double q, double p) {
    const Index a = lattice_index(q, g.q_grid.dx, "covariance shift q");
    const Index b = lattice_index(p, g.p_grid.dx, "covariance shift p");
    const JointDistribution base = joint_distribution(g, rho);
    const JointDistribution moved = joint_distribution(g, weyl_displace(rho, q, p));
    return residual(moved, base, a, b);
}

double covariance_residual(const PhaseSpaceObservable& g, const WarpMap& w, const MixedState& rho, double q,
                           double p) {
    const Index a = lattice_index(q, g.q_grid.dx, "covariance shift q");
    const Index b = lattice_index(p, g.p_grid.dx, "covariance shift p");
    const JointDistribution base = warp_joint(joint_distribution(g, rho), w);
    const JointDistribution moved = warp_joint(joint_distribution(g, weyl_displace(rho, q, p)), w);
    return residual(moved, base, a, b);
}

} // namespace uncert
