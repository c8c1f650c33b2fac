#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "uncert/metrology.hpp"
#include "uncert/observables.hpp"

using namespace uncert;

namespace {

// Largest weight difference after aligning both measures on their common lattice.
double aligned_diff(const GridMeasure& a, const GridMeasure& b) {
    const double dx = a.grid().dx;
    const Index oa = lattice_index(a.grid().x_min, dx, "a");
    const Index ob = lattice_index(b.grid().x_min, dx, "b");
    const Index lo = std::min(oa, ob);
    const Index hi = std::max(oa + a.grid().n, ob + b.grid().n);
    double worst = 0.0;
    for (Index k = lo; k < hi; ++k) {
        const double wa = (k >= oa && k < oa + a.grid().n) ? a.weights()[k - oa] : 0.0;
        const double wb = (k >= ob && k < ob + b.grid().n) ? b.weights()[k - ob] : 0.0;
        worst = std::max(worst, std::abs(wa - wb));
    }
    return worst;
}

GridMeasure from_masses(const GridSpec& g, const Eigen::VectorXd& m) { return GridMeasure::renormalized(g, m); }

} // namespace

TEST_SUITE("observables") {

TEST_CASE("smeared position and momentum") {
    const GridSpec g = balanced_grid(1.0, 2048);
    const MixedState rho = gaussian_state(0.3, -0.2, 0.8, g);

    const GridMeasure sharp = outcome_distribution(SharpPosition{}, rho);
    const GridMeasure ident = outcome_distribution(SmearedPosition{point_mass(0.0, g.dx)}, rho);
    CHECK(aligned_diff(sharp, ident) <= 1e-15);

    const GridMeasure wide = outcome_distribution(SmearedPosition{gaussian_measure(0.0, 0.6, g.dx)}, rho);
    CHECK(std::sqrt(wide.variance()) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(wide.mean() == doctest::Approx(0.3).epsilon(1e-6));

    const double dp = momentum_grid(g, 1.0).dp;
    const GridMeasure pm = outcome_distribution(SmearedMomentum{uniform_measure(-1.0, 2.0, dp)}, rho);
    CHECK(pm.total() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(pm.mean() - (-0.2 + 0.5)) <= dp);

    const GridMeasure shifted = outcome_distribution(SmearedPosition{point_mass(0.7, g.dx)}, rho);
    CHECK(std::abs(shifted.mean() - 1.0) <= g.dx);
}

TEST_CASE("smearing is affine in the state") {
    const GridSpec g = balanced_grid(1.0, 1024);
    const WaveFunction a = gaussian_state(-2.0, 0.0, 1.0, g);
    const WaveFunction b = box_state(1.0, 2.0, g);
    const MixedState mix({{0.25, a}, {0.75, b}});
    const ObservableKernel k = SmearedPosition{gaussian_measure(0.0, 0.4, g.dx)};
    const GridMeasure left = outcome_distribution(k, mix);
    const GridMeasure ra = outcome_distribution(k, a);
    const GridMeasure rb = outcome_distribution(k, b);
    const Eigen::VectorXd combo = 0.25 * ra.weights() + 0.75 * rb.weights();
    CHECK(aligned_diff(left, GridMeasure::renormalized(ra.grid(), combo)) <= 1e-9);
}

TEST_CASE("marginal measures of generators") {
    const GridSpec g = balanced_grid(1.0, 4096);
    for (double sigma : {0.5, 1.0, 2.0}) {
        const MarginalMeasures m = marginal_measures(gaussian_state(0.0, 0.0, sigma, g));
        CHECK(std::sqrt(m.mu.variance()) == doctest::Approx(sigma).epsilon(1e-4));
        CHECK(std::sqrt(m.nu.variance()) == doctest::Approx(0.5 / sigma).epsilon(1e-4));
        CHECK(m.mu.total() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.nu.total() == doctest::Approx(1.0).epsilon(1e-9));
    }
    const MarginalMeasures d = marginal_measures(gaussian_state(1.0, 0.5, 1.0, g));
    CHECK(std::abs(d.mu.mean() + 1.0) <= g.dx);
    CHECK(std::abs(d.nu.mean() + 0.5) <= momentum_grid(g, 1.0).dp);

    const GridSpec skew{-3.0, g.dx, g.n};
    CHECK_THROWS_AS(marginal_measures(WaveFunction::normalized(skew, Eigen::VectorXcd::Ones(skew.n))),
                    InvalidArgument);
}

TEST_CASE("joint distribution of the vacuum is Husimi-type") {
    const double sigma = 1.0;
    const GridSpec g = balanced_grid(sigma, 512);
    const MixedState vac = gaussian_state(0.0, 0.0, sigma, g);
    const JointDistribution j = joint_distribution(phase_space_observable(vac), vac);
    CHECK(j.total_mass() == doctest::Approx(1.0).epsilon(1e-6));
    double worst = 0.0;
    for (Index i = 0; i < j.q_grid.n; ++i) {
        for (Index l = 0; l < j.p_grid.n; ++l) {
            const double q = j.q_grid.point(i);
            const double p = j.p_grid.point(l);
            const double ref = std::exp(-q * q / (4 * sigma * sigma) - p * p * sigma * sigma) / (2 * std::numbers::pi);
            worst = std::max(worst, std::abs(j.density(i, l) - ref));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("joint marginals equal the smeared marginals") {
    const GridSpec g = balanced_grid(1.0, 512);
    const MixedState gen({{0.6, gaussian_state(0.4, 0.0, 0.8, g)}, {0.4, gaussian_state(-0.5, 0.3, 1.2, g)}});
    const std::vector<MixedState> states{
        gaussian_state(1.0, -0.5, 1.5, g),
        MixedState({{0.5, gaussian_state(-2.0, 0.0, 0.9, g)}, {0.5, gaussian_state(2.0, 1.0, 0.7, g)}}),
    };
    const PhaseSpaceObservable obs = phase_space_observable(gen);
    for (const MixedState& rho : states) {
        const JointDistribution j = joint_distribution(obs, rho);
        CHECK(j.total_mass() == doctest::Approx(1.0).epsilon(1e-6));
        const GridMeasure jq = from_masses(j.q_grid, j.q_marginal_masses());
        const GridMeasure jp = from_masses(j.p_grid, j.p_marginal_masses());
        CHECK(aligned_diff(jq, outcome_distribution(phase_marginal(gen, Axis::Q), rho)) <= 1e-6);
        CHECK(aligned_diff(jp, outcome_distribution(phase_marginal(gen, Axis::P), rho)) <= 1e-6);
    }
    // a box has sinc^2 momentum tails that wrap around the momentum window;
    // its position marginal is still exact
    const MixedState boxed = box_state(-2.0, 1.0, g);
    const JointDistribution jb = joint_distribution(obs, boxed);
    CHECK(aligned_diff(from_masses(jb.q_grid, jb.q_marginal_masses()),
                       outcome_distribution(phase_marginal(gen, Axis::Q), boxed)) <= 1e-6);
}

TEST_CASE("outcome window validation") {
    const GridSpec g = balanced_grid(1.0, 256);
    const MixedState vac = gaussian_state(0.0, 0.0, 1.0, g);
    const double dp = momentum_grid(g, 1.0).dp;
    const PhaseSpaceObservable narrow = phase_space_observable(vac, GridSpec{-4 * g.dx, g.dx, 9}, GridSpec{-4 * dp, dp, 9});
    CHECK_THROWS_AS(joint_distribution(narrow, vac), WindowError);
    CHECK_THROWS_AS(phase_space_observable(vac, GridSpec{0.0, 1.5 * g.dx, 9}, GridSpec{0.0, dp, 9}), InvalidArgument);
    CHECK_THROWS_AS(phase_space_observable(vac, GridSpec{0.3 * g.dx, g.dx, 9}, GridSpec{0.0, dp, 9}), InvalidArgument);
    CHECK_THROWS_AS(phase_space_observable(vac, Index{0}, Index{1}), InvalidArgument);
    const PhaseSpaceObservable coarse = phase_space_observable(vac, Index{2}, Index{2});
    CHECK(coarse.q_grid.dx == doctest::Approx(2 * g.dx));
}

TEST_CASE("covariance of the phase-space observable") {
    const GridSpec g = balanced_grid(1.0, 512);
    const MixedState gen = gaussian_state(0.0, 0.0, 1.0, g);
    const MixedState rho({{0.5, gaussian_state(-1.0, 0.5, 0.7, g)}, {0.5, box_state(1.0, 1.5, g)}});
    const PhaseSpaceObservable obs = phase_space_observable(gen);
    const double dp = momentum_grid(g, 1.0).dp;
    CHECK(covariance_residual(obs, rho, 0.0, 0.0) == 0.0);
    for (int k : {1, 3, -5}) {
        CHECK(covariance_residual(obs, rho, 2 * k * g.dx, 0.0) <= 1e-6);
        CHECK(covariance_residual(obs, rho, 0.0, 4 * k * dp) <= 1e-6);
        CHECK(covariance_residual(obs, rho, k * g.dx, -k * dp) <= 1e-6);
    }
    CHECK_THROWS_AS(covariance_residual(obs, rho, 0.5 * g.dx, 0.0), InvalidArgument);
}

TEST_CASE("warped observables") {
    const GridSpec g = balanced_grid(1.0, 512);
    const MixedState gen = gaussian_state(0.0, 0.0, 1.0, g);
    const MixedState rho = gaussian_state(0.5, 0.0, 1.0, g);

    const WarpMap id = make_warp_map(PiecewiseLinear::identity(), PiecewiseLinear::identity());
    for (Axis a : {Axis::Q, Axis::P}) {
        CHECK(aligned_diff(outcome_distribution(warp(gen, id, a), rho),
                           outcome_distribution(phase_marginal(gen, a), rho)) <= 1e-9);
    }

    const WarpMap shift = make_warp_map(shift_warp(0.3), PiecewiseLinear::identity());
    CHECK(shift.bound_q == doctest::Approx(0.3));
    const GridMeasure moved = outcome_distribution(warp(gen, shift, Axis::Q), rho);
    const GridMeasure base = outcome_distribution(phase_marginal(gen, Axis::Q), rho);
    CHECK(std::abs(moved.mean() - base.mean() - 0.3) <= g.dx);
    const PhaseSpaceObservable obs = phase_space_observable(gen);
    CHECK(covariance_residual(obs, shift, rho, 4 * g.dx, 0.0) <= 1e-6);

    const WarpMap ripple = make_warp_map(sinusoidal_warp(0.5, 8.0, 0.25, -40.0, 40.0), PiecewiseLinear::identity());
    CHECK(covariance_residual(obs, ripple, rho, 6 * g.dx, 0.0) > 1e-3);

    const PiecewiseLinear fold({0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}, PiecewiseLinear::Tail::UnitSlope);
    CHECK_THROWS_AS(make_warp_map(fold, PiecewiseLinear::identity()), InvalidArgument);
    CHECK_THROWS_AS(pushforward(position_distribution(rho), shift_warp(1e3)), WindowError);
}

TEST_CASE("generator smearings obey the width relation") {
    const GridSpec g = balanced_grid(1.0, 4096);
    const std::vector<MixedState> gens{
        gaussian_state(0.0, 0.0, 1.0, g),
        gaussian_state(0.0, 0.0, 0.3, g),
        gaussian_state(1.0, -0.5, 2.0, g),
        MixedState({{0.5, gaussian_state(-2.0, 0.0, 1.0, g)}, {0.5, gaussian_state(2.0, 0.0, 1.0, g)}}),
        box_state(0.0, 1.0, g),
    };
    const double dp = momentum_grid(g, 1.0).dp;
    for (const MixedState& m : gens) {
        const MarginalMeasures mm = marginal_measures(m);
        for (double e : {0.01, 0.05, 0.2}) {
            const double wq = overall_width(mm.mu, e);
            const double wp = overall_width(mm.nu, e);
            const double tol = 2 * g.dx * wp + 2 * dp * wq + 4 * g.dx * dp;
            CHECK(wq * wp >= bound_simple(ConfidencePair{e, e}, 1.0) - tol);
        }
    }
}

} // TEST_SUITE
