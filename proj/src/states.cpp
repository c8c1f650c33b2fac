#include "uncert/states.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace uncert {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

bool same_grid(const GridSpec& a, const GridSpec& b) {
    return a.n == b.n && same_step(a, b) && std::abs(a.x_min - b.x_min) <= 1e-9 * a.dx;
}

// Ones on the grid points of [center - width/2, center + width/2], zero elsewhere.
Eigen::VectorXcd indicator(const GridSpec& g, double center, double width, const char* what) {
    const double lo = (center - 0.5 * width - g.x_min) / g.dx - 1e-9;
    const double hi = (center + 0.5 * width - g.x_min) / g.dx + 1e-9;
    auto first = static_cast<Index>(std::ceil(lo));
    auto last = static_cast<Index>(std::floor(hi));
    if (last < first) {
        // narrower than a cell: keep the nearest point
        first = last = static_cast<Index>(std::llround((center - g.x_min) / g.dx));
    }
    if (first < 0 || last >= g.n) {
        throw WindowError(std::string(what) + ": support [" + std::to_string(center - 0.5 * width) + ", " +
                          std::to_string(center + 0.5 * width) + "] leaves the grid window [" +
                          std::to_string(g.x_min) + ", " + std::to_string(g.x_max()) + "]");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(g.n);
    amps.segment(first, last - first + 1).setConstant(cd(1.0, 0.0));
    return amps;
}

} // namespace

MomentumGrid momentum_grid(const GridSpec& position, double hbar) {
    if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
    const double dp = 2.0 * kPi * hbar / (static_cast<double>(position.n) * position.dx);
    return MomentumGrid{-static_cast<double>(position.n / 2) * dp, dp, position.n};
}

GridSpec balanced_grid(double sigma, Index n, double hbar) {
    if (!(sigma > 0.0)) throw InvalidArgument("balanced_grid: sigma must be positive");
    if (!(hbar > 0.0)) throw InvalidArgument("balanced_grid: hbar must be positive");
    const double dx = sigma * std::sqrt(4.0 * kPi / static_cast<double>(n));
    return centered_grid(dx * static_cast<double>(n), n);
}

WaveFunction::WaveFunction(GridSpec grid, Eigen::VectorXcd amps, double hbar)
    : grid_(grid), amps_(std::move(amps)), hbar_(hbar) {
    if (!(hbar_ > 0.0)) throw InvalidArgument("hbar must be positive");
    if (amps_.size() != grid_.n) throw InvalidArgument("amplitude vector length does not match grid");
    const double nrm = norm_squared();
    if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > 1e-9) {
        throw InvalidArgument("wave function is not normalized (norm^2 = " + std::to_string(nrm) + ")");
    }
}

WaveFunction WaveFunction::normalized(GridSpec grid, Eigen::VectorXcd amps, double hbar) {
    const double nrm = amps.squaredNorm() * grid.dx;
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InvalidArgument("cannot normalize a zero wave function");
    amps /= std::sqrt(nrm);
    return WaveFunction(grid, std::move(amps), hbar);
}

double WaveFunction::norm_squared() const { return amps_.squaredNorm() * grid_.dx; }

Eigen::VectorXcd WaveFunction::momentum_amps() const {
    const Index n = grid_.n;
    const MomentumGrid mg = momentum_grid(grid_, hbar_);
    const double h = static_cast<double>(n / 2);
    Eigen::VectorXcd a(n);
    for (Index j = 0; j < n; ++j) {
        a[j] = amps_[j] * std::polar(1.0, 2.0 * kPi * h * static_cast<double>(j) / static_cast<double>(n));
    }
    Eigen::VectorXcd phi = detail::dft_forward(a);
    const double scale = grid_.dx / std::sqrt(2.0 * kPi * hbar_);
    for (Index k = 0; k < n; ++k) {
        const double pk = mg.p_min + static_cast<double>(k) * mg.dp;
        phi[k] *= scale * std::polar(1.0, -pk * grid_.x_min / hbar_);
    }
    return phi;
}

WaveFunction WaveFunction::from_momentum(GridSpec grid, const Eigen::VectorXcd& phi, double hbar) {
    const Index n = grid.n;
    if (phi.size() != n) throw InvalidArgument("momentum amplitude vector length does not match grid");
    const MomentumGrid mg = momentum_grid(grid, hbar);
    const double h = static_cast<double>(n / 2);
    Eigen::VectorXcd b(n);
    for (Index k = 0; k < n; ++k) {
        const double pk = mg.p_min + static_cast<double>(k) * mg.dp;
        b[k] = phi[k] * std::polar(1.0, pk * grid.x_min / hbar);
    }
    Eigen::VectorXcd psi = detail::dft_backward(b);
    const double scale = mg.dp / std::sqrt(2.0 * kPi * hbar);
    for (Index j = 0; j < n; ++j) {
        psi[j] *= scale * std::polar(1.0, -2.0 * kPi * h * static_cast<double>(j) / static_cast<double>(n));
    }
    return normalized(grid, std::move(psi), hbar);
}

MixedState::MixedState(const WaveFunction& psi) : components_{Component{1.0, psi}} {}

MixedState::MixedState(std::vector<Component> components) : components_(std::move(components)) {
    if (components_.empty()) throw InvalidArgument("mixed state needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight >= 0.0)) throw InvalidArgument("mixture weights must be nonnegative");
        if (!same_grid(c.psi.grid(), grid())) throw GridMismatch("mixture components must share the grid");
        if (c.psi.hbar() != hbar()) throw InvalidArgument("mixture components must share hbar");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("mixture weights must sum to 1 (got " + std::to_string(total) + ")");
    }
}

WaveFunction gaussian_state(double x0, double p0, double sigma, const GridSpec& grid, double hbar) {
    if (!(sigma > 0.0)) throw InvalidArgument("gaussian_state: sigma must be positive");
    if (x0 - 8.0 * sigma < grid.x_min || x0 + 8.0 * sigma > grid.x_max()) {
        throw WindowError("gaussian_state: x0 +- 8 sigma = [" + std::to_string(x0 - 8.0 * sigma) + ", " +
                          std::to_string(x0 + 8.0 * sigma) + "] exceeds the position window [" +
                          std::to_string(grid.x_min) + ", " + std::to_string(grid.x_max()) + "]");
    }
    const MomentumGrid mg = momentum_grid(grid, hbar);
    const double sigma_p = hbar / (2.0 * sigma);
    const double p_max = mg.p_min + static_cast<double>(mg.n - 1) * mg.dp;
    if (p0 - 8.0 * sigma_p < mg.p_min || p0 + 8.0 * sigma_p > p_max) {
        throw WindowError("gaussian_state: p0 +- 8 sigma_p exceeds the momentum window [" + std::to_string(mg.p_min) +
                          ", " + std::to_string(p_max) + "]; refine dx");
    }
    Eigen::VectorXcd amps(grid.n);
    for (Index j = 0; j < grid.n; ++j) {
        const double x = grid.point(j);
        const double z = (x - x0) / sigma;
        amps[j] = std::polar(std::exp(-0.25 * z * z), p0 * x / hbar);
    }
    return WaveFunction::normalized(grid, std::move(amps), hbar);
}

WaveFunction box_state(double center, double width, const GridSpec& grid, double hbar) {
    if (!(width >= 2.0 * grid.dx * (1.0 - 1e-12))) {
        throw InvalidArgument("box_state: width must be at least 2 dx");
    }
    return WaveFunction::normalized(grid, indicator(grid, center, width, "box_state"), hbar);
}

WaveFunction momentum_box_state(double center, double width, const GridSpec& grid, double hbar) {
    if (width < 0.0) throw InvalidArgument("momentum_box_state: width must be nonnegative");
    const GridSpec pg = momentum_grid(grid, hbar).as_grid();
    return WaveFunction::from_momentum(grid, indicator(pg, center, width, "momentum_box_state"), hbar);
}

WaveFunction grid_point_state(double x, const GridSpec& grid, double hbar) {
    return WaveFunction::normalized(grid, indicator(grid, x, 0.0, "grid_point_state"), hbar);
}

WaveFunction axis_box_state(Axis axis, double center, double width, const StateSpace& space) {
    if (axis == Axis::P) return momentum_box_state(center, width, space.grid, space.hbar);
    return WaveFunction::normalized(space.grid, indicator(space.grid, center, width, "probe"), space.hbar);
}

GridMeasure position_distribution(const MixedState& rho) {
    const GridSpec& g = rho.grid();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(g.n);
    for (const auto& c : rho.components()) w += c.weight * c.psi.amps().cwiseAbs2() * g.dx;
    return GridMeasure::renormalized(g, std::move(w));
}

GridMeasure momentum_distribution(const MixedState& rho) {
    const MomentumGrid mg = momentum_grid(rho.grid(), rho.hbar());
    Eigen::VectorXd w = Eigen::VectorXd::Zero(mg.n);
    for (const auto& c : rho.components()) w += c.weight * c.psi.momentum_amps().cwiseAbs2() * mg.dp;
    return GridMeasure::renormalized(mg.as_grid(), std::move(w));
}

GridMeasure axis_distribution(const MixedState& rho, Axis axis) {
    return axis == Axis::Q ? position_distribution(rho) : momentum_distribution(rho);
}

WaveFunction weyl_displace(const WaveFunction& psi, double q, double p) {
    const GridSpec& g = psi.grid();
    const Index k = lattice_index(q, g.dx, "weyl_displace: position shift q");
    const double hbar = psi.hbar();
    const Eigen::VectorXcd& in = psi.amps();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.n);
    double dropped = 0.0;
    const cd global = std::polar(1.0, -q * p / (2.0 * hbar));
    for (Index i = 0; i < g.n; ++i) {
        const Index j = i + k;
        if (j < 0 || j >= g.n) {
            dropped += std::norm(in[i]) * g.dx;
            continue;
        }
        out[j] = global * std::polar(1.0, p * g.point(j) / hbar) * in[i];
    }
    if (dropped > 1e-9) {
        throw WindowError("weyl_displace: shift by q = " + std::to_string(q) + " moves norm " +
                          std::to_string(dropped) + " off the grid");
    }
    if (dropped > 0.0) return WaveFunction::normalized(g, std::move(out), hbar);
    return WaveFunction(g, std::move(out), hbar);
}

MixedState weyl_displace(const MixedState& rho, double q, double p) {
    std::vector<MixedState::Component> out;
    out.reserve(rho.components().size());
    for (const auto& c : rho.components()) out.push_back({c.weight, weyl_displace(c.psi, q, p)});
    return MixedState(std::move(out));
}

WaveFunction parity(const WaveFunction& psi) {
    const GridSpec& g = psi.grid();
    const double mm = -2.0 * g.x_min / g.dx;
    const double m_round = std::round(mm);
    if (std::abs(mm - m_round) > 1e-6 || std::abs(m_round - static_cast<double>(g.n - 1)) > 1.0 + 1e-9) {
        throw InvalidArgument("parity: grid [" + std::to_string(g.x_min) + ", " + std::to_string(g.x_max()) +
                              "] is not symmetric about 0 within one step");
    }
    const auto m = static_cast<Index>(m_round);
    const Eigen::VectorXcd& in = psi.amps();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.n);
    double kept = 0.0;
    for (Index j = 0; j < g.n; ++j) {
        const Index src = m - j;
        if (src < 0 || src >= g.n) continue;
        out[j] = in[src];
        kept += std::norm(in[src]) * g.dx;
    }
    if (1.0 - kept > 1e-9) throw WindowError("parity: state has norm on the unpaired edge point");
    if (kept != 1.0) return WaveFunction::normalized(g, std::move(out), psi.hbar());
    return WaveFunction(g, std::move(out), psi.hbar());
}

MixedState parity(const MixedState& rho) {
    std::vector<MixedState::Component> out;
    out.reserve(rho.components().size());
    for (const auto& c : rho.components()) out.push_back({c.weight, parity(c.psi)});
    return MixedState(std::move(out));
}

} // namespace uncert
