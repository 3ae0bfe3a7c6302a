#include "qdcascade/correlations.hpp"

#include <cmath>
#include <sstream>

#include "qdcascade/errors.hpp"

namespace qdc {

const std::array<const char*, 4> kTwoPhotonBasis = {"HH", "HV", "VH", "VV"};

namespace {

int bit(Pol p) { return static_cast<int>(p); }
Pol pol(int b) { return b ? Pol::V : Pol::H; }
char pol_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

Eigen::VectorXcd vec(const QuantumOp& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double h = 0.5 * (x[i] - x[i - 1]);
        w[i - 1] += h;
        w[i] += h;
    }
    return w;
}

} // namespace

int Channel::index() const { return (bit(mu) << 3) | (bit(nu) << 2) | (bit(zeta) << 1) | bit(xi); }

Channel Channel::from_index(int i) {
    if (i < 0 || i > 15) throw ArgumentError("channel index out of range");
    return {pol((i >> 3) & 1), pol((i >> 2) & 1), pol((i >> 1) & 1), pol(i & 1)};
}

std::string Channel::label() const { return {pol_char(mu), pol_char(nu), pol_char(zeta), pol_char(xi)}; }

std::vector<double> uniform_grid(double begin, double length, double step) {
    if (!(step > 0.0) || length < 0.0) throw ArgumentError("grid needs positive step and non-negative length");
    const double n_real = length / step;
    const auto n = static_cast<long>(std::llround(n_real));
    if (std::abs(n_real - static_cast<double>(n)) > 1e-9 * std::max(1.0, n_real)) {
        std::ostringstream msg;
        msg << "window length " << length << " ps is not a multiple of the grid step " << step << " ps";
        throw ArgumentError(msg.str());
    }
    std::vector<double> g(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) g[static_cast<std::size_t>(i)] = begin + step * static_cast<double>(i);
    return g;
}

DensityState state_at(const model::MasterEquation& me, const Trajectory& traj, double t, const EvolveOptions& opts) {
    const std::size_t i = traj.index_at_or_before(t);
    const double dt = t - traj.times[i];
    if (dt <= 1e-12) return traj.states[i];
    return propagate_from(me, traj.states[i], dt, opts);
}

Complex two_time_correlator(const model::MasterEquation& me, const Trajectory& traj, const Channel& ch, double t,
                            double tprime, const EvolveOptions& opts) {
    if (tprime < 0.0) throw ArgumentError("t' must be >= 0");
    const ElementaryOps ops = build_elementary_ops(me.layout());
    const DensityState rho = state_at(me, traj, t, opts);
    QuantumOp x = ops.a(ch.xi) * rho.matrix * ops.a(ch.mu).adjoint();
    x = propagate_operator(me, x, t, tprime, opts);
    return (ops.a(ch.nu).adjoint() * ops.a(ch.zeta) * x).trace();
}

CorrelatorGrid correlator_grid(const model::MasterEquation& me, const Trajectory& traj, double t_begin, double T_p,
                               double T_p_prime, const CorrelationOptions& opts) {
    if (t_begin < me.static_after()) {
        std::ostringstream msg;
        msg << "detection window starts at " << t_begin << " ps, before the pulse switch-off at "
            << me.static_after() << " ps";
        throw ArgumentError(msg.str());
    }
    CorrelatorGrid grid;
    grid.t_grid = uniform_grid(t_begin, T_p, opts.dt);
    grid.tprime_grid = uniform_grid(0.0, T_p_prime, opts.dtprime);
    const auto n_t = static_cast<Eigen::Index>(grid.t_grid.size());
    const auto n_tp = static_cast<Eigen::Index>(grid.tprime_grid.size());

    const ElementaryOps ops = build_elementary_ops(me.layout());
    const Eigen::Index n = static_cast<Eigen::Index>(me.dim()) * me.dim();

    // Adjoint branch: Tr[A e^{L t'} X] = f_A(t')^T vec(X), f_A(t') = e^{L^T t'} vec(A^T).
    const SparseSuperOp lt = SparseSuperOp(me.static_generator().transpose());
    Eigen::MatrixXcd f0(n, 4);
    for (int nu = 0; nu < 2; ++nu) {
        for (int zeta = 0; zeta < 2; ++zeta) {
            const QuantumOp a = ops.a(pol(nu)).adjoint() * ops.a(pol(zeta));
            f0.col(tp_index(pol(nu), pol(zeta))) = vec(a.transpose());
        }
    }
    std::array<Eigen::MatrixXcd, 4> f; // f[nu zeta] columns over t'
    for (auto& m : f) m.resize(n, n_tp);
    {
        IntegratorOptions io;
        io.rel_tol = opts.evolve.rel_tol;
        io.abs_tol = opts.evolve.abs_tol;
        DormandPrince dp(io);
        Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(f0.data(), f0.size());
        const auto rhs = [&](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) {
            dx.resize(x.size());
            Eigen::Map<const Eigen::MatrixXcd> xm(x.data(), n, 4);
            Eigen::Map<Eigen::MatrixXcd> dm(dx.data(), n, 4);
            dm.noalias() = lt * xm;
        };
        for (Eigen::Index j = 0; j < n_tp; ++j) {
            if (j > 0) dp.integrate(rhs, grid.tprime_grid[j - 1], grid.tprime_grid[j], y);
            Eigen::Map<const Eigen::MatrixXcd> ym(y.data(), n, 4);
            for (int k = 0; k < 4; ++k) f[k].col(j) = ym.col(k);
        }
    }

    // Forward sandwiches a_xi rho(t) a^dag_mu, columns over t.
    std::array<Eigen::MatrixXcd, 4> r; // r[xi mu]
    for (auto& m : r) m.resize(n, n_t);
    for (Eigen::Index i = 0; i < n_t; ++i) {
        const DensityState rho = state_at(me, traj, grid.t_grid[i], opts.evolve);
        for (int xi = 0; xi < 2; ++xi) {
            for (int mu = 0; mu < 2; ++mu) {
                const QuantumOp x = ops.a(pol(xi)) * rho.matrix * ops.a(pol(mu)).adjoint();
                r[tp_index(pol(xi), pol(mu))].col(i) = vec(x);
            }
        }
    }

    for (int c = 0; c < 16; ++c) {
        const Channel ch = Channel::from_index(c);
        grid.values[c].noalias() = r[tp_index(ch.xi, ch.mu)].transpose() * f[tp_index(ch.nu, ch.zeta)];
    }
    return grid;
}

TwoPhotonDM build_tpdm(const CorrelatorGrid& grid) {
    const std::vector<double> wt = trapezoid_weights(grid.t_grid);
    const std::vector<double> wp = trapezoid_weights(grid.tprime_grid);
    const Eigen::VectorXd wt_v = Eigen::Map<const Eigen::VectorXd>(wt.data(), static_cast<Eigen::Index>(wt.size()));
    const Eigen::VectorXd wp_v = Eigen::Map<const Eigen::VectorXd>(wp.data(), static_cast<Eigen::Index>(wp.size()));

    TwoPhotonDM dm;
    for (int c = 0; c < 16; ++c) {
        const Channel ch = Channel::from_index(c);
        const auto& v = grid.values[c];
        if (v.rows() != wt_v.size() || v.cols() != wp_v.size()) {
            throw ArgumentError("correlator values do not match the grids");
        }
        const Complex integral = wt_v.cast<Complex>().dot(v * wp_v.cast<Complex>());
        dm.raw(tp_index(ch.mu, ch.nu), tp_index(ch.xi, ch.zeta)) = integral;
    }
    double norm = 0.0;
    for (int k = 0; k < 4; ++k) {
        dm.raw_diagonals[k] = dm.raw(k, k).real();
        norm += dm.raw_diagonals[k];
    }
    const double scale = dm.raw.cwiseAbs().maxCoeff();
    if (!(norm > 1e-300) || !(scale > 0.0) || norm < 1e-12 * scale) {
        throw NumericalError("two-photon density matrix has vanishing diagonal weight (no emission in the window)");
    }
    dm.norm_constant = norm;
    dm.raw_hermiticity_error = (dm.raw - dm.raw.adjoint()).cwiseAbs().maxCoeff() / scale;
    if (dm.raw_hermiticity_error > 1e-6) {
        std::ostringstream msg;
        msg << "two-photon matrix Hermiticity defect " << dm.raw_hermiticity_error << " before symmetrization";
        warn(msg.str());
    }
    const Eigen::Matrix4cd m = dm.raw / norm;
    dm.matrix = 0.5 * (m + m.adjoint());
    dm.t_begin = grid.t_grid.front();
    dm.T_p = grid.t_grid.back() - grid.t_grid.front();
    dm.T_p_prime = grid.tprime_grid.back() - grid.tprime_grid.front();
    return dm;
}

double ettocf(const DensityState& rho, const ElementaryOps& ops, int n_max, Pol mode) {
    if (n_max < 3) {
        warn("third-order correlation needs n_max >= 3; value is zero by truncation");
    }
    const QuantumOp& a = ops.a(mode);
    const QuantumOp a3 = a * a * a;
    return expectation(a3.adjoint() * a3, rho.matrix).real();
}

EttocfSeries ettocf_series(const Trajectory& traj, const HilbertLayout& layout, double t_from, double t_to, Pol mode) {
    if (layout.n_max() < 3) {
        warn("third-order correlation needs n_max >= 3; value is zero by truncation");
    }
    const ElementaryOps ops = build_elementary_ops(layout);
    const QuantumOp& a = ops.a(mode);
    const QuantumOp a3 = a * a * a;
    const QuantumOp op = a3.adjoint() * a3;
    EttocfSeries s;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t < t_from - 1e-12 || t > t_to + 1e-12) continue;
        const double v = expectation(op, traj.states[i].matrix).real();
        s.times.push_back(t);
        s.values.push_back(v);
        if (s.values.size() == 1 || v > s.peak) {
            s.peak = v;
            s.peak_time = t;
        }
    }
    return s;
}

} // namespace qdc
