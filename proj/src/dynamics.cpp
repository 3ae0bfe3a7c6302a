#include "qdcascade/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qdcascade/errors.hpp"

namespace qdc {

namespace {

constexpr double kNegativeEigenWarn = -1e-6;

Eigen::VectorXcd vec(const QuantumOp& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

QuantumOp unvec(const Eigen::VectorXcd& v, int dim) { return Eigen::Map<const QuantumOp>(v.data(), dim, dim); }

DormandPrince make_integrator(const EvolveOptions& opts) {
    IntegratorOptions io;
    io.rel_tol = opts.rel_tol;
    io.abs_tol = opts.abs_tol;
    return DormandPrince(io);
}

// Integrates across the pulse switch-off in two pieces so no step straddles it.
void advance(const model::MasterEquation& me, DormandPrince& dp, double t0, double t1, Eigen::VectorXcd& y) {
    const auto f = [&me](double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) { me.apply(t, x, dx); };
    const double t_off = me.static_after();
    if (t0 < t_off && t_off < t1) {
        dp.integrate(f, t0, t_off, y);
        dp.integrate(f, t_off, t1, y);
    } else {
        dp.integrate(f, t0, t1, y);
    }
}

} // namespace

double DensityState::hermiticity_error() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

double DensityState::min_eigenvalue() const {
    const QuantumOp h = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<QuantumOp> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityState pure_state(const HilbertLayout& layout, QdLevel qd, int n_H, int n_V, double t) {
    const int d = layout.total_dim();
    DensityState s{QuantumOp::Zero(d, d), t};
    const int i = layout.index(qd, n_H, n_V);
    s.matrix(i, i) = 1.0;
    return s;
}

Complex expectation(const QuantumOp& op, const DensityState& rho) { return expectation(op, rho.matrix); }

std::size_t Trajectory::index_at_or_before(double t) const {
    if (times.empty() || t < times.front() - 1e-12 || t > times.back() + 1e-12) {
        std::ostringstream msg;
        msg << "time " << t << " ps outside trajectory";
        if (!times.empty()) msg << " [" << times.front() << ", " << times.back() << "]";
        throw RangeError(msg.str());
    }
    auto it = std::upper_bound(times.begin(), times.end(), t + 1e-12);
    return static_cast<std::size_t>(std::distance(times.begin(), it)) - 1;
}

std::vector<double> checkpoint_grid(double t_begin, double t_gate, double t_end, const EvolveOptions& opts) {
    std::vector<double> grid;
    auto fill = [&](double a, double b, double step) {
        if (b <= a) return;
        const auto n = static_cast<long>(std::ceil((b - a) / step - 1e-9));
        for (long i = 0; i < n; ++i) grid.push_back(a + step * static_cast<double>(i));
    };
    const double gate = std::clamp(t_gate, t_begin, t_end);
    fill(t_begin, gate, opts.pulse_checkpoint);
    fill(gate, t_end, opts.checkpoint);
    grid.push_back(t_end);
    return grid;
}

Trajectory evolve(const model::MasterEquation& me, const DensityState& rho0, const std::vector<double>& times,
                  const EvolveOptions& opts) {
    if (times.empty() || std::abs(times.front() - rho0.time) > 1e-12) {
        throw ArgumentError("checkpoint times must start at the initial state time");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ArgumentError("checkpoint times must be strictly increasing");
    }
    const int d = me.dim();
    if (rho0.matrix.rows() != d) throw ArgumentError("initial state has wrong dimension");

    Trajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    const Complex trace0 = rho0.trace();

    DormandPrince dp = make_integrator(opts);
    Eigen::VectorXcd y = vec(rho0.matrix);
    traj.diagnostics.min_eigenvalue = rho0.min_eigenvalue();
    traj.diagnostics.min_eigenvalue_time = rho0.time;
    traj.states.push_back(rho0);

    for (std::size_t i = 1; i < times.size(); ++i) {
        advance(me, dp, times[i - 1], times[i], y);
        QuantumOp m = unvec(y, d);
        DensityState s{0.5 * (m + m.adjoint()), times[i]};
        traj.diagnostics.max_trace_drift = std::max(traj.diagnostics.max_trace_drift, std::abs(s.trace() - trace0));
        const double e = s.min_eigenvalue();
        if (e < traj.diagnostics.min_eigenvalue) {
            traj.diagnostics.min_eigenvalue = e;
            traj.diagnostics.min_eigenvalue_time = s.time;
        }
        traj.states.push_back(std::move(s));
    }
    traj.diagnostics.steps = dp.stats().accepted;
    traj.diagnostics.rejected = dp.stats().rejected;
    if (traj.diagnostics.min_eigenvalue < kNegativeEigenWarn) {
        std::ostringstream msg;
        msg << "density matrix eigenvalue " << traj.diagnostics.min_eigenvalue << " at t = "
            << traj.diagnostics.min_eigenvalue_time << " ps";
        warn(msg.str());
    }
    return traj;
}

Trajectory evolve(const model::MasterEquation& me, const DensityState& rho0, double t_end,
                  const EvolveOptions& opts) {
    return evolve(me, rho0, checkpoint_grid(rho0.time, me.static_after(), t_end, opts), opts);
}

QuantumOp propagate_operator(const model::MasterEquation& me, const QuantumOp& x, double t, double dt,
                             const EvolveOptions& opts) {
    if (dt < 0.0) throw ArgumentError("propagation interval must be >= 0");
    if (dt == 0.0) return x;
    DormandPrince dp = make_integrator(opts);
    Eigen::VectorXcd y = vec(x);
    advance(me, dp, t, t + dt, y);
    return unvec(y, me.dim());
}

DensityState propagate_from(const model::MasterEquation& me, const DensityState& state, double dt,
                            const EvolveOptions& opts) {
    return {propagate_operator(me, state.matrix, state.time, dt, opts), state.time + dt};
}

} // namespace qdc
