#pragma once

#include <vector>

#include "qdcascade/hilbert.hpp"
#include "qdcascade/integrator.hpp"
#include "qdcascade/liouvillian.hpp"

namespace qdc {

struct DensityState {
    QuantumOp matrix;
    double time = 0.0;

    Complex trace() const { return matrix.trace(); }
    double hermiticity_error() const;
    double min_eigenvalue() const;
};

// Pure state |s><s| at time t.
DensityState pure_state(const HilbertLayout& layout, QdLevel qd, int n_H, int n_V, double t = 0.0);

Complex expectation(const QuantumOp& op, const DensityState& rho);

struct TrajectoryDiagnostics {
    double max_trace_drift = 0.0;  // max |Tr rho - Tr rho0|
    double min_eigenvalue = 0.0;   // over all checkpoints
    double min_eigenvalue_time = 0.0;
    long steps = 0;
    long rejected = 0;
};

// Checkpointed solution of the master equation.
struct Trajectory {
    std::vector<double> times;
    std::vector<DensityState> states;
    TrajectoryDiagnostics diagnostics;

    // Index of the checkpoint at or before t. Throws RangeError outside.
    std::size_t index_at_or_before(double t) const;
};

struct EvolveOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double pulse_checkpoint = 0.25; // ps, spacing before the gate
    double checkpoint = 1.0;        // ps, spacing after the gate
};

// Default checkpoint grid: spacing `pulse_checkpoint` on [t_begin, t_gate],
// `checkpoint` on [t_gate, t_end]; t_gate and t_end always included.
std::vector<double> checkpoint_grid(double t_begin, double t_gate, double t_end, const EvolveOptions& opts);

// Integrates from rho0.time through each requested time (strictly increasing,
// first equal to rho0.time). Checkpoints are re-Hermitized on write; negative
// eigenvalues below -1e-6 are reported through warn().
Trajectory evolve(const model::MasterEquation& me, const DensityState& rho0, const std::vector<double>& times,
                  const EvolveOptions& opts = {});

// Convenience: grid from checkpoint_grid over [rho0.time, t_end] with the gate of `me`.
Trajectory evolve(const model::MasterEquation& me, const DensityState& rho0, double t_end,
                  const EvolveOptions& opts = {});

// Advances one state by dt under the (possibly time-dependent) generator.
DensityState propagate_from(const model::MasterEquation& me, const DensityState& state, double dt,
                            const EvolveOptions& opts = {});

// Same for a general (not necessarily Hermitian) operator, used for regression
// branches a rho a^dag.
QuantumOp propagate_operator(const model::MasterEquation& me, const QuantumOp& x, double t, double dt,
                             const EvolveOptions& opts = {});

} // namespace qdc
