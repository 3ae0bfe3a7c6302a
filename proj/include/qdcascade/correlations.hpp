#pragma once

#include <array>
#include <string>
#include <vector>

#include "qdcascade/dynamics.hpp"
#include "qdcascade/hilbert.hpp"
#include "qdcascade/liouvillian.hpp"

namespace qdc {

// <a^dag_mu(t) a^dag_nu(t+t') a_zeta(t+t') a_xi(t)>
struct Channel {
    Pol mu, nu, zeta, xi;

    // 0..15 with bit order (mu, nu, zeta, xi), H = 0.
    int index() const;
    static Channel from_index(int i);
    std::string label() const;
};

// Two-photon basis index 2*first + second: HH, HV, VH, VV.
inline int tp_index(Pol first, Pol second) { return 2 * static_cast<int>(first) + static_cast<int>(second); }
extern const std::array<const char*, 4> kTwoPhotonBasis;

// State at time t, taken from the trajectory or advanced from the latest
// checkpoint before t.
DensityState state_at(const model::MasterEquation& me, const Trajectory& traj, double t,
                      const EvolveOptions& opts = {});

// Forward regression route: rho~ = a_xi rho(t) a^dag_mu propagated by t',
// then Tr[a^dag_nu a_zeta rho~]. Throws RangeError when t lies outside the trajectory.
Complex two_time_correlator(const model::MasterEquation& me, const Trajectory& traj, const Channel& ch, double t,
                            double tprime, const EvolveOptions& opts = {});

struct CorrelationOptions {
    double dt = 1.0;      // ps, spacing of t
    double dtprime = 1.0; // ps, spacing of t'
    EvolveOptions evolve;
};

struct CorrelatorGrid {
    std::vector<double> t_grid;      // [t_begin, t_begin + T_p]
    std::vector<double> tprime_grid; // [0, T_p']
    // values[channel](i, j) at (t_grid[i], tprime_grid[j])
    std::array<Eigen::MatrixXcd, 16> values;
};

std::vector<double> uniform_grid(double begin, double length, double step);

// All 16 channels on the detection window. Requires t_begin >= me.static_after():
// every t' branch then evolves under the static generator, which is applied
// through the adjoint equation f' = L^T f for the four observables a^dag_nu a_zeta.
CorrelatorGrid correlator_grid(const model::MasterEquation& me, const Trajectory& traj, double t_begin, double T_p,
                               double T_p_prime, const CorrelationOptions& opts = {});

struct TwoPhotonDM {
    Eigen::Matrix4cd matrix;          // normalized, Hermitized
    Eigen::Matrix4cd raw;             // double integrals before normalization
    double norm_constant = 0.0;       // raw diagonal sum
    std::array<double, 4> raw_diagonals{};
    double raw_hermiticity_error = 0.0; // max|M - M^dag| / max|M|
    double t_begin = 0.0, T_p = 0.0, T_p_prime = 0.0;

    // Coherence <HH|rho|VV>.
    Complex gamma() const { return matrix(0, 3); }
};

// rho^TP element (tp_index(mu,nu), tp_index(xi,zeta)) from the trapezoidal
// double integral of the (mu,nu,zeta,xi) channel. Throws NumericalError when
// the diagonal weight vanishes.
TwoPhotonDM build_tpdm(const CorrelatorGrid& grid);

// Tr[a^dag^3 a^3 rho] for one mode. Warns once per call when n_max < 3.
double ettocf(const DensityState& rho, const ElementaryOps& ops, int n_max, Pol mode = Pol::H);

struct EttocfSeries {
    std::vector<double> times;
    std::vector<double> values;
    double peak = 0.0;
    double peak_time = 0.0;
};
// ETTOCF over trajectory checkpoints with t in [t_from, t_to].
EttocfSeries ettocf_series(const Trajectory& traj, const HilbertLayout& layout, double t_from, double t_to,
                           Pol mode = Pol::H);

} // namespace qdc
