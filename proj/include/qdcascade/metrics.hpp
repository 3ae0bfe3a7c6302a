#pragma once

#include <array>

#include <Eigen/Dense>

#include "qdcascade/params.hpp"

namespace qdc {

struct EntanglementReport {
    double concurrence = 0.0;
    std::array<double, 4> eigenvalues{}; // of rho A rho* A, descending
    std::complex<double> gamma_coherence;
    bool peres_entangled = false;
};

// Wootters concurrence of a two-qubit density matrix in the (HH, HV, VH, VV)
// basis. Throws NumericalError when an eigenvalue falls below -1e-6.
EntanglementReport concurrence(const Eigen::Matrix4cd& rho);

// Error rate averaged over the H/V and D/A bases.
double qber(const Eigen::Matrix4cd& rho);

struct StarkReport {
    double delta_HH = 0.0; // meV
    double delta_VV = 0.0; // meV
    double splitting = 0.0; // meV
};

// Cavity-induced ac-Stark shifts for mean photon numbers n_H, n_V.
// Throws ArgumentError on vanishing detunings.
StarkReport stark_shifts(const PhysicalParams& p, double b_avg, double n_H, double n_V);

} // namespace qdc
