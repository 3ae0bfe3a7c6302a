#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qdcascade/hilbert.hpp"
#include "qdcascade/params.hpp"
#include "qdcascade/phonon_kernel.hpp"
#include "qdcascade/superop.hpp"

namespace qdc::model {

// Gaussian H-polarized pump Omega_H(t) = Omega_H0 exp(-(t - t_0)^2 / t_p^2),
// switched off for t >= t_off so the generator is static after the gate.
struct PulseShape {
    double omega_H0 = 0.0; // 1/ps
    double t_p = 1.0;      // ps
    double t_0 = 0.0;      // ps
    double t_off = std::numeric_limits<double>::infinity();

    double operator()(double t) const;
    static PulseShape from_params(const PhysicalParams& p);
};

// How a term's scalar coefficient depends on time:
//   Constant:   c
//   Drive:      c * Omega_H(t)
//   PulseSq:    c * Omega_H(t)^2
//   RabiR/RabiI: c * Omega_H(t)^2 * k_{R,I}(<B> Omega_H(t)) from the Rabi table
enum class CoeffKind { Constant, Drive, PulseSq, RabiR, RabiI };

struct LiouvillianTerm {
    std::string label;
    SuperOp superop;
    CoeffKind kind = CoeffKind::Constant;
    double rate = 0.0;
    bool hamiltonian = false;
    bool phonon = false;
};

struct ModelConfig {
    bool phonons_enabled = true;
    bool include_lamb_shifts = true;
    bool include_cross_coupling = true;
    bool include_tp_terms = true;

    static ModelConfig from_params(const PhysicalParams& p);
    // Throws ConfigError when a phonon term is requested with phonons disabled.
    void validate() const;
};

// Static part (detunings and cavity coupling) and the drive per unit Omega_H.
struct HamiltonianParts {
    QuantumOp static_part;
    QuantumOp drive_per_omega;
};

HamiltonianParts hamiltonian_parts(const PhysicalParams& p, double b_avg, const ElementaryOps& ops);

// Polaron-frame system Hamiltonian in the laser rotating frame (hbar = 1):
// Delta |H><H| + (Delta - delta) |V><V| + <B> X_g(t).
QuantumOp build_hamiltonian(const PhysicalParams& p, double b_avg, double t, const ElementaryOps& ops);

// All terms of the master equation. `kernel` may be null when phonons are disabled.
std::vector<LiouvillianTerm> build_liouvillian_terms(const PhysicalParams& p, const phonon::PhononKernel* kernel,
                                                     const ModelConfig& cfg, const ElementaryOps& ops);

// Sum of constant superoperators with scalar time-dependent coefficients,
// compiled to sparse matrices grouped by coefficient kind.
class MasterEquation {
public:
    MasterEquation(const HilbertLayout& layout, std::vector<LiouvillianTerm> terms, PulseShape pulse,
                   std::optional<phonon::RabiTable> rabi, double b_avg);

    static MasterEquation build(const PhysicalParams& p, const phonon::PhononKernel* kernel, const ModelConfig& cfg);

    int dim() const { return dim_; }
    const HilbertLayout& layout() const { return layout_; }
    const std::vector<LiouvillianTerm>& terms() const { return terms_; }
    const PulseShape& pulse() const { return pulse_; }
    double b_avg() const { return b_avg_; }

    // Coefficient multiplying a term of the given kind at time t.
    double coefficient(const LiouvillianTerm& term, double t) const;

    // d rho / dt on a matrix, by direct sandwich application.
    QuantumOp rhs(const QuantumOp& rho, double t) const;
    // Same on column-major vec(rho) through the compiled sparse matrices.
    void apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) const;

    // Generator with the pulse off; exact for t >= static_after().
    const SparseSuperOp& static_generator() const { return groups_[0]; }
    double static_after() const { return pulse_.t_off; }

private:
    HilbertLayout layout_;
    int dim_;
    std::vector<LiouvillianTerm> terms_;
    PulseShape pulse_;
    std::optional<phonon::RabiTable> rabi_;
    double b_avg_;
    // Indexed by CoeffKind.
    std::vector<SparseSuperOp> groups_;
    std::vector<bool> group_used_;
};

// Per-term coefficient audit at time t.
struct TermCoefficient {
    std::string label;
    double coefficient;
};
std::vector<TermCoefficient> coefficient_table(const MasterEquation& me, double t);

} // namespace qdc::model
