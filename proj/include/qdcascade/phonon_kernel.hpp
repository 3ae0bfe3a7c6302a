#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qdcascade/params.hpp"

namespace qdc::phonon {

// Super-Ohmic LA-phonon spectral density J(w) = alpha_p w^3 exp(-w^2 / 2 w_b^2).
struct SpectralDensity {
    double alpha_p = 0.0; // ps^2
    double omega_b = 1.0; // 1/ps

    // Location of the single maximum, sqrt(3) w_b.
    double peak() const;
};

// Throws ArgumentError for omega < 0.
double spectral_density(const SpectralDensity& sd, double omega);

// Upper limit of every frequency integral, in units of omega_b.
inline constexpr double kOmegaCutoffFactor = 10.0;
inline constexpr double kPhiRelTol = 1e-8;

// phi(tau) = int_0^wc dw J(w)/w^2 [coth(w / 2 k_B T) cos(w tau) - i sin(w tau)],
// by adaptive Gauss-Kronrod quadrature. Throws NumericalError on non-convergence.
std::complex<double> compute_phi(const SpectralDensity& sd, double temperature, double tau);

struct TauGrid {
    double tau_max = 20.0; // ps
    double step = 0.005;   // ps
};

// phi tabulated on a uniform tau grid starting at 0.
class PhononCorrelation {
public:
    static PhononCorrelation tabulate(const SpectralDensity& sd, double temperature, TauGrid grid = {});

    std::span<const double> tau_grid() const { return tau_; }
    std::span<const std::complex<double>> phi_values() const { return phi_; }
    double step() const { return step_; }
    double temperature() const { return temperature_; }
    const SpectralDensity& spectral_density() const { return sd_; }
    // exp(-phi(0)/2)
    double b_avg() const { return b_avg_; }

private:
    SpectralDensity sd_;
    double temperature_ = 0.0;
    double step_ = 0.0;
    double b_avg_ = 1.0;
    std::vector<double> tau_;
    std::vector<std::complex<double>> phi_;
};

// Franck-Condon renormalization <B> = exp(-phi(0)/2), in (0, 1].
double franck_condon(const PhononCorrelation& pc);

// Sign in front of phi in the exponential: e^{+phi} for one-photon processes,
// e^{-phi} for two-photon ones.
enum class Branch { Plus, Minus };
enum class Part { Re, Im };

// Selected part of int_0^tau_max d tau (e^{+-phi(tau)} - 1) e^{i delta_eff tau}
// by composite Simpson quadrature on the tau grid. Prefactors (g^2 <B>^2,
// (Omega/2)^2 <B>^2) are applied by the caller. Warns when the tail estimate
// |integrand(tau_max)| tau_max exceeds 1e-6 of the result.
double halfline_rate(const PhononCorrelation& pc, double delta_eff, Branch branch, Part part);

// Rabi-frequency dependent dephasing-like rates.
struct RabiRates {
    double gamma_R = 0.0; // 1/ps
    double gamma_I = 0.0; // 1/ps
};

// Kernels stripped of the Omega_H(t)^2 prefactor (units: ps):
//   gamma_I = Omega_H^2 * k_I,   gamma_R = 2 (Omega_H/2)^2 * k_R.
struct RabiKernels {
    double k_R = 0.0;
    double k_I = 0.0;
};

// Direct quadrature of the kernels at renormalized Rabi frequency omega_prime.
RabiKernels rabi_kernels_direct(const PhononCorrelation& pc, double omega_prime);

// Kernels on a uniform omega' grid with linear interpolation.
class RabiTable {
public:
    static constexpr int kDefaultNodes = 64;

    RabiTable() = default;
    RabiTable(const PhononCorrelation& pc, double omega_prime_max, int nodes = kDefaultNodes);

    // Throws RangeError above the tabulated range.
    RabiKernels kernels(double omega_prime) const;
    double omega_prime_max() const { return max_; }
    int nodes() const { return static_cast<int>(k_R_.size()); }

private:
    double max_ = 0.0;
    double step_ = 0.0;
    std::vector<double> k_R_;
    std::vector<double> k_I_;
};

// Full rates at omega_prime = <B> Omega_H(t), with Omega_H(t) = omega_prime / <B>.
RabiRates rabi_dependent_rates(const RabiTable& table, double b_avg, double omega_prime);
RabiRates rabi_dependent_rates_direct(const PhononCorrelation& pc, double omega_prime);

// Every constant rate and every pulse kernel of the polaron master equation.
// Rates in 1/ps; fields named `k_*` are kernels in ps that multiply
// (Omega_H(t)/2)^2. All kernels already include <B>^2.
struct RateSet {
    double gamma_plus_H = 0.0, gamma_minus_H = 0.0;
    double gamma_plus_V = 0.0, gamma_minus_V = 0.0;
    double k_plus_omega = 0.0, k_minus_omega = 0.0;
    double k_tp_omega = 0.0;
    double gamma_tp_H = 0.0, gamma_tp_V = 0.0;
    double delta_plus_H = 0.0, delta_minus_H = 0.0;
    double delta_plus_V = 0.0, delta_minus_V = 0.0;
    double k_delta_p_omega = 0.0;
    double k_delta_plus_omega = 0.0, k_delta_minus_omega = 0.0;
    double delta_minus_pH = 0.0, delta_minus_pV = 0.0;

    double gamma_plus_omega(double omega_H) const { return 0.25 * omega_H * omega_H * k_plus_omega; }
    double gamma_minus_omega(double omega_H) const { return 0.25 * omega_H * omega_H * k_minus_omega; }
    double gamma_tp_omega(double omega_H) const { return 0.25 * omega_H * omega_H * k_tp_omega; }
};

// Rates for detuning `detuning` (H exciton), `detuning - delta_fss` (V exciton)
// and cavity coupling g.
RateSet compute_rates(const PhononCorrelation& pc, double detuning, double delta_fss, double g);

// Everything the master equation needs from the phonon bath at one temperature.
struct PhononKernel {
    PhononCorrelation correlation;
    double b_avg = 1.0;
    RateSet rates;
    RabiTable rabi;
};

// Table range is [0, 1.2 <B> Omega_H0].
PhononKernel build_kernel(const PhysicalParams& p, TauGrid grid = {});

} // namespace qdc::phonon
