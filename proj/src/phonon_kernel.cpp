#include "qdcascade/phonon_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdcascade/errors.hpp"
#include "qdcascade/units.hpp"

namespace qdc::phonon {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// x coth(x), regular at the origin.
double x_coth_x(double x) {
    if (std::abs(x) < 1e-4) return 1.0 + x * x / 3.0;
    return x / std::tanh(x);
}

// Composite Simpson on a uniform grid with an even number of intervals; a
// trailing odd interval is closed with the trapezoid rule.
template <class F>
double simpson(std::size_t n_points, double h, F&& f) {
    if (n_points < 2) return 0.0;
    const std::size_t intervals = n_points - 1;
    const std::size_t even = intervals - intervals % 2;
    double sum = 0.0;
    for (std::size_t i = 0; i + 2 <= even; i += 2) {
        sum += f(i) + 4.0 * f(i + 1) + f(i + 2);
    }
    sum *= h / 3.0;
    if (even != intervals) sum += 0.5 * h * (f(intervals - 1) + f(intervals));
    return sum;
}

} // namespace

double SpectralDensity::peak() const { return std::sqrt(3.0) * omega_b; }

double spectral_density(const SpectralDensity& sd, double omega) {
    if (omega < 0.0) throw ArgumentError("spectral density evaluated at negative frequency");
    return sd.alpha_p * omega * omega * omega * std::exp(-omega * omega / (2.0 * sd.omega_b * sd.omega_b));
}

std::complex<double> compute_phi(const SpectralDensity& sd, double temperature, double tau) {
    if (!(temperature > 0.0)) throw ArgumentError("phonon correlation requires temperature > 0");
    if (sd.alpha_p == 0.0) return {0.0, 0.0};

    const double kT = units::thermal_rate(temperature);
    const double wb2 = 2.0 * sd.omega_b * sd.omega_b;
    const double w_cut = kOmegaCutoffFactor * sd.omega_b;

    // J(w)/w^2 coth(w/2kT) = alpha_p * 2kT * x coth(x) * gauss, x = w / 2kT.
    auto re = [&](double w) {
        const double gauss = std::exp(-w * w / wb2);
        return sd.alpha_p * 2.0 * kT * x_coth_x(w / (2.0 * kT)) * gauss * std::cos(w * tau);
    };
    auto im = [&](double w) { return -sd.alpha_p * w * std::exp(-w * w / wb2) * std::sin(w * tau); };

    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    constexpr unsigned max_depth = 25;
    double err_re = 0.0, l1_re = 0.0, err_im = 0.0, l1_im = 0.0;
    const double v_re = GK::integrate(re, 0.0, w_cut, max_depth, kPhiRelTol, &err_re, &l1_re);
    const double v_im = GK::integrate(im, 0.0, w_cut, max_depth, kPhiRelTol, &err_im, &l1_im);

    // Relative to the L1 norm so oscillatory integrals with vanishing value converge.
    const auto check = [&](double err, double l1, const char* which) {
        if (err > 10.0 * kPhiRelTol * l1 + 1e-300) {
            std::ostringstream msg;
            msg << "phi(" << tau << ") " << which << " part did not converge: error " << err
                << " vs tolerance " << kPhiRelTol * l1;
            throw NumericalError(msg.str());
        }
    };
    check(err_re, l1_re, "real");
    check(err_im, l1_im, "imaginary");
    return {v_re, v_im};
}

PhononCorrelation PhononCorrelation::tabulate(const SpectralDensity& sd, double temperature, TauGrid grid) {
    if (!(grid.step > 0.0) || !(grid.tau_max > grid.step)) throw ArgumentError("invalid tau grid");
    PhononCorrelation pc;
    pc.sd_ = sd;
    pc.temperature_ = temperature;
    const auto n = static_cast<std::size_t>(std::llround(grid.tau_max / grid.step)) + 1;
    pc.step_ = grid.tau_max / static_cast<double>(n - 1);
    pc.tau_.resize(n);
    pc.phi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pc.tau_[i] = pc.step_ * static_cast<double>(i);
        pc.phi_[i] = compute_phi(sd, temperature, pc.tau_[i]);
    }
    pc.phi_[0].imag(0.0);
    pc.b_avg_ = std::exp(-0.5 * pc.phi_[0].real());
    return pc;
}

double franck_condon(const PhononCorrelation& pc) { return std::exp(-0.5 * pc.phi_values()[0].real()); }

double halfline_rate(const PhononCorrelation& pc, double delta_eff, Branch branch, Part part) {
    const auto phi = pc.phi_values();
    const auto tau = pc.tau_grid();
    const double sign = branch == Branch::Plus ? 1.0 : -1.0;
    auto integrand = [&](std::size_t i) {
        const std::complex<double> c = std::exp(sign * phi[i]) - 1.0;
        const std::complex<double> v = c * std::polar(1.0, delta_eff * tau[i]);
        return part == Part::Re ? v.real() : v.imag();
    };
    const double value = simpson(phi.size(), pc.step(), integrand);

    const double tail = std::abs(integrand(phi.size() - 1)) * tau.back();
    if (tail > 1e-6 * std::abs(value)) {
        std::ostringstream msg;
        msg << "phonon rate integral truncated at tau_max = " << tau.back() << " ps: tail estimate " << tail
            << " vs result " << value;
        warn(msg.str());
    }
    return value;
}

RabiKernels rabi_kernels_direct(const PhononCorrelation& pc, double omega_prime) {
    if (omega_prime < 0.0) throw ArgumentError("renormalized Rabi frequency must be >= 0");
    const auto phi = pc.phi_values();
    const auto tau = pc.tau_grid();
    const double b2 = pc.b_avg() * pc.b_avg();
    const double w = omega_prime / kSqrt2;
    RabiKernels k;
    k.k_I = b2 * simpson(phi.size(), pc.step(),
                         [&](std::size_t i) { return std::sinh(phi[i]).real() * std::sin(w * tau[i]); });
    k.k_R = b2 * simpson(phi.size(), pc.step(), [&](std::size_t i) {
        return std::sinh(phi[i]).real() * (std::cos(w * tau[i]) - 1.0);
    });
    return k;
}

RabiTable::RabiTable(const PhononCorrelation& pc, double omega_prime_max, int nodes) {
    if (nodes < 2) throw ArgumentError("Rabi table needs at least two nodes");
    if (omega_prime_max < 0.0) throw ArgumentError("Rabi table range must be >= 0");
    max_ = omega_prime_max;
    step_ = omega_prime_max / (nodes - 1);
    k_R_.resize(nodes);
    k_I_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const RabiKernels k = rabi_kernels_direct(pc, step_ * i);
        k_R_[i] = k.k_R;
        k_I_[i] = k.k_I;
    }
}

RabiKernels RabiTable::kernels(double omega_prime) const {
    if (omega_prime < 0.0) throw ArgumentError("renormalized Rabi frequency must be >= 0");
    if (k_R_.empty()) return {};
    if (omega_prime > max_ * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "Rabi frequency " << omega_prime << " 1/ps outside tabulated range [0, " << max_ << "]";
        throw RangeError(msg.str());
    }
    if (step_ == 0.0) return {k_R_[0], k_I_[0]};
    const double x = std::min(omega_prime / step_, static_cast<double>(k_R_.size() - 1));
    const auto i = std::min(static_cast<std::size_t>(x), k_R_.size() - 2);
    const double f = x - static_cast<double>(i);
    return {k_R_[i] + f * (k_R_[i + 1] - k_R_[i]), k_I_[i] + f * (k_I_[i + 1] - k_I_[i])};
}

namespace {

RabiRates to_rates(const RabiKernels& k, double b_avg, double omega_prime) {
    const double omega_H = omega_prime / b_avg;
    const double w2 = omega_H * omega_H;
    return {0.5 * w2 * k.k_R, w2 * k.k_I};
}

} // namespace

RabiRates rabi_dependent_rates(const RabiTable& table, double b_avg, double omega_prime) {
    return to_rates(table.kernels(omega_prime), b_avg, omega_prime);
}

RabiRates rabi_dependent_rates_direct(const PhononCorrelation& pc, double omega_prime) {
    return to_rates(rabi_kernels_direct(pc, omega_prime), pc.b_avg(), omega_prime);
}

RateSet compute_rates(const PhononCorrelation& pc, double detuning, double delta_fss, double g) {
    const double b2 = pc.b_avg() * pc.b_avg();
    const double g2 = g * g;
    const double dH = detuning;
    const double dV = detuning - delta_fss;
    auto K = [&](double d, Branch br, Part part) { return b2 * halfline_rate(pc, d, br, part); };

    RateSet r;
    r.k_plus_omega = K(dH, Branch::Plus, Part::Re);
    r.k_minus_omega = K(-dH, Branch::Plus, Part::Re);
    r.gamma_plus_H = g2 * r.k_plus_omega;
    r.gamma_minus_H = g2 * r.k_minus_omega;
    r.gamma_plus_V = g2 * K(dV, Branch::Plus, Part::Re);
    r.gamma_minus_V = g2 * K(-dV, Branch::Plus, Part::Re);

    r.k_tp_omega = K(-dH, Branch::Minus, Part::Re);
    r.gamma_tp_H = g2 * r.k_tp_omega;
    r.gamma_tp_V = g2 * K(-dV, Branch::Minus, Part::Re);

    r.k_delta_plus_omega = K(dH, Branch::Plus, Part::Im);
    r.k_delta_minus_omega = K(-dH, Branch::Plus, Part::Im);
    r.delta_plus_H = g2 * r.k_delta_plus_omega;
    r.delta_minus_H = g2 * r.k_delta_minus_omega;
    r.delta_plus_V = g2 * K(dV, Branch::Plus, Part::Im);
    r.delta_minus_V = g2 * K(-dV, Branch::Plus, Part::Im);

    r.k_delta_p_omega = K(-dH, Branch::Minus, Part::Im);
    r.delta_minus_pH = g2 * r.k_delta_p_omega;
    r.delta_minus_pV = g2 * K(-dV, Branch::Minus, Part::Im);
    return r;
}

PhononKernel build_kernel(const PhysicalParams& p, TauGrid grid) {
    const SpectralDensity sd{p.alpha_p, p.omega_b};
    PhononKernel k{PhononCorrelation::tabulate(sd, p.temperature, grid), 1.0, {}, {}};
    k.b_avg = k.correlation.b_avg();
    k.rates = compute_rates(k.correlation, p.detuning, p.delta_fss, p.g);
    k.rabi = RabiTable(k.correlation, 1.2 * k.b_avg * p.omega_H0);
    return k;
}

} // namespace qdc::phonon
