#pragma once

// Internal unit system: hbar = 1, angular frequencies in 1/ps, times in ps.
// Energies enter through the config in meV or ueV and are converted exactly once.

namespace qdc::units {

inline constexpr double kHbarMeVps = 0.6582119;     // meV * ps
inline constexpr double kBoltzmannMeVperK = 0.08617333262; // meV / K

constexpr double meV_to_rate(double meV) { return meV / kHbarMeVps; }
constexpr double rate_to_meV(double per_ps) { return per_ps * kHbarMeVps; }
constexpr double ueV_to_rate(double ueV) { return meV_to_rate(ueV * 1e-3); }
constexpr double rate_to_ueV(double per_ps) { return rate_to_meV(per_ps) * 1e3; }

// k_B T / hbar in 1/ps.
constexpr double thermal_rate(double kelvin) { return meV_to_rate(kBoltzmannMeVperK * kelvin); }

} // namespace qdc::units
