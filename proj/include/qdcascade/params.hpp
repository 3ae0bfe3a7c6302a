#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qdc {

// Physical and numerical parameters of one run, in internal units
// (angular frequencies in 1/ps, times in ps, temperature in K).
struct PhysicalParams {
    double alpha_p = 0.06;         // ps^2
    double omega_b = 0.0;          // 1/ps
    double temperature = 4.0;      // K
    double delta_fss = 0.0;        // 1/ps
    double detuning = 0.0;         // 1/ps, H exciton relative to the laser
    double g = 0.0;                // 1/ps
    double kappa = 0.0;            // 1/ps
    double gamma_B = 0.0;          // 1/ps
    double gamma_E = 0.0;          // 1/ps
    double gamma_B_deph = 0.0;     // 1/ps
    double gamma_E_deph = 0.0;     // 1/ps
    double omega_H0 = 0.0;         // 1/ps, peak bare Rabi frequency
    double t_p = 6.0;              // ps
    double t_0 = 24.0;             // ps
    int n_max = 2;
    double T_p = 200.0;            // ps, biexciton-photon window
    double T_p_prime = 200.0;      // ps, exciton-photon window
    double t_gate = 39.0;          // ps
    bool phonons_enabled = true;

    // Ac-Stark detunings of the H and V excitons.
    double delta_H() const { return detuning; }
    double delta_V() const { return detuning - delta_fss; }

    // Simulation horizon [0, t_gate + T_p + T_p'].
    double horizon() const { return t_gate + T_p + T_p_prime; }

    bool operator==(const PhysicalParams&) const = default;
};

// Paper-regime defaults for a GaAs/InAs dot (T = 4 K, g = 70 ueV).
PhysicalParams default_params();

// Throws ValidationError naming the first offending field.
void validate(const PhysicalParams& p);

// Config keys in schema order.
const std::vector<std::string>& config_keys();

// Raw key/value view of a config file, before unit conversion and defaults.
using ConfigMap = std::map<std::string, std::string>;

// Parses `key = value` lines; `#` starts a comment. Throws ConfigError with a
// line number on syntax errors or unknown/duplicate keys.
ConfigMap parse_config_text(std::string_view text);

// Converts a raw map to validated params. Omitted keys take defaults; t0, Tp and
// t_gate default relative to t_p / Tp' when absent.
PhysicalParams params_from_map(const ConfigMap& map);

PhysicalParams load_config(const std::filesystem::path& path);
PhysicalParams parse_config(std::string_view text);

// Writes every key in config units with round-trip precision.
std::string serialize_config(const PhysicalParams& p);

struct ValidityReport {
    double value = 0.0;
    bool pass = true;
    double threshold = 0.1;
};

inline constexpr double kPolaronValidityThreshold = 0.1;

// (Omega_H0 / omega_b)^2 (1 - <B>^4), which must be small for the polaron
// master equation to apply.
ValidityReport check_polaron_validity(const PhysicalParams& p, double b_avg);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

} // namespace qdc
