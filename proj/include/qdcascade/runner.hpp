#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qdcascade/correlations.hpp"
#include "qdcascade/dynamics.hpp"
#include "qdcascade/liouvillian.hpp"
#include "qdcascade/metrics.hpp"
#include "qdcascade/params.hpp"
#include "qdcascade/phonon_kernel.hpp"

namespace qdc::runner {

struct SimulationOptions {
    model::ModelConfig model;           // toggles; phonons_enabled is taken from the params
    CorrelationOptions correlations;
    bool compute_tpdm = true;
};

struct SimulationResult {
    PhysicalParams params;
    double b_avg = 1.0;
    ValidityReport validity;
    std::optional<phonon::PhononKernel> kernel;
    Trajectory trajectory;
    std::optional<TwoPhotonDM> tpdm;
    std::optional<EntanglementReport> entanglement;
    double qber = 0.0;
    StarkReport stark_peak;          // at the peak mean photon numbers
    EttocfSeries ettocf;             // over [0, t_gate]
    double runtime_s = 0.0;
};

// Full pipeline: kernel, model, evolution over [0, horizon], regression and metrics.
SimulationResult simulate(const PhysicalParams& p, const SimulationOptions& opts = {});

// Same model toggles as the params imply.
SimulationOptions default_options(const PhysicalParams& p);

enum class Artifact { Summary, Tpdm, Rates, Trajectory, Stark, Ettocf };
std::set<Artifact> all_artifacts();
Artifact parse_artifact(const std::string& name);
std::string artifact_name(Artifact a);

// 16 hex digits derived from the serialized config.
std::string config_hash(const PhysicalParams& p);

// Writes out/<hash>/... into `root`; returns the run directory.
std::filesystem::path write_run(const SimulationResult& r, const std::filesystem::path& root,
                                const std::set<Artifact>& outputs);

std::string summary_line(const SimulationResult& r);

// Rate curves against detuning (rates in ueV), cavity and pulse-averaged pump rates.
struct RateCurveRow {
    double delta_meV;
    double temperature_K;
    double gamma_plus, gamma_minus, gamma_tp;                      // cavity, g^2 kernels
    double gamma_plus_omega, gamma_minus_omega, gamma_tp_omega;    // pulse-averaged over 2 t_p
};
std::vector<RateCurveRow> rate_curves(const PhysicalParams& base, const std::vector<double>& temperatures_K,
                                      const std::vector<double>& deltas_meV);
void write_rate_curves(const std::vector<RateCurveRow>& rows, const std::filesystem::path& path);

enum class SweepAxis { G, Temperature, DeltaFss, TpPrime };
SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis a);
// Axis values are given in user units: ueV for g and delta_fss, K, ps.
PhysicalParams apply_axis(PhysicalParams p, SweepAxis axis, double value);

struct SweepSpec {
    SweepAxis axis = SweepAxis::G;
    std::vector<double> values;
    PhysicalParams base;
    SimulationOptions options;
};

struct SweepRow {
    double axis_value = 0.0;
    double concurrence = 0.0;
    double qber = 0.0;
    double b_avg = 0.0;
    double validity = 0.0;
    double runtime_s = 0.0;
    double gamma_abs = 0.0;
    double delta_HH_meV = 0.0;
    double delta_VV_meV = 0.0;
    double ettocf_peak = 0.0;
    std::string error; // empty on success
};

// Worker count from QDC_WORKERS, else hardware concurrency (at least 1).
unsigned default_workers();

// Rows in the order of spec.values regardless of scheduling. A failing point
// yields a row with `error` set; the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers);
void write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

} // namespace qdc::runner
