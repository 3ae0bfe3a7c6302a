#include "qdcascade/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qdcascade/errors.hpp"
#include "qdcascade/units.hpp"

namespace qdc::runner {

namespace fs = std::filesystem;
using units::rate_to_ueV;

namespace {

std::string fmt(double x) { return format_double(x); }

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::string summary_csv(const SimulationResult& r) {
    std::ostringstream s;
    const auto& p = r.params;
    s << "concurrence,qber,b_avg,validity,validity_pass,gamma_re,gamma_im,norm_constant,trace_drift,min_eigenvalue,"
         "delta_HH_meV,delta_VV_meV,stark_splitting_meV,ettocf_peak,temperature_K,g_ueV,n_max\n";
    const double c = r.entanglement ? r.entanglement->concurrence : std::nan("");
    const Complex gamma = r.tpdm ? r.tpdm->gamma() : Complex(std::nan(""), std::nan(""));
    s << fmt(c) << ',' << fmt(r.tpdm ? r.qber : std::nan("")) << ',' << fmt(r.b_avg) << ',' << fmt(r.validity.value)
      << ',' << (r.validity.pass ? 1 : 0) << ',' << fmt(gamma.real()) << ',' << fmt(gamma.imag()) << ','
      << fmt(r.tpdm ? r.tpdm->norm_constant : std::nan("")) << ',' << fmt(r.trajectory.diagnostics.max_trace_drift)
      << ',' << fmt(r.trajectory.diagnostics.min_eigenvalue) << ',' << fmt(r.stark_peak.delta_HH) << ','
      << fmt(r.stark_peak.delta_VV) << ',' << fmt(r.stark_peak.splitting) << ',' << fmt(r.ettocf.peak) << ','
      << fmt(p.temperature) << ',' << fmt(rate_to_ueV(p.g)) << ',' << p.n_max << '\n';
    return s.str();
}

std::string tpdm_json(const SimulationResult& r) {
    const auto& dm = *r.tpdm;
    nlohmann::json j;
    j["basis"] = {"HH", "HV", "VH", "VV"};
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
        for (int k = 0; k < 4; ++k) {
            rr.push_back(dm.matrix(i, k).real());
            ii.push_back(dm.matrix(i, k).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    j["real"] = re;
    j["imag"] = im;
    j["norm_constant"] = dm.norm_constant;
    j["raw_diagonals"] = dm.raw_diagonals;
    j["raw_hermiticity_error"] = dm.raw_hermiticity_error;
    j["window"] = {{"t_begin_ps", dm.t_begin}, {"T_p_ps", dm.T_p}, {"T_p_prime_ps", dm.T_p_prime}};
    if (r.entanglement) j["concurrence"] = r.entanglement->concurrence;
    j["qber"] = r.qber;
    j["temperature_K"] = r.params.temperature;
    j["g_ueV"] = rate_to_ueV(r.params.g);
    return j.dump(2) + "\n";
}

std::string trajectory_csv(const SimulationResult& r) {
    const HilbertLayout layout(r.params.n_max);
    const ElementaryOps ops = build_elementary_ops(layout);
    const QuantumOp n_H = ops.a_H.adjoint() * ops.a_H;
    const QuantumOp n_V = ops.a_V.adjoint() * ops.a_V;
    std::ostringstream s;
    s << "t_ps,pop_G,pop_H,pop_V,pop_B,n_H,n_V,trace,min_eig\n";
    for (const auto& st : r.trajectory.states) {
        s << fmt(st.time);
        for (int q = 0; q < kQdDim; ++q) s << ',' << fmt(expectation(ops.projector[q], st).real());
        s << ',' << fmt(expectation(n_H, st).real()) << ',' << fmt(expectation(n_V, st).real()) << ','
          << fmt(st.trace().real()) << ',' << fmt(st.min_eigenvalue()) << '\n';
    }
    return s.str();
}

std::string stark_csv(const SimulationResult& r) {
    const HilbertLayout layout(r.params.n_max);
    const ElementaryOps ops = build_elementary_ops(layout);
    const QuantumOp n_H = ops.a_H.adjoint() * ops.a_H;
    const QuantumOp n_V = ops.a_V.adjoint() * ops.a_V;
    std::ostringstream s;
    s << "t_ps,n_H,n_V,delta_HH_meV,delta_VV_meV,splitting_meV\n";
    for (const auto& st : r.trajectory.states) {
        const double nh = expectation(n_H, st).real();
        const double nv = expectation(n_V, st).real();
        const StarkReport sr = stark_shifts(r.params, r.b_avg, nh, nv);
        s << fmt(st.time) << ',' << fmt(nh) << ',' << fmt(nv) << ',' << fmt(sr.delta_HH) << ',' << fmt(sr.delta_VV)
          << ',' << fmt(sr.splitting) << '\n';
    }
    return s.str();
}

std::string ettocf_csv(const SimulationResult& r) {
    std::ostringstream s;
    s << "t_ps,ettocf\n";
    for (std::size_t i = 0; i < r.ettocf.times.size(); ++i) {
        s << fmt(r.ettocf.times[i]) << ',' << fmt(r.ettocf.values[i]) << '\n';
    }
    return s.str();
}

std::string rate_curves_csv(const std::vector<RateCurveRow>& rows) {
    std::ostringstream s;
    s << "delta_meV,gamma_plus,gamma_minus,gamma_tp,temperature_K,gamma_plus_omega,gamma_minus_omega,gamma_tp_omega\n";
    for (const auto& row : rows) {
        s << fmt(row.delta_meV) << ',' << fmt(row.gamma_plus) << ',' << fmt(row.gamma_minus) << ','
          << fmt(row.gamma_tp) << ',' << fmt(row.temperature_K) << ',' << fmt(row.gamma_plus_omega) << ','
          << fmt(row.gamma_minus_omega) << ',' << fmt(row.gamma_tp_omega) << '\n';
    }
    return s.str();
}

template <class F>
auto stage(const char* module, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(module, e.what());
    }
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / std::max(1, n - 1);
    return v;
}

} // namespace

SimulationOptions default_options(const PhysicalParams& p) {
    SimulationOptions o;
    o.model = model::ModelConfig::from_params(p);
    return o;
}

SimulationResult simulate(const PhysicalParams& p, const SimulationOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    validate(p);
    SimulationResult r;
    r.params = p;

    model::ModelConfig cfg = opts.model;
    cfg.phonons_enabled = p.phonons_enabled;
    if (!p.phonons_enabled) {
        cfg.include_lamb_shifts = cfg.include_cross_coupling = cfg.include_tp_terms = false;
    }
    if (p.phonons_enabled) {
        r.kernel = stage("phonon-kernel", [&] { return phonon::build_kernel(p); });
        r.b_avg = r.kernel->b_avg;
    }
    r.validity = check_polaron_validity(p, r.b_avg);
    if (!r.validity.pass) {
        std::ostringstream msg;
        msg << "polaron validity parameter " << r.validity.value << " exceeds " << r.validity.threshold;
        warn(msg.str());
    }

    const model::MasterEquation me = stage("model-liouvillian", [&] {
        return model::MasterEquation::build(p, r.kernel ? &*r.kernel : nullptr, cfg);
    });
    r.trajectory = stage("dynamics", [&] {
        const DensityState rho0 = pure_state(me.layout(), QdLevel::G, 0, 0, 0.0);
        return evolve(me, rho0, p.horizon(), opts.correlations.evolve);
    });

    const ElementaryOps ops = build_elementary_ops(me.layout());
    const QuantumOp n_H = ops.a_H.adjoint() * ops.a_H;
    const QuantumOp n_V = ops.a_V.adjoint() * ops.a_V;
    double peak_H = 0.0, peak_V = 0.0;
    for (const auto& st : r.trajectory.states) {
        peak_H = std::max(peak_H, expectation(n_H, st).real());
        peak_V = std::max(peak_V, expectation(n_V, st).real());
    }
    r.stark_peak = stage("metrics", [&] { return stark_shifts(p, r.b_avg, peak_H, peak_V); });
    if (p.n_max >= 3) r.ettocf = ettocf_series(r.trajectory, me.layout(), 0.0, p.t_gate);

    if (opts.compute_tpdm) {
        r.tpdm = stage("correlations", [&] {
            const CorrelatorGrid grid =
                correlator_grid(me, r.trajectory, p.t_gate, p.T_p, p.T_p_prime, opts.correlations);
            return build_tpdm(grid);
        });
        r.entanglement = stage("metrics", [&] { return concurrence(r.tpdm->matrix); });
        r.qber = qber(r.tpdm->matrix);
    }
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::set<Artifact> all_artifacts() {
    return {Artifact::Summary, Artifact::Tpdm, Artifact::Rates, Artifact::Trajectory, Artifact::Stark,
            Artifact::Ettocf};
}

Artifact parse_artifact(const std::string& name) {
    for (Artifact a : all_artifacts()) {
        if (artifact_name(a) == name) return a;
    }
    throw ArgumentError("unknown output '" + name + "' (summary, tpdm, rates, trajectory, stark, ettocf)");
}

std::string artifact_name(Artifact a) {
    switch (a) {
    case Artifact::Summary: return "summary";
    case Artifact::Tpdm: return "tpdm";
    case Artifact::Rates: return "rates";
    case Artifact::Trajectory: return "trajectory";
    case Artifact::Stark: return "stark";
    case Artifact::Ettocf: return "ettocf";
    }
    return "?";
}

std::string config_hash(const PhysicalParams& p) {
    // FNV-1a, 64 bit
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_config(p)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

fs::path write_run(const SimulationResult& r, const fs::path& root, const std::set<Artifact>& outputs) {
    const fs::path dir = root / config_hash(r.params);
    const fs::path tmp = root / (config_hash(r.params) + ".partial");
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    write_file(tmp / "config.echo", serialize_config(r.params));
    if (outputs.contains(Artifact::Summary)) write_file(tmp / "summary.csv", summary_csv(r));
    if (outputs.contains(Artifact::Tpdm) && r.tpdm) write_file(tmp / "tpdm.json", tpdm_json(r));
    if (outputs.contains(Artifact::Trajectory)) write_file(tmp / "trajectory.csv", trajectory_csv(r));
    if (outputs.contains(Artifact::Stark)) write_file(tmp / "stark.csv", stark_csv(r));
    if (outputs.contains(Artifact::Ettocf)) write_file(tmp / "ettocf.csv", ettocf_csv(r));
    if (outputs.contains(Artifact::Rates)) {
        const double t_k = r.params.temperature;
        write_file(tmp / "rates.csv", rate_curves_csv(rate_curves(r.params, {t_k}, linspace(0.0, 3.0, 121))));
    }
    fs::remove_all(dir);
    fs::rename(tmp, dir);
    return dir;
}

std::string summary_line(const SimulationResult& r) {
    std::ostringstream s;
    s << std::setprecision(6);
    if (r.entanglement) {
        s << "C = " << r.entanglement->concurrence << ", q = " << r.qber;
    } else {
        s << "C = n/a, q = n/a";
    }
    s << ", <B> = " << r.b_avg << ", validity = " << r.validity.value << (r.validity.pass ? " (ok)" : " (violated)")
      << ", runtime = " << std::setprecision(3) << r.runtime_s << " s";
    return s.str();
}

std::vector<RateCurveRow> rate_curves(const PhysicalParams& base, const std::vector<double>& temperatures_K,
                                      const std::vector<double>& deltas_meV) {
    std::vector<RateCurveRow> rows;
    // Pulse average int Gamma_Omega dt / 2 t_p of a Gaussian pulse: K Omega_H0^2 sqrt(pi/2) / 8.
    const double pulse_avg = base.omega_H0 * base.omega_H0 * std::sqrt(std::numbers::pi / 2.0) / 8.0;
    for (double t_k : temperatures_K) {
        if (!(t_k > 0.0)) throw ArgumentError("rate curves need positive temperatures");
        const auto pc = phonon::PhononCorrelation::tabulate({base.alpha_p, base.omega_b}, t_k);
        for (double d : deltas_meV) {
            const double delta = units::meV_to_rate(d);
            const phonon::RateSet rs = phonon::compute_rates(pc, delta, 0.0, base.g);
            RateCurveRow row{};
            row.delta_meV = d;
            row.temperature_K = t_k;
            row.gamma_plus = rate_to_ueV(rs.gamma_plus_H);
            row.gamma_minus = rate_to_ueV(rs.gamma_minus_H);
            row.gamma_tp = rate_to_ueV(rs.gamma_tp_H);
            row.gamma_plus_omega = rate_to_ueV(pulse_avg * rs.k_plus_omega);
            row.gamma_minus_omega = rate_to_ueV(pulse_avg * rs.k_minus_omega);
            row.gamma_tp_omega = rate_to_ueV(pulse_avg * rs.k_tp_omega);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_rate_curves(const std::vector<RateCurveRow>& rows, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file(path, rate_curves_csv(rows));
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "g") return SweepAxis::G;
    if (name == "temperature") return SweepAxis::Temperature;
    if (name == "delta_fss") return SweepAxis::DeltaFss;
    if (name == "T_p_prime") return SweepAxis::TpPrime;
    throw ArgumentError("unknown sweep axis '" + name + "' (g, temperature, delta_fss, T_p_prime)");
}

std::string axis_name(SweepAxis a) {
    switch (a) {
    case SweepAxis::G: return "g";
    case SweepAxis::Temperature: return "temperature";
    case SweepAxis::DeltaFss: return "delta_fss";
    case SweepAxis::TpPrime: return "T_p_prime";
    }
    return "?";
}

PhysicalParams apply_axis(PhysicalParams p, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::G: p.g = units::ueV_to_rate(value); break;
    case SweepAxis::Temperature: p.temperature = value; break;
    case SweepAxis::DeltaFss: p.delta_fss = units::ueV_to_rate(value); break;
    case SweepAxis::TpPrime: p.T_p_prime = value; break;
    }
    validate(p);
    return p;
}

unsigned default_workers() {
    if (const char* env = std::getenv("QDC_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
        warn(std::string("ignoring invalid QDC_WORKERS='") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers) {
    if (spec.values.empty()) throw ArgumentError("sweep needs at least one value");
    std::vector<SweepRow> rows(spec.values.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            SweepRow& row = rows[i];
            row.axis_value = spec.values[i];
            try {
                const PhysicalParams p = apply_axis(spec.base, spec.axis, spec.values[i]);
                SimulationOptions o = spec.options;
                const SimulationResult r = simulate(p, o);
                row.concurrence = r.entanglement ? r.entanglement->concurrence : std::nan("");
                row.qber = r.qber;
                row.b_avg = r.b_avg;
                row.validity = r.validity.value;
                row.runtime_s = r.runtime_s;
                row.gamma_abs = r.tpdm ? std::abs(r.tpdm->gamma()) : std::nan("");
                row.delta_HH_meV = r.stark_peak.delta_HH;
                row.delta_VV_meV = r.stark_peak.delta_VV;
                row.ettocf_peak = r.ettocf.peak;
            } catch (const std::exception& e) {
                const double nan = std::nan("");
                row = SweepRow{spec.values[i], nan, nan, nan, nan, nan, nan, nan, nan, nan, e.what()};
            }
        }
    };
    const unsigned n = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(rows.size()));
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    return rows;
}

void write_sweep(const std::vector<SweepRow>& rows, const fs::path& path) {
    std::ostringstream s;
    s << "axis_value,concurrence,qber,b_avg,validity,runtime_s,error,gamma_abs,delta_HH_meV,delta_VV_meV,"
         "ettocf_peak\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), '"', '\'');
        s << fmt(r.axis_value) << ',' << fmt(r.concurrence) << ',' << fmt(r.qber) << ',' << fmt(r.b_avg) << ','
          << fmt(r.validity) << ',' << fmt(r.runtime_s) << ',' << (err.empty() ? "" : "\"" + err + "\"") << ','
          << fmt(r.gamma_abs) << ',' << fmt(r.delta_HH_meV) << ',' << fmt(r.delta_VV_meV) << ','
          << fmt(r.ettocf_peak) << '\n';
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file(path, s.str());
}

} // namespace qdc::runner
