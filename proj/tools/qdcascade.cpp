// qdcascade: command-line driver for single runs, sweeps, rate curves and
// config validation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdcascade/errors.hpp"
#include "qdcascade/params.hpp"
#include "qdcascade/phonon_kernel.hpp"
#include "qdcascade/runner.hpp"
#include "qdcascade/units.hpp"

namespace fs = std::filesystem;
using namespace qdc;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalidConfig = 2;

struct ConfigInput {
    std::string path;
    std::map<std::string, std::string> overrides;
};

// One --<key> flag per config key; flags take precedence over the file.
void add_config_options(CLI::App* cmd, ConfigInput& in) {
    cmd->add_option("-c,--config", in.path, "config file (key = value)")->check(CLI::ExistingFile);
    for (const auto& key : config_keys()) {
        cmd->add_option_function<std::string>(
               "--" + key, [&in, key](const std::string& v) { in.overrides[key] = v; }, "override " + key)
            ->type_name("VALUE");
    }
}

PhysicalParams resolve_params(const ConfigInput& in) {
    ConfigMap map;
    if (!in.path.empty()) {
        std::ifstream file(in.path);
        if (!file) throw ConfigError("cannot open config file '" + in.path + "'");
        std::stringstream ss;
        ss << file.rdbuf();
        map = parse_config_text(ss.str());
    }
    for (const auto& [k, v] : in.overrides) map[k] = v;
    return params_from_map(map);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw ArgumentError("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ArgumentError("empty value list");
    return out;
}

int run_cmd(const ConfigInput& in, const std::string& out_dir, const std::string& outputs) {
    const PhysicalParams p = resolve_params(in);
    std::set<runner::Artifact> wanted;
    for (const auto& name : CLI::detail::split(outputs, ',')) wanted.insert(runner::parse_artifact(name));
    runner::SimulationOptions opts = runner::default_options(p);
    opts.compute_tpdm = true;
    const runner::SimulationResult r = runner::simulate(p, opts);
    const fs::path dir = runner::write_run(r, out_dir, wanted);
    std::cout << runner::summary_line(r) << "\n" << "outputs: " << dir.string() << "\n";
    return 0;
}

int sweep_cmd(const ConfigInput& in, const std::string& axis, const std::string& values, std::string out,
              unsigned workers) {
    const PhysicalParams base = resolve_params(in);
    runner::SweepSpec spec;
    spec.axis = runner::parse_axis(axis);
    spec.values = parse_list(values);
    spec.base = base;
    spec.options = runner::default_options(base);
    for (double v : spec.values) runner::apply_axis(base, spec.axis, v); // fail fast on invalid points
    if (out.empty()) out = "out/sweep_" + runner::axis_name(spec.axis) + ".csv";
    const auto rows = runner::run_sweep(spec, workers > 0 ? workers : runner::default_workers());
    runner::write_sweep(rows, out);
    int failed = 0;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            ++failed;
            std::cerr << "point " << row.axis_value << " failed: " << row.error << "\n";
        }
    }
    std::cout << rows.size() << " points, " << failed << " failed; written to " << out << "\n";
    return failed == 0 ? 0 : kExitFailure;
}

int rates_cmd(const ConfigInput& in, const std::string& temps, double d_min, double d_max, int points,
              const std::string& out) {
    const PhysicalParams p = resolve_params(in);
    if (points < 2 || !(d_max > d_min)) throw ArgumentError("need points >= 2 and delta-max > delta-min");
    std::vector<double> deltas(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) deltas[static_cast<std::size_t>(i)] = d_min + (d_max - d_min) * i / (points - 1);
    const auto rows = runner::rate_curves(p, parse_list(temps), deltas);
    runner::write_rate_curves(rows, out);
    std::cout << rows.size() << " rows written to " << out << "\n";
    return 0;
}

int validate_cmd(const ConfigInput& in) {
    const PhysicalParams p = resolve_params(in);
    double b = 1.0;
    if (p.phonons_enabled) {
        const phonon::SpectralDensity sd{p.alpha_p, p.omega_b};
        b = phonon::PhononCorrelation::tabulate(sd, p.temperature).b_avg();
    }
    const ValidityReport v = check_polaron_validity(p, b);
    std::cout << "config ok\n"
              << "<B> = " << b << "\n"
              << "validity = " << v.value << " (threshold " << v.threshold << ", "
              << (v.pass ? "pass" : "fail") << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entangled photon pairs from a phonon-dressed biexciton cascade"};
    app.require_subcommand(1);

    ConfigInput run_in, sweep_in, rates_in, validate_in;
    std::string out_dir = "out";
    std::string outputs = "summary,tpdm,rates,trajectory,stark,ettocf";
    auto* run = app.add_subcommand("run", "simulate one parameter set and write its artifacts");
    add_config_options(run, run_in);
    run->add_option("-o,--out", out_dir, "output root; files go to <out>/<config-hash>/")->capture_default_str();
    run->add_option("--outputs", outputs, "comma-separated artifacts")->capture_default_str();

    std::string axis, values, sweep_out;
    unsigned workers = 0;
    auto* sweep = app.add_subcommand("sweep", "run a one-dimensional parameter sweep");
    add_config_options(sweep, sweep_in);
    sweep->add_option("--axis", axis, "g | temperature | delta_fss | T_p_prime")->required();
    sweep->add_option("--values", values, "comma-separated axis values (ueV, K or ps)")->required();
    sweep->add_option("-o,--out", sweep_out, "output CSV (default out/sweep_<axis>.csv)");
    sweep->add_option("-j,--workers", workers, "worker threads (default: QDC_WORKERS or all cores)");

    std::string temps = "4,20", rates_out = "out/rates.csv";
    double d_min = 0.0, d_max = 3.0;
    int points = 121;
    auto* rates = app.add_subcommand("rates", "tabulate phonon-induced rates against detuning");
    add_config_options(rates, rates_in);
    rates->add_option("--temperatures", temps, "comma-separated temperatures in K")->capture_default_str();
    rates->add_option("--delta-min", d_min, "meV")->capture_default_str();
    rates->add_option("--delta-max", d_max, "meV")->capture_default_str();
    rates->add_option("--points", points)->capture_default_str();
    rates->add_option("-o,--out", rates_out)->capture_default_str();

    auto* validate_sc = app.add_subcommand("validate", "check a config and the polaron validity condition");
    add_config_options(validate_sc, validate_in);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    try {
        if (*run) return run_cmd(run_in, out_dir, outputs);
        if (*sweep) return sweep_cmd(sweep_in, axis, values, sweep_out, workers);
        if (*rates) return rates_cmd(rates_in, temps, d_min, d_max, points, rates_out);
        if (*validate_sc) return validate_cmd(validate_in);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const ValidationError& e) {
        std::cerr << "invalid parameter " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
