#include "qdcascade/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qdcascade/errors.hpp"
#include "qdcascade/units.hpp"

namespace qdc {

namespace {

using units::meV_to_rate;
using units::rate_to_meV;
using units::rate_to_ueV;
using units::ueV_to_rate;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ValidationError(key, "not a finite number: '" + text + "'");
    }
    return v;
}

int to_int(const std::string& key, const std::string& text) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError(key, "not an integer: '" + text + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ValidationError(key, "not a boolean: '" + text + "'");
}

void require_nonneg(const char* field, double v) {
    if (!(v >= 0.0)) throw ValidationError(field, "must be >= 0");
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

PhysicalParams default_params() {
    PhysicalParams p;
    p.alpha_p = 0.06;
    p.omega_b = meV_to_rate(1.0);
    p.temperature = 4.0;
    p.delta_fss = ueV_to_rate(20.0);
    p.detuning = meV_to_rate(1.1);
    p.g = ueV_to_rate(70.0);
    p.kappa = ueV_to_rate(65.0);
    p.gamma_B = ueV_to_rate(2.0);
    p.gamma_E = ueV_to_rate(1.0);
    p.gamma_B_deph = ueV_to_rate(4.0);
    p.gamma_E_deph = ueV_to_rate(2.0);
    p.omega_H0 = meV_to_rate(0.8);
    p.t_p = 6.0;
    p.t_0 = 4.0 * p.t_p;
    p.n_max = 2;
    p.T_p_prime = 200.0;
    p.T_p = p.T_p_prime;
    p.t_gate = p.t_0 + 2.5 * p.t_p;
    p.phonons_enabled = true;
    return p;
}

void validate(const PhysicalParams& p) {
    require_nonneg("alpha_p_ps2", p.alpha_p);
    if (!(p.omega_b > 0.0)) throw ValidationError("omega_b_meV", "must be > 0");
    if (p.phonons_enabled && !(p.temperature > 0.0)) {
        throw ValidationError("temperature_K", "must be > 0 when phonons are enabled");
    }
    require_nonneg("temperature_K", p.temperature);
    require_nonneg("delta_fss_ueV", p.delta_fss);
    require_nonneg("g_ueV", p.g);
    require_nonneg("kappa_ueV", p.kappa);
    require_nonneg("gamma_B_ueV", p.gamma_B);
    require_nonneg("gamma_E_ueV", p.gamma_E);
    require_nonneg("gamma_Bp_ueV", p.gamma_B_deph);
    require_nonneg("gamma_Ep_ueV", p.gamma_E_deph);
    require_nonneg("omega_H0_meV", p.omega_H0);
    if (!(p.t_p > 0.0)) throw ValidationError("t_p_ps", "must be > 0");
    require_nonneg("t0_ps", p.t_0);
    if (p.n_max < 1 || p.n_max > 4) throw ValidationError("n_max", "must lie in [1, 4]");
    if (!(p.T_p > 0.0)) throw ValidationError("Tp_ps", "must be > 0");
    if (!(p.T_p_prime > 0.0)) throw ValidationError("Tpprime_ps", "must be > 0");
    require_nonneg("t_gate_ps", p.t_gate);
    if (!(p.detuning > p.delta_fss)) {
        throw ValidationError("detuning_meV", "must exceed the fine-structure splitting");
    }
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "alpha_p_ps2",  "omega_b_meV", "temperature_K", "delta_fss_ueV", "detuning_meV",
        "g_ueV",        "kappa_ueV",   "gamma_B_ueV",   "gamma_E_ueV",   "gamma_Bp_ueV",
        "gamma_Ep_ueV", "omega_H0_meV", "t_p_ps",       "t0_ps",         "n_max",
        "Tp_ps",        "Tpprime_ps",  "t_gate_ps",     "phonons_enabled"};
    return keys;
}

ConfigMap parse_config_text(std::string_view text) {
    ConfigMap map;
    const auto& keys = config_keys();
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("missing key", line_no);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
        if (!map.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'", line_no);
    }
    return map;
}

PhysicalParams params_from_map(const ConfigMap& map) {
    PhysicalParams p = default_params();
    auto get = [&](const char* key) -> const std::string* {
        auto it = map.find(key);
        return it == map.end() ? nullptr : &it->second;
    };
    auto num = [&](const char* key, auto convert, double& field) {
        if (auto* v = get(key)) field = convert(to_double(key, *v));
    };
    auto ident = [](double x) { return x; };

    num("alpha_p_ps2", ident, p.alpha_p);
    num("omega_b_meV", meV_to_rate, p.omega_b);
    num("temperature_K", ident, p.temperature);
    num("delta_fss_ueV", ueV_to_rate, p.delta_fss);
    num("detuning_meV", meV_to_rate, p.detuning);
    num("g_ueV", ueV_to_rate, p.g);
    num("kappa_ueV", ueV_to_rate, p.kappa);
    num("gamma_B_ueV", ueV_to_rate, p.gamma_B);
    num("gamma_E_ueV", ueV_to_rate, p.gamma_E);
    num("gamma_Bp_ueV", ueV_to_rate, p.gamma_B_deph);
    num("gamma_Ep_ueV", ueV_to_rate, p.gamma_E_deph);
    num("omega_H0_meV", meV_to_rate, p.omega_H0);
    num("t_p_ps", ident, p.t_p);
    if (auto* v = get("n_max")) p.n_max = to_int("n_max", *v);
    num("Tpprime_ps", ident, p.T_p_prime);
    if (auto* v = get("phonons_enabled")) p.phonons_enabled = to_bool("phonons_enabled", *v);

    // Derived defaults follow the (possibly overridden) pulse width and window.
    p.t_0 = 4.0 * p.t_p;
    num("t0_ps", ident, p.t_0);
    p.t_gate = p.t_0 + 2.5 * p.t_p;
    num("t_gate_ps", ident, p.t_gate);
    p.T_p = p.T_p_prime;
    num("Tp_ps", ident, p.T_p);

    validate(p);
    return p;
}

PhysicalParams parse_config(std::string_view text) { return params_from_map(parse_config_text(text)); }

PhysicalParams load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const PhysicalParams& p) {
    std::ostringstream out;
    auto line = [&](const char* key, const std::string& value) { out << key << " = " << value << "\n"; };
    line("alpha_p_ps2", format_double(p.alpha_p));
    line("omega_b_meV", format_double(rate_to_meV(p.omega_b)));
    line("temperature_K", format_double(p.temperature));
    line("delta_fss_ueV", format_double(rate_to_ueV(p.delta_fss)));
    line("detuning_meV", format_double(rate_to_meV(p.detuning)));
    line("g_ueV", format_double(rate_to_ueV(p.g)));
    line("kappa_ueV", format_double(rate_to_ueV(p.kappa)));
    line("gamma_B_ueV", format_double(rate_to_ueV(p.gamma_B)));
    line("gamma_E_ueV", format_double(rate_to_ueV(p.gamma_E)));
    line("gamma_Bp_ueV", format_double(rate_to_ueV(p.gamma_B_deph)));
    line("gamma_Ep_ueV", format_double(rate_to_ueV(p.gamma_E_deph)));
    line("omega_H0_meV", format_double(rate_to_meV(p.omega_H0)));
    line("t_p_ps", format_double(p.t_p));
    line("t0_ps", format_double(p.t_0));
    line("n_max", std::to_string(p.n_max));
    line("Tp_ps", format_double(p.T_p));
    line("Tpprime_ps", format_double(p.T_p_prime));
    line("t_gate_ps", format_double(p.t_gate));
    line("phonons_enabled", p.phonons_enabled ? "true" : "false");
    return out.str();
}

ValidityReport check_polaron_validity(const PhysicalParams& p, double b_avg) {
    if (!(b_avg > 0.0 && b_avg <= 1.0)) throw ArgumentError("<B> must lie in (0, 1]");
    const double ratio = p.omega_H0 / p.omega_b;
    const double b4 = b_avg * b_avg * b_avg * b_avg;
    ValidityReport r;
    r.value = ratio * ratio * (1.0 - b4);
    r.threshold = kPolaronValidityThreshold;
    r.pass = r.value < r.threshold;
    return r;
}

} // namespace qdc
