#include "quartosc/config_io.hpp"

#include <complex>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quartosc/errors.hpp"

namespace quartosc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& detail) {
    throw ConfigError(ErrorCode::BadConfigFile, path + ": " + detail);
}

void require_object(const json& j, const std::string& path,
                    const std::string& name) {
    if (!j.is_object()) bad(path, name + " must be an object");
}

// Strict schema: every key in j must appear in allowed.
void reject_unknown_keys(const json& j, const std::string& path,
                         const std::string& name,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) bad(path, name + ": unknown key '" + item.key() + "'");
    }
}

double get_number(const json& j, const std::string& path,
                  const std::string& name, const char* key) {
    if (!j.contains(key)) bad(path, name + ": missing key '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) bad(path, name + "." + key + " must be a number");
    return v.get<double>();
}

double get_number_or(const json& j, const std::string& path,
                     const std::string& name, const char* key,
                     double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) bad(path, name + "." + key + " must be a number");
    return v.get<double>();
}

long long get_integer(const json& j, const std::string& path,
                      const std::string& name, const char* key) {
    if (!j.contains(key)) bad(path, name + ": missing key '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        bad(path, name + "." + key + " must be an integer");
    }
    return v.get<long long>();
}

long long get_integer_or(const json& j, const std::string& path,
                         const std::string& name, const char* key,
                         long long fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        bad(path, name + "." + key + " must be an integer");
    }
    return v.get<long long>();
}

OscillatorParams parse_oscillator(const json& j, const std::string& path) {
    require_object(j, path, "oscillator");
    reject_unknown_keys(j, path, "oscillator", {"m", "omega0", "beta"});
    OscillatorParams osc;
    osc.m = get_number_or(j, path, "oscillator", "m", 1.0);
    osc.omega0 = get_number(j, path, "oscillator", "omega0");
    osc.beta = get_number(j, path, "oscillator", "beta");
    return osc;
}

CondensateParams parse_condensate(const json& j, const std::string& path) {
    require_object(j, path, "condensate");
    reject_unknown_keys(j, path, "condensate",
                        {"mode", "N", "omega1", "delta_phi"});
    if (!j.contains("mode") || !j.at("mode").is_string()) {
        bad(path, "condensate.mode must be \"continuum\" or \"discrete\"");
    }
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "continuum") {
        if (j.contains("N") || j.contains("omega1")) {
            bad(path, "condensate: N/omega1 only apply to discrete mode");
        }
        return CondensateParams::continuum(
            get_number(j, path, "condensate", "delta_phi"));
    }
    if (mode == "discrete") {
        if (j.contains("delta_phi")) {
            bad(path, "condensate: delta_phi only applies to continuum mode");
        }
        const long long n = get_integer(j, path, "condensate", "N");
        return CondensateParams::discrete(
            static_cast<int>(n), get_number(j, path, "condensate", "omega1"));
    }
    bad(path, "condensate.mode must be \"continuum\" or \"discrete\", got '" +
                  mode + "'");
}

StateSpec parse_state(const json& j, const std::string& path) {
    require_object(j, path, "state");
    reject_unknown_keys(j, path, "state", {"coherent", "coefficients"});
    const bool has_coherent = j.contains("coherent");
    const bool has_coeffs = j.contains("coefficients");
    if (has_coherent == has_coeffs) {
        bad(path,
            "state must have exactly one of 'coherent' or 'coefficients'");
    }
    if (has_coherent) {
        const json& c = j.at("coherent");
        require_object(c, path, "state.coherent");
        reject_unknown_keys(c, path, "state.coherent", {"x0", "p0"});
        return StateSpec::from_coherent(
            get_number(c, path, "state.coherent", "x0"),
            get_number(c, path, "state.coherent", "p0"));
    }
    const json& arr = j.at("coefficients");
    if (!arr.is_array() || arr.empty()) {
        bad(path, "state.coefficients must be a nonempty array");
    }
    std::vector<std::complex<double>> coeffs;
    coeffs.reserve(arr.size());
    for (const json& entry : arr) {
        if (!entry.is_array() || entry.size() != 2 ||
            !entry[0].is_number() || !entry[1].is_number()) {
            bad(path, "state.coefficients entries must be [re, im] pairs");
        }
        coeffs.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return StateSpec::from_coefficients(std::move(coeffs));
}

SimulationGrid parse_grid(const json& j, const std::string& path) {
    require_object(j, path, "grid");
    reject_unknown_keys(j, path, "grid",
                        {"t_max", "n_samples", "basis_size", "quad_nodes"});
    const double t_max = get_number(j, path, "grid", "t_max");
    const long long n_samples = get_integer(j, path, "grid", "n_samples");
    if (t_max <= 0.0) bad(path, "grid.t_max must be positive");
    if (n_samples < 1) bad(path, "grid.n_samples must be at least 1");
    SimulationGrid grid =
        SimulationGrid::uniform(t_max, static_cast<int>(n_samples));
    grid.basis_size = static_cast<int>(
        get_integer_or(j, path, "grid", "basis_size", grid.basis_size));
    grid.quad_nodes = static_cast<int>(
        get_integer_or(j, path, "grid", "quad_nodes", grid.quad_nodes));
    return grid;
}

}  // namespace

LoadedConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    LoadedConfig loaded;
    loaded.path = path;
    loaded.raw_text = buf.str();

    json doc;
    try {
        doc = json::parse(loaded.raw_text);
    } catch (const json::parse_error& e) {
        bad(path, std::string("JSON parse error: ") + e.what());
    }
    require_object(doc, path, "top level");
    reject_unknown_keys(doc, path, "top level",
                        {"oscillator", "condensate", "state", "grid"});
    for (const char* key : {"oscillator", "condensate", "state", "grid"}) {
        if (!doc.contains(key)) {
            bad(path, std::string("missing top-level key '") + key + "'");
        }
    }

    const OscillatorParams osc = parse_oscillator(doc.at("oscillator"), path);
    const CondensateParams bec = parse_condensate(doc.at("condensate"), path);
    const StateSpec state = parse_state(doc.at("state"), path);
    const SimulationGrid grid = parse_grid(doc.at("grid"), path);

    loaded.config = validate(osc, bec, state, grid);
    return loaded;
}

}  // namespace quartosc
