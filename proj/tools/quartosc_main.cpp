// quartosc: quartic-oscillator decoherence toolkit.
//
// Commands map one config file to one deterministic artifact: evolve and
// compare produce mean-position CSV series, wigner produces phase-space
// grids, timescales and envelope produce fit/scale reports. Identical
// manifests (tool version, command, inputs, flags) produce byte-identical
// outputs; every file embeds the manifest digest.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quartosc/config_io.hpp"
#include "quartosc/envelope.hpp"
#include "quartosc/errors.hpp"
#include "quartosc/force_ensemble.hpp"
#include "quartosc/quantum_approx.hpp"
#include "quartosc/quasiclassical.hpp"
#include "quartosc/series_io.hpp"
#include "quartosc/spectral.hpp"
#include "quartosc/wigner.hpp"

namespace {

constexpr const char* kToolVersion = "quartosc 1.0.0";

using quartosc::ConfigError;
using quartosc::NumericError;
using quartosc::TimeSeries;

// Usage-level problems (malformed flag values, unreadable envelope input)
// exit with code 1, distinct from config (2) and numerical (3) failures.
struct UsageError {
    std::string message;
};

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError{flag + ": expected comma-separated numbers, got '" +
                             text + "'"};
        }
    }
    if (out.empty()) throw UsageError{flag + ": empty list"};
    return out;
}

// Ordered key=value manifest; its FNV-1a digest is stamped into outputs.
class Manifest {
public:
    void add(std::string key, std::string value) {
        fields_.emplace_back(std::move(key), std::move(value));
    }
    void add_number(std::string key, double value) {
        add(std::move(key), quartosc::format_double(value));
    }

    std::string digest() const {
        std::string text;
        for (const auto& [k, v] : fields_) {
            text += k;
            text += "=";
            text += v;
            text += "\n";
        }
        return quartosc::digest_hex(quartosc::fnv1a64(text));
    }

    // Comment metadata for output files: all fields except `skip`, then the
    // digest. `skip` avoids duplicating keys a writer emits on its own.
    std::vector<std::pair<std::string, std::string>> metadata(
        const std::string& skip = "") const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& f : fields_) {
            if (f.first != skip) out.push_back(f);
        }
        out.emplace_back("digest", digest());
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

Manifest base_manifest(const std::string& command,
                       const quartosc::LoadedConfig& loaded) {
    Manifest m;
    m.add("tool", kToolVersion);
    m.add("command", command);
    m.add("config", loaded.path);
    m.add("input_digest",
          quartosc::digest_hex(quartosc::fnv1a64(loaded.raw_text)));
    return m;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

// Shared evolve/compare dispatcher. Method names are validated by CLI11, so
// an unknown name never reaches this point.
TimeSeries run_method(const quartosc::LoadedConfig& loaded,
                      const std::string& method) {
    const quartosc::ValidatedConfig& config = loaded.config;
    std::vector<std::string> warnings = config.warnings;
    TimeSeries series;
    if (method == "spectral") {
        const quartosc::ForceEnsemble ensemble = quartosc::ensemble_for(config);
        quartosc::SpectralEngine engine(config, ensemble);
        for (const std::string& w : engine.warnings()) warnings.push_back(w);
        series = engine.mean_position(config.grid.times);
    } else if (method == "quasiclassical-closed") {
        series = quartosc::mean_position_closed_form(config, config.grid.times,
                                                     &warnings);
    } else if (method == "quasiclassical-quadrature") {
        series = quartosc::mean_position_quadrature(config, config.grid.times,
                                                    0, &warnings);
    } else if (method == "approx") {
        if (config.bec.mode != quartosc::CondensateMode::Continuum) {
            throw ConfigError(quartosc::ErrorCode::WrongMode,
                              "approx requires a continuum condensate");
        }
        const auto& c = config.coefficients;
        const std::complex<double> c0 = c.empty() ? 0.0 : c[0];
        const std::complex<double> c1 = c.size() > 1 ? c[1] : 0.0;
        const quartosc::ForceEnsemble ensemble = quartosc::ensemble_for(config);
        const double stationary = quartosc::stationary_value(config, ensemble);
        series = quartosc::approx_mean_position(c0, c1, config.osc,
                                                config.bec.delta_phi,
                                                config.grid.times, stationary);
    } else {
        throw UsageError{"unknown method '" + method + "'"};
    }
    print_warnings(warnings);
    return series;
}

const std::vector<std::string> kMethods = {
    "spectral", "quasiclassical-closed", "quasiclassical-quadrature",
    "approx"};

int run_evolve(const std::string& config_path, const std::string& method,
               const std::string& out_path) {
    const quartosc::LoadedConfig loaded =
        quartosc::load_config_file(config_path);
    Manifest manifest = base_manifest("evolve", loaded);
    manifest.add("method", method);
    manifest.add("out", out_path);

    const TimeSeries series = run_method(loaded, method);
    quartosc::write_series_csv(out_path, series, manifest.metadata("method"));
    std::cout << "wrote " << out_path << " (" << series.times.size()
              << " rows, method=" << method << ", digest=" << manifest.digest()
              << ")\n";
    return 0;
}

int run_compare(const std::string& config_path,
                const std::vector<std::string>& methods,
                const std::string& out_path) {
    const quartosc::LoadedConfig loaded =
        quartosc::load_config_file(config_path);
    std::string joined;
    for (const std::string& m : methods) {
        if (!joined.empty()) joined += ",";
        joined += m;
    }
    Manifest manifest = base_manifest("compare", loaded);
    manifest.add("methods", joined);
    manifest.add("out", out_path);

    std::vector<TimeSeries> columns;
    columns.reserve(methods.size());
    for (const std::string& m : methods) {
        columns.push_back(run_method(loaded, m));
    }

    // Sup over time of the spread between the largest and smallest column.
    double sup_diff = 0.0;
    const std::size_t n = loaded.config.grid.times.size();
    for (std::size_t i = 0; i < n; ++i) {
        double lo = columns[0].values[i];
        double hi = lo;
        for (const TimeSeries& s : columns) {
            lo = std::min(lo, s.values[i]);
            hi = std::max(hi, s.values[i]);
        }
        sup_diff = std::max(sup_diff, hi - lo);
    }

    auto metadata = manifest.metadata();
    metadata.emplace_back("sup_diff", quartosc::format_double(sup_diff));
    quartosc::write_atomic(out_path,
                           quartosc::compare_csv_text(loaded.config.grid.times,
                                                      columns, metadata));
    std::cout << "wrote " << out_path << " (" << n << " rows, "
              << methods.size() << " methods)\n";
    std::cout << "sup_diff = " << quartosc::format_double(sup_diff) << "\n";
    return 0;
}

int run_wigner(const std::string& config_path, const std::string& times_str,
               const std::string& grid_str, const std::string& format,
               const std::string& out_path) {
    const quartosc::LoadedConfig loaded =
        quartosc::load_config_file(config_path);
    const std::vector<double> times = parse_double_list(times_str, "--times");

    quartosc::PhaseSpaceGridSpec spec =
        quartosc::PhaseSpaceGridSpec::defaults_for(loaded.config);
    if (!grid_str.empty()) {
        const std::vector<double> dims = parse_double_list(grid_str, "--grid");
        if (dims.size() != 2) throw UsageError{"--grid: expected NX,NP"};
        spec.nx = static_cast<int>(dims[0]);
        spec.np = static_cast<int>(dims[1]);
    }
    if (format != "rows" && format != "matrix") {
        throw UsageError{"--format: expected rows or matrix"};
    }

    const quartosc::ForceEnsemble ensemble =
        quartosc::ensemble_for(loaded.config);
    quartosc::SpectralEngine engine(loaded.config, ensemble);
    print_warnings(loaded.config.warnings);
    print_warnings(engine.warnings());

    const std::filesystem::path base(out_path);
    const std::string stem = (base.parent_path() / base.stem()).string();
    const std::string ext = base.extension().string();

    for (std::size_t i = 0; i < times.size(); ++i) {
        const quartosc::DensityCoefficients coeffs =
            engine.density_coefficients(times[i]);
        const quartosc::PhaseSpaceGrid grid =
            quartosc::render(coeffs, spec, loaded.config.osc);

        Manifest manifest = base_manifest("wigner", loaded);
        manifest.add_number("t", times[i]);
        manifest.add("grid", std::to_string(spec.nx) + "x" +
                                 std::to_string(spec.np));
        manifest.add_number("x_half", spec.x_half);
        manifest.add_number("p_half", spec.p_half);
        manifest.add("format", format);
        manifest.add("out", out_path);

        const std::string path = stem + "_t" + std::to_string(i) + ext;
        const std::string text =
            format == "rows"
                ? quartosc::grid_rows_csv_text(grid, manifest.metadata())
                : quartosc::grid_matrix_text(grid, manifest.metadata());
        quartosc::write_atomic(path, text);
        std::cout << "wrote " << path << " (t=" << times[i]
                  << ", min=" << grid.min_value() << ", max=" << grid.max_value()
                  << ", norm=" << grid.normalization() << ")\n";
    }
    return 0;
}

// Infinities are not representable in JSON; the machine-readable reports
// mark them with the string "inf" instead.
nlohmann::json json_number(double v) {
    if (std::isinf(v)) return nlohmann::json(v > 0 ? "inf" : "-inf");
    return nlohmann::json(v);
}

int run_timescales(const std::string& config_path, bool as_json) {
    const quartosc::LoadedConfig loaded =
        quartosc::load_config_file(config_path);
    print_warnings(loaded.config.warnings);
    const quartosc::TimeScales ts = quartosc::time_scales(loaded.config);
    const double ratio =
        quartosc::anharmonicity_ratio(loaded.config.osc, loaded.config.state);

    if (as_json) {
        nlohmann::json j;
        j["tool"] = kToolVersion;
        j["t_beta"] = json_number(ts.t_beta);
        j["t_phi"] = json_number(ts.t_phi);
        j["t_g"] = json_number(ts.t_g);
        j["omega1"] = json_number(ts.omega1);
        j["harmonic_limit"] = ts.harmonic_limit;
        j["anharmonicity"] = json_number(ratio);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::printf("t_beta        = %.10g\n", ts.t_beta);
    std::printf("t_phi         = %.10g\n", ts.t_phi);
    std::printf("t_G           = %.10g\n", ts.t_g);
    std::printf("omega1        = %.10g\n", ts.omega1);
    std::printf("anharmonicity = %.10g\n", ratio);
    if (ts.harmonic_limit) std::printf("harmonic limit (beta = 0)\n");
    return 0;
}

int run_envelope(const std::string& input_path, const std::string& model,
                 const std::string& window_str, double baseline,
                 bool baseline_set, bool as_json,
                 const std::string& out_path) {
    std::string raw;
    {
        std::ifstream in(input_path, std::ios::binary);
        if (!in) throw UsageError{"cannot open input file: " + input_path};
        std::ostringstream buf;
        buf << in.rdbuf();
        raw = buf.str();
    }
    const TimeSeries series = quartosc::read_series_csv(input_path);

    if (!baseline_set) {
        // Late-window mean: the tail of a decaying signal sits at its
        // stationary value.
        const std::size_t n = series.values.size();
        const std::size_t m = std::max<std::size_t>(5, n / 10);
        const std::size_t k = std::min(m, n);
        double sum = 0.0;
        for (std::size_t i = n - k; i < n; ++i) sum += series.values[i];
        baseline = sum / static_cast<double>(k);
    }

    const TimeSeries envelope = quartosc::extract_envelope(series, baseline);
    double lo = envelope.times.front();
    double hi = envelope.times.back();
    if (!window_str.empty()) {
        const std::vector<double> w = parse_double_list(window_str, "--window");
        if (w.size() != 2) throw UsageError{"--window: expected T_LO,T_HI"};
        lo = w[0];
        hi = w[1];
    }

    quartosc::EnvelopeFit fit;
    if (model == "gaussian") {
        fit = quartosc::fit_gaussian(envelope, lo, hi);
    } else if (model == "powerlaw") {
        fit = quartosc::fit_powerlaw(envelope, lo, hi);
    } else {
        throw UsageError{"--model: expected gaussian or powerlaw"};
    }

    Manifest manifest;
    manifest.add("tool", kToolVersion);
    manifest.add("command", "envelope");
    manifest.add("config", input_path);
    manifest.add("input_digest", quartosc::digest_hex(quartosc::fnv1a64(raw)));
    manifest.add("model", model);
    manifest.add_number("window_lo", fit.window_lo);
    manifest.add_number("window_hi", fit.window_hi);
    manifest.add_number("baseline", baseline);
    manifest.add("out", out_path);

    std::string report;
    if (as_json) {
        nlohmann::json j;
        j["tool"] = kToolVersion;
        j["model"] = fit.model;
        if (model == "gaussian") {
            j["t_g"] = fit.t_g_infinite
                           ? nlohmann::json("inf")
                           : json_number(fit.t_g);
        } else {
            j["exponent"] = json_number(fit.exponent);
            j["exponent_stderr"] = json_number(fit.exponent_stderr);
            j["prefactor"] = json_number(fit.prefactor);
        }
        j["window_lo"] = json_number(fit.window_lo);
        j["window_hi"] = json_number(fit.window_hi);
        j["residual_rms"] = json_number(fit.residual_rms);
        j["n_points"] = fit.n_points;
        j["baseline"] = json_number(baseline);
        j["digest"] = manifest.digest();
        report = j.dump(2) + "\n";
    } else {
        std::string text;
        for (const auto& [k, v] : manifest.metadata()) {
            text += "# " + k + "=" + v + "\n";
        }
        text += "model = " + fit.model + "\n";
        if (model == "gaussian") {
            text += "t_g = ";
            text += fit.t_g_infinite ? "inf" : quartosc::format_double(fit.t_g);
            text += "\n";
        } else {
            text += "exponent = " + quartosc::format_double(fit.exponent) +
                    "\n";
            text += "exponent_stderr = " +
                    quartosc::format_double(fit.exponent_stderr) + "\n";
            text += "prefactor = " + quartosc::format_double(fit.prefactor) +
                    "\n";
        }
        text += "residual_rms = " + quartosc::format_double(fit.residual_rms) +
                "\n";
        text += "n_points = " + std::to_string(fit.n_points) + "\n";
        report = text;
    }

    if (!out_path.empty()) {
        quartosc::write_atomic(out_path, report);
        std::cout << "wrote " << out_path << "\n";
    } else {
        std::cout << report;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quartic-oscillator decoherence toolkit"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string method = "spectral";
    std::vector<std::string> methods;
    std::string out_path;
    std::string times_str = "0";
    std::string grid_str;
    std::string format = "rows";
    std::string input_path;
    std::string model = "gaussian";
    std::string window_str;
    double baseline = 0.0;
    bool as_json = false;

    CLI::App* evolve = app.add_subcommand(
        "evolve", "mean position over the config time grid, one method");
    evolve->add_option("--config", config_path, "JSON config file")
        ->required();
    evolve->add_option("--method", method, "evolution method")
        ->check(CLI::IsMember(kMethods));
    evolve->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* wigner = app.add_subcommand(
        "wigner", "phase-space distribution snapshots, one file per time");
    wigner->add_option("--config", config_path, "JSON config file")
        ->required();
    wigner->add_option("--times", times_str, "comma-separated times");
    wigner->add_option("--grid", grid_str, "grid size NX,NP");
    wigner->add_option("--format", format, "rows (x,p,w) or matrix");
    wigner->add_option("--out", out_path, "output base path")->required();

    CLI::App* timescales = app.add_subcommand(
        "timescales", "characteristic decay scales of the averaged signal");
    timescales->add_option("--config", config_path, "JSON config file")
        ->required();
    timescales->add_flag("--json", as_json, "machine-readable output");

    CLI::App* envelope = app.add_subcommand(
        "envelope", "fit a decay law to the envelope of a series CSV");
    envelope->add_option("input", input_path, "series CSV to analyze")
        ->required();
    envelope->add_option("--model", model, "gaussian or powerlaw");
    envelope->add_option("--window", window_str, "fit window T_LO,T_HI");
    CLI::Option* baseline_opt = envelope->add_option(
        "--baseline", baseline, "oscillation center (default: tail mean)");
    envelope->add_flag("--json", as_json, "machine-readable output");
    envelope->add_option("--out", out_path, "write the report to a file");

    CLI::App* compare = app.add_subcommand(
        "compare", "evaluate several methods on one grid, report the gap");
    compare->add_option("--config", config_path, "JSON config file")
        ->required();
    compare->add_option("--method", methods, "method (repeatable)")
        ->required()
        ->check(CLI::IsMember(kMethods));
    compare->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*evolve) return run_evolve(config_path, method, out_path);
        if (*wigner) {
            return run_wigner(config_path, times_str, grid_str, format,
                              out_path);
        }
        if (*timescales) return run_timescales(config_path, as_json);
        if (*envelope) {
            return run_envelope(input_path, model, window_str, baseline,
                                baseline_opt->count() > 0, as_json, out_path);
        }
        if (*compare) return run_compare(config_path, methods, out_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.message << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
