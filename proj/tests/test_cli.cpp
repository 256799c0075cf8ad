#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "quartosc/series_io.hpp"
#include "quartosc/time_series.hpp"

using namespace quartosc;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    REQUIRE(out.good());
}

// Scratch working directory; every CLI run happens inside one so relative
// output paths (part of the manifest) can be identical across runs.
struct ScratchDir {
    fs::path path;
    ScratchDir() {
        path = fs::temp_directory_path() /
               ("quartosc_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
    RunResult run(const std::string& args) const {
        const std::string out_file = file("_stdout");
        const std::string err_file = file("_stderr");
        const std::string cmd = "cd '" + path.string() + "' && '" +
                                QUARTOSC_CLI_PATH + "' " + args + " > '" +
                                out_file + "' 2> '" + err_file + "'";
        const int status = std::system(cmd.c_str());
        RunResult r;
        if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
        r.out = slurp(out_file);
        r.err = slurp(err_file);
        return r;
    }
    static int counter;
};

int ScratchDir::counter = 0;

std::string fixture(const std::string& name) {
    return std::string(QUARTOSC_FIXTURE_DIR) + "/" + name;
}

// Reduced two-level config: same physics as the shipped strong-noise
// fixture, smaller basis and grid so subprocess tests stay quick.
const char* kReducedTwoLevel = R"({
  "oscillator": {"m": 1.0, "omega0": 1.3, "beta": 0.05},
  "condensate": {"mode": "continuum", "delta_phi": 0.7},
  "state": {"coefficients": [[0.5773502691896258, 0.5773502691896258], [0.0, 0.5773502691896258]]},
  "grid": {"t_max": 20.0, "n_samples": 200, "basis_size": 60, "quad_nodes": 24}
})";

const char* kHarmonicCoherent = R"({
  "oscillator": {"m": 1.0, "omega0": 1.3, "beta": 0.0},
  "condensate": {"mode": "continuum", "delta_phi": 0.1},
  "state": {"coherent": {"x0": 3.0, "p0": 0.0}},
  "grid": {"t_max": 30.0, "n_samples": 600, "basis_size": 60, "quad_nodes": 24}
})";

}  // namespace

TEST_CASE("version flag") {
    ScratchDir dir;
    const auto r = dir.run("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("quartosc 1.0.0") != std::string::npos);
}

TEST_CASE("evolve") {
    ScratchDir dir;

    SUBCASE("writes a stamped series and reports the digest") {
        spit(dir.file("reduced.json"), kReducedTwoLevel);
        const auto r = dir.run(
            "evolve --config reduced.json --method spectral --out out.csv");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("digest=") != std::string::npos);

        const std::string text = slurp(dir.file("out.csv"));
        CHECK(text.rfind("# method=spectral\n", 0) == 0);
        CHECK(text.find("# digest=") != std::string::npos);
        CHECK(text.find("t,x_mean\n") != std::string::npos);

        std::map<std::string, std::string> meta;
        const TimeSeries series = read_series_csv(dir.file("out.csv"), &meta);
        CHECK(series.values.size() == 200);
        CHECK(meta.at("command") == "evolve");
        CHECK(meta.count("input_digest") == 1);
        // Two-level state: starts at 2 lambda Re[c0 conj(c1)] / ... = 0.413.
        CHECK(series.values[0] == doctest::Approx(0.41346).epsilon(1e-3));
    }

    SUBCASE("identical manifests give byte-identical files") {
        ScratchDir other;
        spit(dir.file("reduced.json"), kReducedTwoLevel);
        spit(other.file("reduced.json"), kReducedTwoLevel);
        const std::string args =
            "evolve --config reduced.json --method spectral --out out.csv";
        const auto ra = dir.run(args);
        const auto rb = other.run(args);
        CHECK(ra.exit_code == 0);
        CHECK(rb.exit_code == 0);
        CHECK(slurp(dir.file("out.csv")) == slurp(other.file("out.csv")));
    }

    SUBCASE("no quartic well: amplitude never decays") {
        spit(dir.file("harmonic.json"), kHarmonicCoherent);
        const auto r = dir.run(
            "evolve --config harmonic.json --method spectral --out h.csv");
        CHECK(r.exit_code == 0);
        const TimeSeries series = read_series_csv(dir.file("h.csv"));
        double late_amp = 0.0;
        for (std::size_t i = 3 * series.values.size() / 4;
             i < series.values.size(); ++i) {
            late_amp = std::max(late_amp, std::fabs(series.values[i]));
        }
        CHECK(late_amp > 2.9);
    }

    SUBCASE("unknown method exits 1") {
        spit(dir.file("reduced.json"), kReducedTwoLevel);
        const auto r = dir.run(
            "evolve --config reduced.json --method bogus --out out.csv");
        CHECK(r.exit_code == 1);
        CHECK_FALSE(r.err.empty());
        CHECK_FALSE(fs::exists(dir.file("out.csv")));
    }

    SUBCASE("missing config exits 2") {
        const auto r = dir.run(
            "evolve --config absent.json --method spectral --out out.csv");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("error:") != std::string::npos);
        CHECK_FALSE(fs::exists(dir.file("out.csv")));
    }

    SUBCASE("unwritable output exits 2 and leaves nothing behind") {
        spit(dir.file("reduced.json"), kReducedTwoLevel);
        const auto r = dir.run(
            "evolve --config reduced.json --method approx "
            "--out missing_dir/out.csv");
        CHECK(r.exit_code == 2);
        CHECK_FALSE(fs::exists(dir.file("missing_dir")));
    }
}

TEST_CASE("wigner") {
    ScratchDir dir;

    SUBCASE("one stamped grid file per requested time") {
        spit(dir.file("reduced.json"), kReducedTwoLevel);
        const auto r = dir.run(
            "wigner --config reduced.json --times 0,7.5 --grid 101,101 "
            "--out w.csv");
        CHECK(r.exit_code == 0);
        REQUIRE(fs::exists(dir.file("w_t0.csv")));
        REQUIRE(fs::exists(dir.file("w_t1.csv")));

        const std::string t0 = slurp(dir.file("w_t0.csv"));
        CHECK(t0.find("# t=0\n") != std::string::npos);
        CHECK(t0.find("# digest=") != std::string::npos);
        CHECK(t0.find("x,p,w\n") != std::string::npos);
        const std::string t1 = slurp(dir.file("w_t1.csv"));
        CHECK(t1.find("# t=7.5\n") != std::string::npos);
    }

    SUBCASE("late-time grid of the strong-noise state has fringes") {
        spit(dir.file("reduced.json"), kReducedTwoLevel);
        const auto r = dir.run(
            "wigner --config reduced.json --times 7.5 --grid 101,101 "
            "--format matrix --out m.csv");
        CHECK(r.exit_code == 0);
        const std::string text = slurp(dir.file("m_t0.csv"));
        CHECK(text.find("x\\p,") != std::string::npos);
        // Scan the matrix body for a negative sample.
        bool negative = false;
        std::size_t pos = text.find('\n', text.find("x\\p,"));
        while (pos != std::string::npos && !negative) {
            negative = text.find(",-", pos) != std::string::npos;
            break;
        }
        CHECK(negative);
    }

    SUBCASE("coarse grid exits 3 without output") {
        spit(dir.file("reduced.json"), kReducedTwoLevel);
        const auto r = dir.run(
            "wigner --config reduced.json --grid 3,3 --out w.csv");
        CHECK(r.exit_code == 3);
        CHECK(r.err.find("error:") != std::string::npos);
        CHECK_FALSE(fs::exists(dir.file("w_t0.csv")));
    }

    SUBCASE("malformed grid flag exits 1") {
        spit(dir.file("reduced.json"), kReducedTwoLevel);
        const auto r = dir.run(
            "wigner --config reduced.json --grid lots --out w.csv");
        CHECK(r.exit_code == 1);
        const auto r2 = dir.run(
            "wigner --config reduced.json --format fancy --out w.csv");
        CHECK(r2.exit_code == 1);
    }
}

TEST_CASE("timescales") {
    ScratchDir dir;

    SUBCASE("text report for the decaying fixture") {
        const auto r =
            dir.run("timescales --config '" + fixture("fig3.json") + "'");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("t_beta") != std::string::npos);
        CHECK(r.out.find("45.0666") != std::string::npos);
        CHECK(r.out.find("9901.14") != std::string::npos);
        CHECK(r.out.find("1.429807") != std::string::npos);
        CHECK(r.out.find("harmonic limit") == std::string::npos);
    }

    SUBCASE("machine-readable report") {
        const auto r = dir.run("timescales --config '" +
                               fixture("fig3.json") + "' --json");
        CHECK(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j.at("t_beta").get<double>() ==
              doctest::Approx(45.066666666).epsilon(1e-9));
        CHECK(j.at("t_phi").get<double>() ==
              doctest::Approx(9901.1467).epsilon(1e-6));
        CHECK(j.at("t_g").get<double>() ==
              doctest::Approx(18.548538).epsilon(1e-6));
        CHECK(j.at("omega1").get<double>() ==
              doctest::Approx(1.4298076923).epsilon(1e-9));
        CHECK_FALSE(j.at("harmonic_limit").get<bool>());
    }

    SUBCASE("no quartic term: explicit infinity markers") {
        spit(dir.file("harmonic.json"), kHarmonicCoherent);
        const auto r = dir.run("timescales --config harmonic.json --json");
        CHECK(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j.at("t_beta") == "inf");
        CHECK(j.at("t_phi") == "inf");
        CHECK(j.at("t_g") == "inf");
        CHECK(j.at("harmonic_limit").get<bool>());
        CHECK(j.at("omega1").get<double>() == doctest::Approx(1.3));

        const auto rt = dir.run("timescales --config harmonic.json");
        CHECK(rt.exit_code == 0);
        CHECK(rt.out.find("harmonic limit (beta = 0)") != std::string::npos);
    }
}

TEST_CASE("envelope") {
    ScratchDir dir;

    SUBCASE("gaussian fit on a synthetic series") {
        TimeSeries series;
        series.method = "synthetic";
        for (int k = 0; k < 4000; ++k) {
            const double t = 30.0 * k / 3999.0;
            series.times.push_back(t);
            series.values.push_back(2.5 * std::exp(-t * t / 98.0) *
                                    std::cos(1.3 * t));
        }
        write_series_csv(dir.file("sig.csv"), series, {});

        const auto r = dir.run(
            "envelope sig.csv --model gaussian --window 0,30 --baseline 0 "
            "--json");
        CHECK(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j.at("model") == "gaussian");
        CHECK(j.at("t_g").get<double>() == doctest::Approx(7.0).epsilon(0.015));
        CHECK(j.at("n_points").get<int>() >= 8);
        CHECK(j.count("digest") == 1);
    }

    SUBCASE("power-law fit echoes the synthetic exponent") {
        TimeSeries series;
        series.method = "synthetic";
        for (int k = 0; k < 6000; ++k) {
            const double t = 5.0 + 75.0 * k / 5999.0;
            series.times.push_back(t);
            series.values.push_back(3.0 * std::pow(t, -2.5) *
                                    std::cos(1.3 * t));
        }
        write_series_csv(dir.file("tail.csv"), series, {});

        const auto r = dir.run(
            "envelope tail.csv --model powerlaw --window 10,60 --baseline 0 "
            "--out report.txt");
        CHECK(r.exit_code == 0);
        const std::string report = slurp(dir.file("report.txt"));
        CHECK(report.find("model = powerlaw") != std::string::npos);
        CHECK(report.find("exponent = ") != std::string::npos);

        // Parse the exponent line.
        const std::size_t pos = report.find("exponent = ");
        const double exponent =
            std::strtod(report.c_str() + pos + 11, nullptr);
        CHECK(exponent == doctest::Approx(-2.5).epsilon(0.02));
        const std::size_t ppos = report.find("prefactor = ");
        const double prefactor =
            std::strtod(report.c_str() + ppos + 12, nullptr);
        CHECK(prefactor == doctest::Approx(3.0).epsilon(0.05));
    }

    SUBCASE("missing input exits 1") {
        const auto r = dir.run("envelope absent.csv --model gaussian");
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("error:") != std::string::npos);
    }

    SUBCASE("unknown model exits 1") {
        TimeSeries series;
        series.method = "synthetic";
        for (int k = 0; k < 200; ++k) {
            const double t = 40.0 * k / 199.0;
            series.times.push_back(t);
            series.values.push_back(std::cos(1.3 * t));
        }
        write_series_csv(dir.file("sig.csv"), series, {});
        const auto r = dir.run("envelope sig.csv --model wavelet");
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("compare") {
    ScratchDir dir;
    spit(dir.file("reduced.json"), kReducedTwoLevel);

    SUBCASE("single method compares to itself with zero gap") {
        const auto r = dir.run(
            "compare --config reduced.json --method spectral --out c.csv");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("sup_diff = 0\n") != std::string::npos);
        const std::string text = slurp(dir.file("c.csv"));
        CHECK(text.find("# sup_diff=0\n") != std::string::npos);
        CHECK(text.find("t,spectral\n") != std::string::npos);
    }

    SUBCASE("exact against perturbative series") {
        const auto r = dir.run(
            "compare --config reduced.json --method spectral "
            "--method approx --out c.csv");
        CHECK(r.exit_code == 0);
        const std::size_t pos = r.out.find("sup_diff = ");
        REQUIRE(pos != std::string::npos);
        const double sup = std::strtod(r.out.c_str() + pos + 11, nullptr);
        CHECK(sup > 1e-4);
        CHECK(sup < 0.1);
        const std::string text = slurp(dir.file("c.csv"));
        CHECK(text.find("t,spectral,approx\n") != std::string::npos);
        CHECK(text.find("# methods=spectral,approx\n") != std::string::npos);
    }

    SUBCASE("method list is validated up front") {
        const auto r = dir.run(
            "compare --config reduced.json --method spectral "
            "--method bogus --out c.csv");
        CHECK(r.exit_code == 1);
        CHECK_FALSE(fs::exists(dir.file("c.csv")));
    }
}
