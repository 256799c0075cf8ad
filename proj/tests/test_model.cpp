#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "quartosc/errors.hpp"
#include "quartosc/model.hpp"
#include "support/oracles.hpp"

using namespace quartosc;
using cplx = std::complex<double>;

namespace {

OscillatorParams fig3_osc() { return {1.0, 1.3, 0.05}; }

SimulationGrid small_grid() { return SimulationGrid::uniform(10.0, 11); }

}  // namespace

TEST_CASE("uniform grid spans 0..t_max inclusive") {
    const SimulationGrid g = SimulationGrid::uniform(2.0, 5);
    REQUIRE(g.times.size() == 5);
    CHECK(g.times.front() == doctest::Approx(0.0));
    CHECK(g.times.back() == doctest::Approx(2.0));
    CHECK(g.times[1] == doctest::Approx(0.5));
    const SimulationGrid one = SimulationGrid::uniform(3.0, 1);
    REQUIRE(one.times.size() == 1);
    CHECK(one.times[0] == doctest::Approx(3.0));
}

TEST_CASE("fig3-style configuration is accepted") {
    const auto cfg =
        validate(fig3_osc(), CondensateParams::continuum(0.1),
                 StateSpec::from_coherent(3.0, 0.0), small_grid());
    CHECK(cfg.coefficients.size() >= 10);
    CHECK(cfg.force_list.empty());
}

TEST_CASE("parameter validation rejects degenerate oscillators") {
    const auto bec = CondensateParams::continuum(0.1);
    const auto state = StateSpec::from_coherent(0.0, 0.0);
    const auto grid = small_grid();

    auto expect = [&](OscillatorParams osc, ErrorCode code) {
        try {
            validate(osc, bec, state, grid);
            FAIL("expected rejection");
        } catch (const ConfigError& e) {
            CHECK(e.code() == code);
        }
    };
    expect({0.0, 1.3, 0.05}, ErrorCode::NonPositiveMass);
    expect({-1.0, 1.3, 0.05}, ErrorCode::NonPositiveMass);
    expect({1.0, 0.0, 0.05}, ErrorCode::NonPositiveFrequency);
    expect({1.0, -2.0, 0.05}, ErrorCode::NonPositiveFrequency);
    expect({1.0, 1.3, -0.05}, ErrorCode::NegativeBeta);
    expect({1.0, std::nan(""), 0.05}, ErrorCode::NonPositiveFrequency);
    expect({1.0, 1.3, std::nan("")}, ErrorCode::NegativeBeta);
}

TEST_CASE("condensate and grid validation") {
    const auto osc = fig3_osc();
    const auto state = StateSpec::from_coherent(0.0, 0.0);

    CHECK_THROWS_AS(validate(osc, CondensateParams::discrete(0, 1.0), state,
                             small_grid()),
                    ConfigError);
    CHECK_THROWS_AS(validate(osc, CondensateParams::continuum(-0.5), state,
                             small_grid()),
                    ConfigError);

    SimulationGrid empty = small_grid();
    empty.times.clear();
    try {
        validate(osc, CondensateParams::continuum(0.1), state, empty);
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::EmptyTimeGrid);
    }

    SimulationGrid bad = small_grid();
    bad.times = {0.0, 1.0, 1.0};
    try {
        validate(osc, CondensateParams::continuum(0.1), state, bad);
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::NonMonotonicTimes);
    }

    SimulationGrid few_nodes = small_grid();
    few_nodes.quad_nodes = 0;
    CHECK_THROWS_AS(
        validate(osc, CondensateParams::continuum(0.1), state, few_nodes),
        ConfigError);

    SimulationGrid tiny_basis = small_grid();
    tiny_basis.basis_size = 1;
    try {
        validate(osc, CondensateParams::continuum(0.1), state, tiny_basis);
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::BasisTooSmall);
    }
}

TEST_CASE("state must be exactly one of coherent or explicit") {
    const auto osc = fig3_osc();
    const auto bec = CondensateParams::continuum(0.1);

    StateSpec both = StateSpec::from_coherent(1.0, 0.0);
    both.coefficients = {cplx(1.0, 0.0)};
    CHECK_THROWS_AS(validate(osc, bec, both, small_grid()), ConfigError);

    StateSpec neither;
    CHECK_THROWS_AS(validate(osc, bec, neither, small_grid()), ConfigError);

    StateSpec off_norm = StateSpec::from_coefficients({cplx(0.5, 0.0)});
    try {
        validate(osc, bec, off_norm, small_grid());
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::UnnormalizedState);
    }

    // Norm within 1e-8 is accepted and snapped to exactly 1.
    const double eps = 1e-9;
    StateSpec near_norm = StateSpec::from_coefficients(
        {cplx(std::sqrt(1.0 + eps), 0.0)});
    const auto cfg = validate(osc, bec, near_norm, small_grid());
    double norm = 0.0;
    for (const cplx& c : cfg.coefficients) norm += std::norm(c);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coherent expansion matches the Poisson oracle") {
    const auto osc = fig3_osc();
    const auto c = coherent_coefficients(osc, 3.0, 0.0);
    const auto ref = oracle::coherent_poisson(osc, 3.0, 0.0,
                                              static_cast<int>(c.size()));
    // Mean occupation m w0 x0^2 / (2 hbar) = 5.85 for the fig3 state.
    double nbar = 0.0;
    double norm = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        nbar += static_cast<double>(n) * std::norm(c[n]);
        norm += std::norm(c[n]);
        CHECK(std::abs(c[n] - ref[n]) < 1e-12);
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(nbar == doctest::Approx(1.3 * 9.0 / 2.0).epsilon(1e-9));
}

TEST_CASE("coherent round trip recovers the phase-space center") {
    const auto osc = fig3_osc();
    for (const auto& [x0, p0] :
         {std::pair{3.0, 0.0}, {0.0, 2.0}, {-1.5, 0.75}, {0.0, 0.0}}) {
        const auto c = coherent_coefficients(osc, x0, p0);
        CHECK(state_mean_position(c, osc) == doctest::Approx(x0).epsilon(1e-8));
        CHECK(state_mean_momentum(c, osc) == doctest::Approx(p0).epsilon(1e-8));
    }
}

TEST_CASE("discrete force list is the symmetric binomial ladder") {
    const auto two = discrete_force_list(CondensateParams::discrete(2, 1.0));
    REQUIRE(two.size() == 3);
    CHECK(two[0].first == doctest::Approx(2.0));
    CHECK(two[1].first == doctest::Approx(0.0));
    CHECK(two[2].first == doctest::Approx(-2.0));
    CHECK(two[0].second == doctest::Approx(0.25));
    CHECK(two[1].second == doctest::Approx(0.5));
    CHECK(two[2].second == doctest::Approx(0.25));

    const auto one = discrete_force_list(CondensateParams::discrete(1, 0.7));
    REQUIRE(one.size() == 2);
    CHECK(one[0].second == doctest::Approx(0.5));
    CHECK(one[1].second == doctest::Approx(0.5));

    for (int n : {1, 2, 7, 64, 511}) {
        const auto list =
            discrete_force_list(CondensateParams::discrete(n, 0.31));
        double wsum = 0.0;
        double var = 0.0;
        for (const auto& [phi, w] : list) {
            wsum += w;
            var += w * phi * phi;
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
        // Var[phi] = N (hbar omega1)^2 for the balanced preparation.
        CHECK(var ==
              doctest::Approx(n * 0.31 * 0.31 * hbar * hbar).epsilon(1e-10));
        // Multiset symmetry {phi} = {-phi}.
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& mirror = list[list.size() - 1 - i];
            CHECK(list[i].first == doctest::Approx(-mirror.first));
            CHECK(list[i].second == doctest::Approx(mirror.second));
        }
    }
}

TEST_CASE("kappa conversion uses delta_phi^2 = 2 m hbar w0 kappa^2") {
    const auto osc = fig3_osc();
    const double k = 0.4;
    const double d = delta_phi_from_kappa(k, osc);
    CHECK(d * d == doctest::Approx(2.0 * osc.m * hbar * osc.omega0 * k * k));
    CHECK(delta_phi_from_kappa(-k, osc) == doctest::Approx(d));
}

TEST_CASE("anharmonicity ratio and its warning") {
    const auto osc = fig3_osc();
    CHECK(anharmonicity_ratio(osc, StateSpec::from_coherent(3.0, 0.0)) ==
          doctest::Approx(0.05 * 9.0 / 1.69).epsilon(1e-12));

    // fig3 sits just under the default 0.3 threshold: no warning.
    const auto quiet =
        validate(osc, CondensateParams::continuum(0.1),
                 StateSpec::from_coherent(3.0, 0.0), small_grid());
    for (const auto& w : quiet.warnings) {
        CHECK(w.find("anharmonicity") == std::string::npos);
    }

    // A larger amplitude crosses it.
    const auto loud =
        validate(osc, CondensateParams::continuum(0.1),
                 StateSpec::from_coherent(4.0, 0.0), small_grid());
    bool found = false;
    for (const auto& w : loud.warnings) {
        if (w.find("anharmonicity") != std::string::npos) found = true;
    }
    CHECK(found);
}

TEST_CASE("basis guard rejects grids that cannot hold the state") {
    const auto osc = fig3_osc();
    const auto bec = CondensateParams::continuum(0.1);

    // Explicit state reaching level 30 needs M >= 40.
    std::vector<cplx> c(31, 0.0);
    c[0] = std::sqrt(0.5);
    c[30] = std::sqrt(0.5);
    SimulationGrid grid = small_grid();
    grid.basis_size = 35;
    try {
        validate(osc, bec, StateSpec::from_coefficients(c), grid);
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::BasisTooSmall);
    }

    // Strong forces push the turning point past a small basis.
    SimulationGrid m40 = small_grid();
    m40.basis_size = 40;
    CHECK_THROWS_AS(validate(osc, CondensateParams::continuum(8.0),
                             StateSpec::from_coherent(3.0, 0.0), m40),
                    ConfigError);
    // The same basis is fine without the force.
    CHECK_NOTHROW(validate(osc, CondensateParams::continuum(0.0),
                           StateSpec::from_coherent(1.0, 0.0), m40));
}

TEST_CASE("force variance covers both modes") {
    CHECK(CondensateParams::continuum(0.7).force_variance() ==
          doctest::Approx(0.49));
    CHECK(CondensateParams::discrete(16, 0.25).force_variance() ==
          doctest::Approx(16 * 0.0625));
    CHECK(CondensateParams::continuum(0.0).force_variance() == 0.0);
}
