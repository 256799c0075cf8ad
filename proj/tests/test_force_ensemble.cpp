#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quartosc/errors.hpp"
#include "quartosc/force_ensemble.hpp"
#include "support/oracles.hpp"

using namespace quartosc;

TEST_CASE("gauss-hermite nodes integrate gaussian moments exactly") {
    // Raw rule: sum w t^{2j} = integral of t^{2j} e^{-t^2}
    //         = Gamma(j + 1/2) = sqrt(pi) (2j)! / (4^j j!).
    for (int k : {1, 2, 3, 5, 8, 16, 40}) {
        auto [t, w] = gauss_hermite(k);
        REQUIRE(static_cast<int>(t.size()) == k);
        for (int j = 0; 2 * j + 1 < 2 * k; ++j) {
            double s = 0.0;
            for (int i = 0; i < k; ++i) s += w[i] * std::pow(t[i], 2.0 * j);
            const double exact = std::exp(std::lgamma(j + 0.5));
            CHECK(s == doctest::Approx(exact).epsilon(1e-12));
        }
        // Odd moments vanish by the mirrored-node construction.
        double odd = 0.0;
        for (int i = 0; i < k; ++i) odd += w[i] * t[i] * t[i] * t[i];
        CHECK(std::abs(odd) < 1e-13);
    }
}

TEST_CASE("gauss-hermite grids are symmetric, ascending, positive-weight") {
    for (int k : {1, 7, 40, 160}) {
        auto [t, w] = gauss_hermite(k);
        for (int i = 0; i + 1 < k; ++i) CHECK(t[i] < t[i + 1]);
        for (int i = 0; i < k; ++i) {
            CHECK(w[i] > 0.0);
            CHECK(t[i] == doctest::Approx(-t[k - 1 - i]).epsilon(1e-14));
            CHECK(w[i] == doctest::Approx(w[k - 1 - i]).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(gauss_hermite(0), ConfigError);
}

TEST_CASE("gauss-hermite stays convergent at large node counts") {
    auto [t, w] = gauss_hermite(4000);
    double s0 = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        s0 += w[i];
        s2 += w[i] * t[i] * t[i];
    }
    CHECK(s0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-11));
    CHECK(s2 / s0 == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("continuum density is the normalized gaussian") {
    CHECK(continuum_density(1.0, 0.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
    for (double phi : {0.3, 1.7, -2.2}) {
        CHECK(continuum_density(1.0, phi) ==
              doctest::Approx(continuum_density(1.0, -phi)));
    }
    // Mass over +-8 spreads for a few widths.
    for (double d : {0.1, 0.7, 3.0}) {
        const double mass = oracle::simpson(
            [&](double phi) { return continuum_density(d, phi); }, -8.0 * d,
            8.0 * d, 4000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(continuum_density(0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(continuum_density(-1.0, 0.0), ConfigError);
}

TEST_CASE("quadrature ensemble realizes the gaussian force average") {
    SUBCASE("zero spread collapses to a single node") {
        const ForceEnsemble e = quadrature_ensemble(0.0, 40);
        REQUIRE(e.nodes.size() == 1);
        CHECK(e.nodes[0].phi == 0.0);
        CHECK(e.nodes[0].weight == 1.0);
    }
    SUBCASE("moments match the target distribution") {
        for (double d : {0.1, 0.7}) {
            for (int k : {10, 40}) {
                const ForceEnsemble e = quadrature_ensemble(d, k);
                CHECK(e.weight_sum() == doctest::Approx(1.0).epsilon(1e-14));
                CHECK(std::abs(e.first_moment()) < 1e-14);
                CHECK(e.second_moment() ==
                      doctest::Approx(d * d).epsilon(1e-12));
                CHECK(e.variance_target == doctest::Approx(d * d));
            }
        }
    }
    SUBCASE("polynomial exactness up to degree 2K-1") {
        // Gaussian moments: E[phi^{2j}] = (2j-1)!! d^{2j}.
        const double d = 0.37;
        for (int k = 1; k <= 8; ++k) {
            const ForceEnsemble e = quadrature_ensemble(d, k);
            for (int j = 0; 2 * j <= 2 * k - 1; ++j) {
                double s = 0.0;
                for (const auto& node : e.nodes) {
                    s += node.weight * std::pow(node.phi, 2.0 * j);
                }
                double dfact = 1.0;
                for (int q = 2 * j - 1; q > 1; q -= 2) dfact *= q;
                CHECK(s == doctest::Approx(dfact * std::pow(d, 2.0 * j))
                               .epsilon(1e-11));
            }
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(quadrature_ensemble(-0.1, 10), ConfigError);
        CHECK_THROWS_AS(quadrature_ensemble(1.0, 0), ConfigError);
    }
}

TEST_CASE("discrete ensemble mirrors the binomial force list") {
    const auto bec = CondensateParams::discrete(8, 0.5);
    const ForceEnsemble e = discrete_ensemble(bec);
    REQUIRE(e.nodes.size() == 9);
    CHECK(e.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(e.first_moment()) < 1e-10);
    CHECK(e.second_moment() ==
          doctest::Approx(bec.force_variance()).epsilon(1e-8));
    CHECK_THROWS_AS(discrete_ensemble(CondensateParams::continuum(0.1)),
                    ConfigError);
}

TEST_CASE("ensemble_for dispatches on the condensate mode") {
    const auto osc = OscillatorParams{1.0, 1.3, 0.05};
    const auto grid = SimulationGrid::uniform(1.0, 2);

    const auto cont = validate(osc, CondensateParams::continuum(0.1),
                               StateSpec::from_coherent(1.0, 0.0), grid);
    CHECK(ensemble_for(cont).nodes.size() == 40);

    const auto disc = validate(osc, CondensateParams::discrete(6, 0.05),
                               StateSpec::from_coherent(1.0, 0.0), grid);
    CHECK(ensemble_for(disc).nodes.size() == 7);
}
