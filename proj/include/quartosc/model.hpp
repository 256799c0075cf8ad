#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "quartosc/errors.hpp"

// Model types and validation. Everything downstream works in atomic-style
// units with hbar = 1; masses, frequencies and times are plain doubles in
// those units.

namespace quartosc {

inline constexpr double hbar = 1.0;

// Quartic oscillator H = p^2/2m + (m w0^2/2) x^2 + (beta/4) x^4.
struct OscillatorParams {
    double m = 1.0;
    double omega0 = 1.0;
    double beta = 0.0;
};

enum class CondensateMode { Discrete, Continuum };

// Source of the random force phi coupling through phi*X. Discrete mode is a
// symmetric binomial ladder phi_n = hbar*omega1*(N - 2n); continuum mode is a
// zero-mean Gaussian with spread delta_phi.
struct CondensateParams {
    CondensateMode mode = CondensateMode::Continuum;
    int n_atoms = 0;         // discrete only
    double omega1 = 0.0;     // discrete only, coupling rate per atom
    double delta_phi = 0.0;  // continuum only, >= 0; 0 means no force

    static CondensateParams discrete(int n_atoms, double omega1);
    static CondensateParams continuum(double delta_phi);

    // Var[phi]: N*(hbar*omega1)^2 for discrete, delta_phi^2 for continuum.
    double force_variance() const;
};

// delta_phi equivalent to a dimensionless coupling kappa via
// delta_phi^2 = 2 m hbar w0 kappa^2. Convenience only; nothing requires it.
double delta_phi_from_kappa(double kappa, const OscillatorParams& osc);

struct CoherentSpec {
    double x0 = 0.0;
    double p0 = 0.0;
};

// Initial oscillator state: either a coherent state (x0, p0) or explicit
// number-basis coefficients.
struct StateSpec {
    std::optional<CoherentSpec> coherent;
    std::vector<std::complex<double>> coefficients;

    static StateSpec from_coherent(double x0, double p0);
    static StateSpec from_coefficients(std::vector<std::complex<double>> c);
};

struct SimulationGrid {
    std::vector<double> times;  // non-empty, strictly increasing
    int basis_size = 120;       // truncation M of the number basis
    int quad_nodes = 40;        // Gauss-Hermite node count K for continuum

    static SimulationGrid uniform(double t_max, int n_samples,
                                  int basis_size = 120, int quad_nodes = 40);
};

struct ValidatedConfig {
    OscillatorParams osc;
    CondensateParams bec;
    StateSpec state;
    SimulationGrid grid;
    // State expanded in the number basis, unit norm, length <= basis_size.
    std::vector<std::complex<double>> coefficients;
    // Discrete mode only: materialized (phi, weight) list, empty otherwise.
    std::vector<std::pair<double, double>> force_list;
    std::vector<std::string> warnings;
};

// Binomial force ladder of a discrete condensate as (phi_n, weight) pairs,
// phi_n = hbar*omega1*(N - 2n), weight C(N,n)/2^N.
std::vector<std::pair<double, double>> discrete_force_list(
    const CondensateParams& bec);

// Number-basis expansion of the coherent state (x0, p0), truncated where the
// cumulative tail probability drops below `tail` and then renormalized.
std::vector<std::complex<double>> coherent_coefficients(
    const OscillatorParams& osc, double x0, double p0, double tail = 1e-12,
    int max_terms = 4096);

// <X> and <P> of a number-basis expansion.
double state_mean_position(const std::vector<std::complex<double>>& c,
                           const OscillatorParams& osc);
double state_mean_momentum(const std::vector<std::complex<double>>& c,
                           const OscillatorParams& osc);

// beta * x_ref^2 / (m w0^2) with x_ref the coherent amplitude (or the rms
// extent of an explicit state). Rough strength of the quartic term against
// the harmonic one at the relevant excursion.
double anharmonicity_ratio(const OscillatorParams& osc, const StateSpec& state);

// Full cross-field validation. Throws ConfigError; appends soft issues
// (large anharmonicity, near-edge truncation) to warnings.
ValidatedConfig validate(const OscillatorParams& osc,
                         const CondensateParams& bec, const StateSpec& state,
                         const SimulationGrid& grid,
                         double anharmonicity_warn_threshold = 0.3);

}  // namespace quartosc
