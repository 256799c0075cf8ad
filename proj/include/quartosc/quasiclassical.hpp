#pragma once

#include <string>
#include <vector>

#include "quartosc/model.hpp"
#include "quartosc/time_series.hpp"

// Quasiclassical route: propagate the initial Wigner distribution along
// frequency-shifted classical orbits and average over the Gaussian force.
// Two independent realizations of the same phase-space integral are
// provided (triple quadrature and an analytic Gaussian closed form); their
// agreement is the correctness arbiter for both.

namespace quartosc {

// Characteristic decay scales of the averaged signal. harmonic_limit marks
// beta = 0, where every scale is infinite and omega1 = omega0.
struct TimeScales {
    double t_beta = 0.0;   // anharmonic dephasing scale
    double t_phi = 0.0;    // force-spread dephasing scale
    double t_g = 0.0;      // short-time Gaussian decay scale
    double omega1 = 0.0;   // shifted carrier frequency
    bool harmonic_limit = false;
};

// Prediction plus a validity flag (false when t is outside the asymptotic
// window the formula was derived for).
struct AsymptoticValue {
    double value = 0.0;
    bool valid = false;
};

// H0(x, p; phi) = p^2/2m + (m w0^2/2) x^2 + phi x. The quartic term is not
// included; this is the reference energy the frequency shift expands around.
double classical_energy(double x, double p, double phi,
                        const OscillatorParams& osc);

// First-order frequency detuning: omega1 = omega0 (1 + beta * detuning).
double detuning(double x, double p, double phi, const OscillatorParams& osc);

// One classical branch: harmonic orbit around the force-shifted center at
// the detuned frequency. Appends an AnharmonicityOutOfRange note to
// `warnings` when beta*(amplitude)^2/(m w0^2) exceeds 0.3.
double lindstedt_position(double x, double p, double phi, double t,
                          const OscillatorParams& osc,
                          std::vector<std::string>* warnings = nullptr);

// Triple Gauss-Hermite quadrature over (x, p, phi) of the branch position,
// weighted by the coherent-state Wigner function and the Gaussian force.
// node_count <= 0 uses config.grid.quad_nodes. Coherent continuum configs
// only (NonCoherentState / WrongMode otherwise).
TimeSeries mean_position_quadrature(const ValidatedConfig& config,
                                    const std::vector<double>& times,
                                    int node_count = 0,
                                    std::vector<std::string>* warnings =
                                        nullptr);

// Analytic evaluation of the same integral via a Gaussian generating
// function: <X(t)> = Re[phi_bar]/m w0^2 + Re[x_bar] + Im[p_bar]/m w0 with
// z_bar = Z(0) A^{-1} B. Throws SingularGaussian if |det A| < 1e-30. The
// half-power prefactor follows the branch continuous from the positive real
// root at t = 0.
TimeSeries mean_position_closed_form(const ValidatedConfig& config,
                                     const std::vector<double>& times,
                                     std::vector<std::string>* warnings =
                                         nullptr);

// t_beta, t_phi, the short-time Gaussian scale t_G and the shifted carrier
// omega1, all evaluated at the classical point of the initial state.
TimeScales time_scales(const ValidatedConfig& config);

// Case-limit envelopes of the averaged signal. `valid` is true inside the
// window each asymptotic form was derived for (t <= min(t_beta, t_phi)/2,
// resp. t >= 10 max(t_beta, t_phi)).
AsymptoticValue short_time_prediction(const ValidatedConfig& config, double t);
AsymptoticValue long_time_prediction(const ValidatedConfig& config, double t);

}  // namespace quartosc
