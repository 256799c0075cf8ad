#pragma once

#include <vector>

#include "quartosc/model.hpp"
#include "quartosc/time_series.hpp"

// Reference classical integrator and the closed-form few-harmonic solution
// of the free quartic oscillator. Exists mostly as an oracle: the
// quasiclassical branch trajectories are validated against it.

namespace quartosc {

struct ClassicalTrajectory {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> momenta;
    double phi = 0.0;
    double step = 0.0;
};

// 1e-3 of the harmonic period; small enough that RK4 phase error stays far
// below the tolerances used anywhere in the project.
double default_step(const OscillatorParams& osc);

// H(x, p; phi) = p^2/2m + (m w0^2/2) x^2 + (beta/4) x^4 + phi x.
double total_energy(double x, double p, double phi,
                    const OscillatorParams& osc);

// Fixed-step RK4 of m x'' = -m w0^2 x - beta x^3 - phi from (x0, p0) to
// t_end. h <= 0 uses default_step. Throws StepTooLarge when the conserved
// energy drifts beyond 1e-8 (relative, scaled with trajectory length).
ClassicalTrajectory integrate(double x0, double p0, double phi,
                              const OscillatorParams& osc, double t_end,
                              double h = 0.0);

// Positions at the requested times (strictly increasing, from t >= 0),
// marching with step h and landing exactly on each sample.
TimeSeries integrate_at(double x0, double p0, double phi,
                        const OscillatorParams& osc,
                        const std::vector<double>& times, double h = 0.0);

// Closed-form fundamental frequency of x'' = -w0^2 x - (beta/m) x^3 with
// x(0)=x0, x'(0)=0 (exact radical, not the small-beta expansion).
double appendix_frequency(double x0, const OscillatorParams& osc);

// Three-harmonic closed-form solution with the appendix_frequency carrier.
double appendix_solution(double x0, const OscillatorParams& osc, double t);

}  // namespace quartosc
