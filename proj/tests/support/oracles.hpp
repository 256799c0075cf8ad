#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "quartosc/model.hpp"

// Independent reference implementations used only by tests: quadrature,
// harmonic-oscillator wavefunctions, a defining-integral phase-space
// transform, and signal helpers. Deliberately brute force; speed does not
// matter here.

namespace oracle {

// Composite Simpson rule with n subintervals (rounded up to even).
template <typename F>
auto simpson(F f, double a, double b, int n) -> decltype(f(a)) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    auto sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    }
    return sum * (h / 3.0);
}

template <typename F>
auto trapezoid(F f, double a, double b, int n) -> decltype(f(a)) {
    const double h = (b - a) / n;
    auto sum = (f(a) + f(b)) * 0.5;
    for (int i = 1; i < n; ++i) sum += f(a + i * h);
    return sum * h;
}

// Orthonormal Hermite function: integral of h_n^2 over dy is 1.
double hermite_function(int n, double y);

// nth harmonic eigenfunction of the oscillator, normalized over dx.
double harmonic_eigenfunction(int n, double x,
                              const quartosc::OscillatorParams& osc);

// Weyl transform of |n><m| by direct quadrature of
// (1/2 pi hbar) * integral dy e^{-ipy/hbar} psi_n(x+y/2) psi_m(x-y/2).
std::complex<double> wigner_integral(int n, int m, double x, double p,
                                     const quartosc::OscillatorParams& osc);

Eigen::MatrixXd random_symmetric(int n, unsigned seed);

// Coherent-state number-basis amplitudes, n_terms of them, not normalized
// beyond the exact Poisson weights.
std::vector<std::complex<double>> coherent_poisson(
    const quartosc::OscillatorParams& osc, double x0, double p0, int n_terms);

// Times where the signal crosses the baseline, linearly interpolated.
std::vector<double> zero_crossings(const std::vector<double>& t,
                                   const std::vector<double>& v,
                                   double baseline);

// Carrier angular frequency from the least-squares slope of crossing index
// against crossing time (half period per crossing).
double carrier_frequency(const std::vector<double>& t,
                         const std::vector<double>& v, double baseline);

}  // namespace oracle
