#pragma once

#include <complex>
#include <string>
#include <vector>

#include "quartosc/model.hpp"
#include "quartosc/time_series.hpp"

// Analytic approximation of the exact series for two-level initial states:
// second-order force expansion of the branch energies, Gaussian force
// integral done in closed form. Valid for modest force spreads.

namespace quartosc {

// First-order-in-beta level structure and the quadratic force curvatures
// E_i(phi) ~ E_i + gamma_i phi^2.
struct PerturbativeSpectrum {
    std::vector<double> levels;      // E_i at phi = 0
    std::vector<double> curvatures;  // gamma_i
    std::string warning;             // non-empty if beta is out of range

    // omega_{n,n+1} = E_n - E_{n+1} (negative, ~ -omega0).
    double transition_frequency(std::size_t n) const;
};

// G_{i,j}(phi) = g0 + g2 phi^2; odd powers vanish by parity.
struct OverlapPolynomial {
    int i = 0;
    int j = 0;
    std::complex<double> g0;
    std::complex<double> g2;
};

struct GCoefficients {
    OverlapPolynomial g01;
    OverlapPolynomial g12;
};

// Levels and curvatures for i = 0..i_max; warns when h*beta/(m^2 w0^3)
// reaches 0.1, where first order in beta stops being trustworthy.
PerturbativeSpectrum perturbative_spectrum(const OscillatorParams& osc,
                                           int i_max);

// Wavefunction value of the nth harmonic eigenstate displaced to the
// force-shifted well center: psi_n(x - phi/(m w0^2)).
double displaced_eigenstate(int n, double phi, double x,
                            const OscillatorParams& osc);

// Overlap-polynomial coefficients for the state c0|0> + c1|1>, pairs (0,1)
// and (1,2). Requires |c0|^2 + |c1|^2 = 1 within 1e-8.
GCoefficients g_coefficients(const std::complex<double>& c0,
                             const std::complex<double>& c1,
                             const OscillatorParams& osc);

// Two-level mean position: stationary part plus the (0,1) and (1,2)
// transition terms with their Gaussian force integrals. `stationary` is
// supplied by the caller (the exact engine computes it); delta_phi = 0
// degenerates to undamped oscillation.
TimeSeries approx_mean_position(const std::complex<double>& c0,
                                const std::complex<double>& c1,
                                const OscillatorParams& osc, double delta_phi,
                                const std::vector<double>& times,
                                double stationary);

// Complex envelope of the leading-term approximation; the signal oscillates
// inside +-|envelope| around the stationary value. Monotonically shrinking
// modulus, algebraic 1/sqrt(t) tail.
std::complex<double> envelope_aprox0(const std::complex<double>& c0,
                                     const std::complex<double>& c1,
                                     const OscillatorParams& osc,
                                     double delta_phi, double t);

}  // namespace quartosc
