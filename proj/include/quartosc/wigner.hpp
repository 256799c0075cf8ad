#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "quartosc/model.hpp"
#include "quartosc/spectral.hpp"

// Phase-space rendering: Fock-basis Wigner kernels evaluated through
// generalized Laguerre polynomials, assembled into W(x, p) grids from
// density coefficients.

namespace quartosc {

// Generalized Laguerre polynomial L_n^a(x) by upward recurrence.
double laguerre(int n, double a, double x);

// Weyl transform of |n><m|. Hermitian in (n, m): kernel(m, n) is the
// complex conjugate of kernel(n, m).
std::complex<double> wigner_kernel(int n, int m, double x, double p,
                                   const OscillatorParams& osc);

struct PhaseSpaceGridSpec {
    int nx = 201;
    int np = 201;
    double x_half = 0.0;  // grid spans [-x_half, x_half]
    double p_half = 0.0;

    // Window wide enough for the initial state plus quantum fuzz: x_half =
    // 6 max(sqrt(hbar/m w0), |x0| + |p0|/m w0), p_half = m w0 x_half.
    static PhaseSpaceGridSpec defaults_for(const ValidatedConfig& config);
};

struct PhaseSpaceGrid {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> p;
    // value(i, j) = W(x[i], p[j])
    Eigen::MatrixXd value;

    // Trapezoidal integral over the grid; 1 for a well-resolved state.
    double normalization() const;
    double min_value() const;
    double max_value() const;
    // Trapezoidal x-marginal, integrating out p.
    std::vector<double> x_marginal() const;
};

// Renders the Wigner function of Hermitian density coefficients. Throws
// GridTooCoarse if and only if the trapezoidal normalization misses 1 by
// more than 1e-4.
PhaseSpaceGrid render(const DensityCoefficients& coeffs,
                      const PhaseSpaceGridSpec& spec,
                      const OscillatorParams& osc);

}  // namespace quartosc
