#include "quartosc/quantum_approx.hpp"

#include <cmath>
#include <cstdio>

namespace quartosc {

namespace {

using cplx = std::complex<double>;

constexpr double pi = 3.14159265358979323846;

}  // namespace

double PerturbativeSpectrum::transition_frequency(std::size_t n) const {
    if (n + 1 >= levels.size()) {
        throw ConfigError(ErrorCode::BasisTooSmall,
                          "transition " + std::to_string(n) + "," +
                              std::to_string(n + 1) +
                              " beyond computed levels");
    }
    return (levels[n] - levels[n + 1]) / hbar;
}

PerturbativeSpectrum perturbative_spectrum(const OscillatorParams& osc,
                                           int i_max) {
    if (i_max < 0) {
        throw ConfigError(ErrorCode::BasisTooSmall, std::to_string(i_max));
    }
    PerturbativeSpectrum s;
    const double m = osc.m;
    const double w = osc.omega0;
    const double small = hbar * osc.beta / (m * m * w * w * w);
    if (small >= 0.1) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "perturbative spectrum outside its regime: "
                      "hbar*beta/(m^2 w0^3) = %.3g >= 0.1",
                      small);
        s.warning = buf;
    }
    s.levels.resize(static_cast<std::size_t>(i_max) + 1);
    s.curvatures.resize(static_cast<std::size_t>(i_max) + 1);
    for (int i = 0; i <= i_max; ++i) {
        const double di = i;
        s.levels[static_cast<std::size_t>(i)] =
            hbar * w * (di + 0.5) +
            3.0 * hbar * hbar * osc.beta * (di * di + di + 0.5) /
                (8.0 * m * m * w * w);
        s.curvatures[static_cast<std::size_t>(i)] =
            -1.0 / (2.0 * m * w * w) +
            3.0 * hbar * osc.beta * (2.0 * di + 1.0) /
                (4.0 * m * m * m * std::pow(w, 5));
    }
    return s;
}

double displaced_eigenstate(int n, double phi, double x,
                            const OscillatorParams& osc) {
    if (n < 0) {
        throw ConfigError(ErrorCode::BasisTooSmall, std::to_string(n));
    }
    const double m = osc.m;
    const double w = osc.omega0;
    const double y = std::sqrt(m * w / hbar) * (x - phi / (m * w * w));
    // Orthonormal Hermite-function recurrence; keeps values bounded for
    // large n where the bare polynomial would overflow.
    double u0 = std::pow(m * w / (pi * hbar), 0.25) * std::exp(-0.5 * y * y);
    if (n == 0) return u0;
    double u1 = y * std::sqrt(2.0) * u0;
    for (int k = 1; k < n; ++k) {
        const double u2 = y * std::sqrt(2.0 / (k + 1.0)) * u1 -
                          std::sqrt(k / (k + 1.0)) * u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

GCoefficients g_coefficients(const cplx& c0, const cplx& c1,
                             const OscillatorParams& osc) {
    const double norm2 = std::norm(c0) + std::norm(c1);
    if (std::fabs(norm2 - 1.0) > 1e-8) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "|c0|^2 + |c1|^2 = %.12g", norm2);
        throw ConfigError(ErrorCode::UnnormalizedState, buf);
    }
    const double m = osc.m;
    const double w = osc.omega0;
    const double root_up = std::sqrt(hbar / (2.0 * m * w));
    const double root_dn = std::sqrt(2.0 * m * w / hbar);
    const double denom = 4.0 * m * m * std::pow(w, 4);

    GCoefficients g;
    g.g01.i = 0;
    g.g01.j = 1;
    g.g01.g0 = root_up * c0 * std::conj(c1);
    g.g01.g2 = -root_dn * (std::conj(c0) * c1 + c0 * std::conj(c1)) / denom;
    g.g12.i = 1;
    g.g12.j = 2;
    g.g12.g0 = 0.0;
    g.g12.g2 = root_dn * (std::conj(c0) * c1 + 2.0 * c0 * std::conj(c1)) /
               denom;
    return g;
}

TimeSeries approx_mean_position(const cplx& c0, const cplx& c1,
                                const OscillatorParams& osc, double delta_phi,
                                const std::vector<double>& times,
                                double stationary) {
    if (delta_phi < 0.0) {
        throw ConfigError(ErrorCode::NonPositiveSpread,
                          std::to_string(delta_phi));
    }
    if (times.empty()) {
        throw ConfigError(ErrorCode::EmptyTimeGrid, "no sample times");
    }
    const GCoefficients g = g_coefficients(c0, c1, osc);
    const PerturbativeSpectrum spec = perturbative_spectrum(osc, 2);

    const double m = osc.m;
    const double w = osc.omega0;
    const double v = delta_phi * delta_phi;
    // The force integral gives terms g0 D^{-1/2} + (g2/2) D^{-3/2} scaled by
    // (2 dphi^2)^{-1/2}, with D = 1/(2 dphi^2) + 1/(2 m hbar w0^3)
    // + i (gamma_n - gamma_{n+1}) t. Rescaling by Dt = 2 dphi^2 D keeps the
    // dphi -> 0 limit finite: term = g0 Dt^{-1/2} + g2 dphi^2 Dt^{-3/2}.
    const double dt_re = 1.0 + v / (m * hbar * w * w * w);

    const OverlapPolynomial* pairs[2] = {&g.g01, &g.g12};
    TimeSeries out;
    out.times = times;
    out.values.assign(times.size(), 0.0);
    out.method = "approx";
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        cplx acc = 0.0;
        for (int n = 0; n < 2; ++n) {
            const OverlapPolynomial& gp = *pairs[n];
            const double wn =
                spec.transition_frequency(static_cast<std::size_t>(n));
            const double dgamma = spec.curvatures[static_cast<std::size_t>(n)] -
                                  spec.curvatures[static_cast<std::size_t>(n) +
                                                  1];
            const cplx dt(dt_re, 2.0 * v * dgamma * t / hbar);
            const cplx root = std::sqrt(dt);  // principal; Re(dt) >= 1 > 0
            const cplx carrier = std::polar(1.0, -wn * t);
            acc += carrier * (gp.g0 / root + gp.g2 * v / (dt * root));
        }
        out.values[j] = stationary + 2.0 * acc.real();
    }
    return out;
}

cplx envelope_aprox0(const cplx& c0, const cplx& c1,
                     const OscillatorParams& osc, double delta_phi,
                     double t) {
    if (delta_phi < 0.0) {
        throw ConfigError(ErrorCode::NonPositiveSpread,
                          std::to_string(delta_phi));
    }
    const GCoefficients g = g_coefficients(c0, c1, osc);
    const double m = osc.m;
    const double w = osc.omega0;
    const double v = delta_phi * delta_phi;
    const cplx dt(1.0 + 2.0 * v / (2.0 * m * hbar * w * w * w),
                  3.0 * v * hbar * osc.beta / (m * m * m * std::pow(w, 5)) *
                      t);
    return 2.0 * g.g01.g0 / std::sqrt(dt);
}

}  // namespace quartosc
