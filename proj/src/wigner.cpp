#include "quartosc/wigner.hpp"

#include <cmath>

#include "parallel_for.hpp"

namespace quartosc {

namespace {

using cplx = std::complex<double>;

constexpr double pi = 3.14159265358979323846;

}  // namespace

double laguerre(int n, double a, double x) {
    if (n < 0) {
        throw ConfigError(ErrorCode::BasisTooSmall, std::to_string(n));
    }
    if (n == 0) return 1.0;
    double lkm = 1.0;
    double lk = 1.0 + a - x;
    for (int k = 1; k < n; ++k) {
        const double lkp =
            ((2.0 * k + 1.0 + a - x) * lk - (k + a) * lkm) / (k + 1.0);
        lkm = lk;
        lk = lkp;
    }
    return lk;
}

cplx wigner_kernel(int n, int m, double x, double p,
                   const OscillatorParams& osc) {
    if (n < 0 || m < 0) {
        throw ConfigError(ErrorCode::BasisTooSmall, "negative level index");
    }
    if (n > m) return std::conj(wigner_kernel(m, n, x, p, osc));

    const cplx z(x * std::sqrt(osc.m * osc.omega0 / hbar),
                 p / std::sqrt(osc.m * hbar * osc.omega0));
    const double z2 = std::norm(z);
    const int d = m - n;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;

    if (z2 == 0.0) {
        // (sqrt(2)|z|)^d kills every off-diagonal kernel at the origin.
        if (d != 0) return 0.0;
        return sign / (pi * hbar);
    }
    // Log-space magnitude e^{-|z|^2} (sqrt(2)|z|)^d sqrt(n!/m!); the direct
    // product overflows/underflows long before the result does.
    const double log_mag = -z2 + d * (0.5 * std::log(2.0 * z2)) +
                           0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
    const cplx dir = z / std::abs(z);
    cplx phase = 1.0;
    for (int k = 0; k < d; ++k) phase *= dir;
    return sign / (pi * hbar) * std::exp(log_mag) * phase *
           laguerre(n, static_cast<double>(d), 2.0 * z2);
}

PhaseSpaceGridSpec PhaseSpaceGridSpec::defaults_for(
    const ValidatedConfig& config) {
    const OscillatorParams& osc = config.osc;
    double x0 = 0.0;
    double p0 = 0.0;
    if (config.state.coherent) {
        x0 = config.state.coherent->x0;
        p0 = config.state.coherent->p0;
    } else {
        x0 = state_mean_position(config.coefficients, osc);
        p0 = state_mean_momentum(config.coefficients, osc);
    }
    const double extent =
        std::fabs(x0) + std::fabs(p0) / (osc.m * osc.omega0);
    PhaseSpaceGridSpec spec;
    spec.x_half =
        6.0 * std::max(std::sqrt(hbar / (osc.m * osc.omega0)), extent);
    spec.p_half = osc.m * osc.omega0 * spec.x_half;
    return spec;
}

namespace {

double trapezoid_weight(std::size_t i, std::size_t n) {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

double PhaseSpaceGrid::normalization() const {
    const double dx = x.size() > 1 ? x[1] - x[0] : 1.0;
    const double dp = p.size() > 1 ? p[1] - p[0] : 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double wx = trapezoid_weight(i, x.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            s += wx * trapezoid_weight(j, p.size()) *
                 value(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(j));
        }
    }
    return s * dx * dp;
}

double PhaseSpaceGrid::min_value() const { return value.minCoeff(); }

double PhaseSpaceGrid::max_value() const { return value.maxCoeff(); }

std::vector<double> PhaseSpaceGrid::x_marginal() const {
    const double dp = p.size() > 1 ? p[1] - p[0] : 1.0;
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            s += trapezoid_weight(j, p.size()) *
                 value(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(j));
        }
        out[i] = s * dp;
    }
    return out;
}

PhaseSpaceGrid render(const DensityCoefficients& coeffs,
                      const PhaseSpaceGridSpec& spec,
                      const OscillatorParams& osc) {
    if (spec.nx < 2 || spec.np < 2) {
        throw ConfigError(ErrorCode::GridTooCoarse,
                          "phase-space grid needs at least 2x2 points");
    }
    if (!(spec.x_half > 0.0) || !(spec.p_half > 0.0)) {
        throw ConfigError(ErrorCode::GridTooCoarse,
                          "phase-space half-widths must be positive");
    }
    const Eigen::Index nlev = coeffs.c.rows();
    if (nlev < 1 || coeffs.c.cols() != nlev) {
        throw ConfigError(ErrorCode::BasisTooSmall,
                          "density coefficients must be square");
    }

    PhaseSpaceGrid grid;
    grid.t = coeffs.t;
    grid.x.resize(static_cast<std::size_t>(spec.nx));
    grid.p.resize(static_cast<std::size_t>(spec.np));
    for (int i = 0; i < spec.nx; ++i) {
        grid.x[static_cast<std::size_t>(i)] =
            -spec.x_half + 2.0 * spec.x_half * i / (spec.nx - 1);
    }
    for (int j = 0; j < spec.np; ++j) {
        grid.p[static_cast<std::size_t>(j)] =
            -spec.p_half + 2.0 * spec.p_half * j / (spec.np - 1);
    }
    grid.value.resize(spec.nx, spec.np);

    const double mw = osc.m * osc.omega0;
    detail::parallel_for_blocks(
        0, static_cast<std::size_t>(spec.nx),
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double xv = grid.x[i];
                for (std::size_t j = 0; j < static_cast<std::size_t>(spec.np);
                     ++j) {
                    const double pv = grid.p[j];
                    const cplx z(xv * std::sqrt(mw / hbar),
                                 pv / std::sqrt(mw * hbar));
                    const double z2 = std::norm(z);
                    const double u = 2.0 * z2;
                    double acc = 0.0;
                    if (z2 == 0.0) {
                        for (Eigen::Index n = 0; n < nlev; ++n) {
                            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                            acc += sign * coeffs.c(n, n).real();
                        }
                        grid.value(static_cast<Eigen::Index>(i),
                                   static_cast<Eigen::Index>(j)) =
                            acc / (pi * hbar);
                        continue;
                    }
                    const cplx dir = z / std::abs(z);
                    // Walk diagonals d = m - n; within a diagonal both the
                    // magnitude prefactor and L_n^d(u) admit O(1) updates.
                    cplx phase = 1.0;
                    for (Eigen::Index d = 0; d < nlev; ++d) {
                        const double dd = static_cast<double>(d);
                        double pref =
                            std::exp(-z2 + dd * 0.5 * std::log(u) -
                                     0.5 * std::lgamma(dd + 1.0));
                        if (pref == 0.0) break;  // deeper diagonals smaller
                        double lnm = 0.0;
                        double ln = 1.0;  // L_0^d
                        cplx diag_sum = 0.0;
                        for (Eigen::Index n = 0; n + d < nlev; ++n) {
                            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                            const cplx w = sign * pref * ln * phase;
                            if (d == 0) {
                                diag_sum += coeffs.c(n, n).real() * w;
                            } else {
                                // c_{nm} w_{nm} + c_{mn} w_{mn} = 2 Re[...]
                                diag_sum += 2.0 * (coeffs.c(n, n + d) * w);
                            }
                            const double dn = static_cast<double>(n);
                            pref *= std::sqrt((dn + 1.0) / (dn + 1.0 + dd));
                            const double lnp =
                                ((2.0 * dn + 1.0 + dd - u) * ln -
                                 (dn + dd) * lnm) /
                                (dn + 1.0);
                            lnm = ln;
                            ln = lnp;
                        }
                        acc += diag_sum.real();
                        phase *= dir;
                    }
                    grid.value(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(j)) =
                        acc / (pi * hbar);
                }
            }
        });

    const double norm = grid.normalization();
    if (std::fabs(norm - 1.0) > 1e-4) {
        throw NumericError(ErrorCode::GridTooCoarse,
                           "normalization " + std::to_string(norm));
    }
    return grid;
}

}  // namespace quartosc
