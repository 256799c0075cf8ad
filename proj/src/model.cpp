#include "quartosc/model.hpp"

#include <cmath>
#include <cstdio>

namespace quartosc {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

CondensateParams CondensateParams::discrete(int n_atoms, double omega1) {
    CondensateParams p;
    p.mode = CondensateMode::Discrete;
    p.n_atoms = n_atoms;
    p.omega1 = omega1;
    return p;
}

CondensateParams CondensateParams::continuum(double delta_phi) {
    CondensateParams p;
    p.mode = CondensateMode::Continuum;
    p.delta_phi = delta_phi;
    return p;
}

double CondensateParams::force_variance() const {
    if (mode == CondensateMode::Discrete) {
        return static_cast<double>(n_atoms) * (hbar * omega1) * (hbar * omega1);
    }
    return delta_phi * delta_phi;
}

double delta_phi_from_kappa(double kappa, const OscillatorParams& osc) {
    return std::fabs(kappa) * std::sqrt(2.0 * osc.m * hbar * osc.omega0);
}

StateSpec StateSpec::from_coherent(double x0, double p0) {
    StateSpec s;
    s.coherent = CoherentSpec{x0, p0};
    return s;
}

StateSpec StateSpec::from_coefficients(std::vector<std::complex<double>> c) {
    StateSpec s;
    s.coefficients = std::move(c);
    return s;
}

SimulationGrid SimulationGrid::uniform(double t_max, int n_samples,
                                       int basis_size, int quad_nodes) {
    SimulationGrid g;
    g.basis_size = basis_size;
    g.quad_nodes = quad_nodes;
    if (n_samples < 1) {
        throw ConfigError(ErrorCode::EmptyTimeGrid,
                          "uniform grid needs at least one sample");
    }
    g.times.resize(static_cast<std::size_t>(n_samples));
    if (n_samples == 1) {
        g.times[0] = t_max;
        return g;
    }
    for (int i = 0; i < n_samples; ++i) {
        g.times[static_cast<std::size_t>(i)] =
            t_max * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    }
    return g;
}

std::vector<std::complex<double>> coherent_coefficients(
    const OscillatorParams& osc, double x0, double p0, double tail,
    int max_terms) {
    if (osc.m <= 0.0) {
        throw ConfigError(ErrorCode::NonPositiveMass, format_double(osc.m));
    }
    if (osc.omega0 <= 0.0) {
        throw ConfigError(ErrorCode::NonPositiveFrequency,
                          format_double(osc.omega0));
    }
    const std::complex<double> alpha(
        x0 * std::sqrt(osc.m * osc.omega0 / (2.0 * hbar)),
        p0 / std::sqrt(2.0 * osc.m * hbar * osc.omega0));
    const double a2 = std::norm(alpha);
    if (a2 == 0.0) {
        return {std::complex<double>(1.0, 0.0)};
    }
    const double theta = std::arg(alpha);
    const double log_abs_alpha = 0.5 * std::log(a2);

    // |c_n| = exp(-|a|^2/2 + n ln|a| - lgamma(n+1)/2), phase e^{i n theta}.
    std::vector<std::complex<double>> c;
    double cum = 0.0;
    for (int n = 0; n < max_terms; ++n) {
        const double log_mag =
            -0.5 * a2 + n * log_abs_alpha - 0.5 * std::lgamma(n + 1.0);
        const double mag = std::exp(log_mag);
        c.emplace_back(std::polar(mag, n * theta));
        cum += mag * mag;
        // Tail check only past the Poisson mean, where terms are decreasing.
        if (n > a2 && 1.0 - cum < tail) {
            break;
        }
    }
    if (1.0 - cum >= tail) {
        throw ConfigError(ErrorCode::BasisTooSmall,
                          "coherent state does not fit in " +
                              std::to_string(max_terms) + " levels");
    }
    const double inv_norm = 1.0 / std::sqrt(cum);
    for (auto& v : c) v *= inv_norm;
    return c;
}

double state_mean_position(const std::vector<std::complex<double>>& c,
                           const OscillatorParams& osc) {
    const double lam = std::sqrt(hbar / (2.0 * osc.m * osc.omega0));
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < c.size(); ++n) {
        s += 2.0 * std::sqrt(static_cast<double>(n + 1)) *
             (std::conj(c[n]) * c[n + 1]).real();
    }
    return lam * s;
}

double state_mean_momentum(const std::vector<std::complex<double>>& c,
                           const OscillatorParams& osc) {
    const double mu = std::sqrt(osc.m * hbar * osc.omega0 / 2.0);
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < c.size(); ++n) {
        s += 2.0 * std::sqrt(static_cast<double>(n + 1)) *
             (std::conj(c[n]) * c[n + 1]).imag();
    }
    return mu * s;
}

namespace {

// <X^2> of a number-basis expansion; used for the anharmonicity estimate.
double state_mean_x2(const std::vector<std::complex<double>>& c,
                     const OscillatorParams& osc) {
    const double lam2 = hbar / (2.0 * osc.m * osc.omega0);
    double s = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        s += (2.0 * static_cast<double>(n) + 1.0) * std::norm(c[n]);
    }
    for (std::size_t n = 0; n + 2 < c.size(); ++n) {
        const double w = std::sqrt(static_cast<double>((n + 1) * (n + 2)));
        s += 2.0 * w * (std::conj(c[n]) * c[n + 2]).real();
    }
    return lam2 * s;
}

}  // namespace

std::vector<std::pair<double, double>> discrete_force_list(
    const CondensateParams& bec) {
    if (bec.mode != CondensateMode::Discrete) {
        throw ConfigError(ErrorCode::WrongMode,
                          "force list requires a discrete condensate");
    }
    const int N = bec.n_atoms;
    if (N < 1) {
        throw ConfigError(ErrorCode::NonPositiveNodeCount,
                          "n_atoms = " + std::to_string(N));
    }
    std::vector<std::pair<double, double>> list(
        static_cast<std::size_t>(N + 1));
    // log C(N,n) - N log 2 keeps weights representable for large N.
    const double lgN = std::lgamma(N + 1.0);
    for (int n = 0; n <= N; ++n) {
        const double logw = lgN - std::lgamma(n + 1.0) -
                            std::lgamma(N - n + 1.0) - N * std::log(2.0);
        list[static_cast<std::size_t>(n)] = {hbar * bec.omega1 * (N - 2.0 * n),
                                             std::exp(logw)};
    }
    return list;
}

double anharmonicity_ratio(const OscillatorParams& osc,
                           const StateSpec& state) {
    double x_ref2 = 0.0;
    if (state.coherent) {
        const double xc = state.coherent->x0;
        const double pc = state.coherent->p0 / (osc.m * osc.omega0);
        x_ref2 = xc * xc + pc * pc;
    } else {
        x_ref2 = 2.0 * state_mean_x2(state.coefficients, osc);
    }
    return osc.beta * x_ref2 / (osc.m * osc.omega0 * osc.omega0);
}

ValidatedConfig validate(const OscillatorParams& osc,
                         const CondensateParams& bec, const StateSpec& state,
                         const SimulationGrid& grid,
                         double anharmonicity_warn_threshold) {
    if (osc.m <= 0.0 || !std::isfinite(osc.m)) {
        throw ConfigError(ErrorCode::NonPositiveMass, format_double(osc.m));
    }
    if (osc.omega0 <= 0.0 || !std::isfinite(osc.omega0)) {
        throw ConfigError(ErrorCode::NonPositiveFrequency,
                          format_double(osc.omega0));
    }
    if (osc.beta < 0.0 || !std::isfinite(osc.beta)) {
        throw ConfigError(ErrorCode::NegativeBeta, format_double(osc.beta));
    }

    if (bec.mode == CondensateMode::Discrete) {
        if (bec.n_atoms < 1) {
            throw ConfigError(ErrorCode::NonPositiveNodeCount,
                              "discrete condensate needs n_atoms >= 1");
        }
        if (!std::isfinite(bec.omega1)) {
            throw ConfigError(ErrorCode::WrongMode, "omega1 must be finite");
        }
    } else {
        if (bec.delta_phi < 0.0 || !std::isfinite(bec.delta_phi)) {
            throw ConfigError(ErrorCode::NonPositiveSpread,
                              format_double(bec.delta_phi));
        }
    }

    if (grid.times.empty()) {
        throw ConfigError(ErrorCode::EmptyTimeGrid, "no sample times");
    }
    for (std::size_t i = 0; i + 1 < grid.times.size(); ++i) {
        if (!(grid.times[i] < grid.times[i + 1])) {
            throw ConfigError(ErrorCode::NonMonotonicTimes,
                              "times must be strictly increasing");
        }
    }
    if (grid.quad_nodes < 1) {
        throw ConfigError(ErrorCode::NonPositiveNodeCount,
                          std::to_string(grid.quad_nodes));
    }
    if (grid.basis_size < 2) {
        throw ConfigError(ErrorCode::BasisTooSmall,
                          std::to_string(grid.basis_size));
    }

    ValidatedConfig cfg;
    cfg.osc = osc;
    cfg.bec = bec;
    cfg.state = state;
    cfg.grid = grid;

    const bool has_coherent = state.coherent.has_value();
    const bool has_coeffs = !state.coefficients.empty();
    if (has_coherent == has_coeffs) {
        throw ConfigError(
            ErrorCode::UnnormalizedState,
            "state must be exactly one of coherent or explicit coefficients");
    }

    if (has_coherent) {
        cfg.coefficients = coherent_coefficients(osc, state.coherent->x0,
                                                 state.coherent->p0);
        // Round-trip sanity: the truncated expansion must reproduce the
        // requested first moments.
        const double x_back = state_mean_position(cfg.coefficients, osc);
        const double p_back = state_mean_momentum(cfg.coefficients, osc);
        const double x_scale = std::max(1.0, std::fabs(state.coherent->x0));
        const double p_scale = std::max(1.0, std::fabs(state.coherent->p0));
        if (std::fabs(x_back - state.coherent->x0) > 1e-8 * x_scale ||
            std::fabs(p_back - state.coherent->p0) > 1e-8 * p_scale) {
            throw NumericError(ErrorCode::NoConvergence,
                               "coherent expansion failed round-trip check");
        }
    } else {
        double norm2 = 0.0;
        for (const auto& v : state.coefficients) norm2 += std::norm(v);
        if (std::fabs(norm2 - 1.0) > 1e-8) {
            throw ConfigError(ErrorCode::UnnormalizedState,
                              "|c|^2 = " + format_double(norm2));
        }
        cfg.coefficients = state.coefficients;
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : cfg.coefficients) v *= inv;
    }

    const int n_max = static_cast<int>(cfg.coefficients.size()) - 1;
    if (grid.basis_size < n_max + 10) {
        throw ConfigError(ErrorCode::BasisTooSmall,
                          "basis_size " + std::to_string(grid.basis_size) +
                              " < occupied levels + 10 = " +
                              std::to_string(n_max + 10));
    }

    if (bec.mode == CondensateMode::Discrete) {
        cfg.force_list = discrete_force_list(bec);
    }

    // Turning-point guard. The most-displaced force branch with
    // non-negligible weight (>= 1e-16) shifts the well and raises the
    // classically accessible level; occupied levels plus that estimate must
    // sit at least 15 below the truncation edge, or truncation silently
    // corrupts the dynamics.
    {
        double phi_max = 0.0;
        if (bec.mode == CondensateMode::Discrete) {
            for (const auto& [phi, w] : cfg.force_list) {
                if (w >= 1e-16) phi_max = std::max(phi_max, std::fabs(phi));
            }
        } else if (bec.delta_phi > 0.0) {
            // Gaussian tail mass below 1e-16 of the peak density.
            phi_max = bec.delta_phi * std::sqrt(2.0 * 16.0 * std::log(10.0));
        }
        double e_harm = 0.0;
        double x2 = 0.0;
        const double lam2 = hbar / (2.0 * osc.m * osc.omega0);
        for (std::size_t n = 0; n < cfg.coefficients.size(); ++n) {
            const double pn = std::norm(cfg.coefficients[n]);
            e_harm += pn * hbar * osc.omega0 * (static_cast<double>(n) + 0.5);
            x2 += pn * lam2 * (2.0 * static_cast<double>(n) + 1.0);
        }
        for (std::size_t n = 0; n + 2 < cfg.coefficients.size(); ++n) {
            x2 += 2.0 * lam2 *
                  std::sqrt(static_cast<double>((n + 1) * (n + 2))) *
                  (std::conj(cfg.coefficients[n]) * cfg.coefficients[n + 2])
                      .real();
        }
        const double mw2 = osc.m * osc.omega0 * osc.omega0;
        const double x_shift = phi_max / mw2;
        const double e_branch = e_harm + phi_max * std::sqrt(std::max(x2, 0.0)) +
                                0.5 * mw2 * x_shift * x_shift;
        const int n_turn =
            static_cast<int>(std::ceil(e_branch / (hbar * osc.omega0)));
        if (n_max + n_turn + 15 > grid.basis_size) {
            throw ConfigError(
                ErrorCode::BasisTooSmall,
                "basis_size " + std::to_string(grid.basis_size) +
                    " leaves less than 15 levels above occupied + "
                    "turning-point estimate " +
                    std::to_string(n_max + n_turn));
        }
    }

    const double r = anharmonicity_ratio(osc, state);
    if (r > anharmonicity_warn_threshold) {
        cfg.warnings.push_back(
            "anharmonicity ratio " + format_double(r) + " exceeds " +
            format_double(anharmonicity_warn_threshold) +
            "; perturbative results may be unreliable");
    }
    return cfg;
}

}  // namespace quartosc
