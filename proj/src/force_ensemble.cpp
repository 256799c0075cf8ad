#include "quartosc/force_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quartosc {

namespace {

constexpr double pi = 3.14159265358979323846;

}  // namespace

double ForceEnsemble::weight_sum() const {
    double s = 0.0;
    for (const auto& n : nodes) s += n.weight;
    return s;
}

double ForceEnsemble::first_moment() const {
    double s = 0.0;
    for (const auto& n : nodes) s += n.weight * n.phi;
    return s;
}

double ForceEnsemble::second_moment() const {
    double s = 0.0;
    for (const auto& n : nodes) s += n.weight * n.phi * n.phi;
    return s;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    if (n < 1) {
        throw ConfigError(ErrorCode::NonPositiveNodeCount, std::to_string(n));
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));

    // Newton iteration on the orthonormal Hermite recurrence. The
    // orthonormal form keeps values O(1) for any n, so this is stable far
    // beyond the point where the monic recurrence overflows.
    const int max_iter = 100;
    const int m = (n + 1) / 2;
    std::vector<double> roots(static_cast<std::size_t>(m));  // positive, descending
    // Initial guesses invert the WKB phase of the Hermite function: the k-th
    // positive root, counted down from the turning point R = sqrt(2n+1),
    // satisfies  integral_z^R sqrt(2n+1 - s^2) ds ~= pi (k - 1/4).  The
    // integral is monotone in z, so a short bisection lands every guess well
    // inside its Newton basin, uniformly in n.
    const double nu = 2.0 * n + 1.0;
    const double turning = std::sqrt(nu);
    const auto phase = [nu, turning](double s) {
        return 0.5 * (nu * std::acos(s / turning) -
                      s * std::sqrt(std::max(nu - s * s, 0.0)));
    };
    double upper = turning;
    for (int i = 0; i < m; ++i) {
        const double target = pi * (i + 0.75);
        double lo = 0.0;
        double hi = upper;
        while (hi - lo > 1e-5 * turning) {
            const double mid = 0.5 * (lo + hi);
            if (phase(mid) > target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        double z = 0.5 * (lo + hi);

        double pp = 0.0;
        double log_scale = 0.0;
        double prev_dz = 1e300;
        bool converged = false;
        for (int it = 0; it < max_iter; ++it) {
            // p1 = h_n(z), orthonormal for weight e^{-z^2}. Beyond the
            // classical turning point the values grow like e^{z^2/2}, so the
            // pair is rescaled on the fly; Newton's step and the weight only
            // need the ratio and the tracked log magnitude.
            double p1 = 1.0 / std::sqrt(std::sqrt(pi));
            double p2 = 0.0;
            log_scale = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 -
                     std::sqrt((j - 1.0) / j) * p3;
                if (std::fabs(p1) > 1e100) {
                    p1 *= 1e-100;
                    p2 *= 1e-100;
                    log_scale += 100.0 * std::log(10.0);
                }
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= 1e-13 * std::max(1.0, std::fabs(z))) {
                converged = true;
                break;
            }
            // Long recurrences leave a rounding floor that can sit a little
            // above the tolerance; once the step stops shrinking from an
            // already tiny value, the root is as accurate as the arithmetic
            // allows.
            if (std::fabs(dz) >= 0.5 * prev_dz &&
                prev_dz <= 3e-12 * std::max(1.0, std::fabs(z))) {
                converged = true;
                break;
            }
            prev_dz = std::fabs(dz);
        }
        if (!converged) {
            throw NumericError(ErrorCode::NoConvergence,
                               "Gauss-Hermite root " + std::to_string(i) +
                                   " of " + std::to_string(n));
        }
        z = std::fabs(z);
        if (i > 0 && !(z < roots[static_cast<std::size_t>(i - 1)])) {
            throw NumericError(ErrorCode::NoConvergence,
                               "Gauss-Hermite ordering at root " +
                                   std::to_string(i) + " of " +
                                   std::to_string(n));
        }
        upper = z;
        // Roots come out in descending order; store mirrored pairs so the
        // grid is symmetric by construction.
        roots[static_cast<std::size_t>(i)] = z;
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        // w = 2 / h_n'(z)^2 evaluated in log space: extreme nodes of large
        // rules carry weights below the double range and flush to zero.
        const double wi =
            std::exp(std::log(2.0) -
                     2.0 * (std::log(std::fabs(pp)) + log_scale));
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(n - 1 - i)] = wi;
    }
    if (n % 2 == 1) {
        x[static_cast<std::size_t>(m - 1)] = 0.0;
    }
    return {std::move(x), std::move(w)};
}

ForceEnsemble discrete_ensemble(const CondensateParams& bec) {
    if (bec.mode != CondensateMode::Discrete) {
        throw ConfigError(ErrorCode::WrongMode,
                          "discrete ensemble needs a discrete condensate");
    }
    ForceEnsemble e;
    e.variance_target = bec.force_variance();
    for (const auto& [phi, w] : discrete_force_list(bec)) {
        e.nodes.push_back(ForceNode{phi, w});
    }
    return e;
}

double continuum_density(double delta_phi, double phi) {
    if (!(delta_phi > 0.0)) {
        throw ConfigError(ErrorCode::NonPositiveSpread,
                          std::to_string(delta_phi));
    }
    const double u = phi / delta_phi;
    return std::exp(-0.5 * u * u) / (delta_phi * std::sqrt(2.0 * pi));
}

ForceEnsemble quadrature_ensemble(double delta_phi, int n_nodes) {
    if (delta_phi < 0.0) {
        throw ConfigError(ErrorCode::NonPositiveSpread,
                          std::to_string(delta_phi));
    }
    if (n_nodes < 1) {
        throw ConfigError(ErrorCode::NonPositiveNodeCount,
                          std::to_string(n_nodes));
    }
    ForceEnsemble e;
    e.variance_target = delta_phi * delta_phi;
    if (delta_phi == 0.0) {
        e.nodes = {ForceNode{0.0, 1.0}};
        return e;
    }
    auto [t, w] = gauss_hermite(n_nodes);
    // Substituting phi = sqrt(2) dphi t maps the Gaussian integral onto the
    // e^{-t^2} weight; the 1/sqrt(pi) factor is absorbed by renormalizing
    // the weight sum to exactly one.
    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    e.nodes.reserve(t.size());
    const double scale = std::sqrt(2.0) * delta_phi;
    for (std::size_t i = 0; i < t.size(); ++i) {
        // Extreme nodes of very large rules underflow to zero weight; they
        // carry no probability mass and would break the all-positive
        // invariant, so skip them.
        if (w[i] <= 0.0) continue;
        e.nodes.push_back(ForceNode{scale * t[i], w[i] / wsum});
    }
    return e;
}

ForceEnsemble ensemble_for(const ValidatedConfig& config) {
    if (config.bec.mode == CondensateMode::Discrete) {
        return discrete_ensemble(config.bec);
    }
    return quadrature_ensemble(config.bec.delta_phi, config.grid.quad_nodes);
}

}  // namespace quartosc
