#pragma once

#include <utility>
#include <vector>

#include "quartosc/model.hpp"

// Discrete and continuum representations of the random force phi. The
// oscillator evolution is averaged over these (phi, weight) nodes; weights
// always sum to one.

namespace quartosc {

struct ForceNode {
    double phi = 0.0;
    double weight = 0.0;
};

struct ForceEnsemble {
    std::vector<ForceNode> nodes;
    // Variance of the distribution the nodes represent (not the quadrature
    // estimate of it): N (hbar omega1)^2 or delta_phi^2.
    double variance_target = 0.0;

    double weight_sum() const;
    double first_moment() const;
    double second_moment() const;
};

// Nodes and weights of K-point Gauss-Hermite quadrature for weight e^{-t^2}:
// sum_i w_i f(t_i) ~ integral f(t) e^{-t^2} dt, exact for degree <= 2K-1.
// Nodes ascend and are symmetric about zero; weights are positive.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

// Binomial ladder phi_n = hbar*omega1*(N - 2n), weight C(N,n)/2^N,
// n = 0..N. Requires discrete mode with n_atoms >= 1.
ForceEnsemble discrete_ensemble(const CondensateParams& bec);

// Gaussian density P(phi) = exp(-phi^2/(2 dphi^2)) / sqrt(2 pi dphi^2).
// Requires delta_phi > 0.
double continuum_density(double delta_phi, double phi);

// Gauss-Hermite discretization of the Gaussian ensemble: phi_i =
// sqrt(2)*delta_phi*t_i with weights renormalized to sum exactly to one.
// delta_phi = 0 degenerates to the single node (0, 1).
ForceEnsemble quadrature_ensemble(double delta_phi, int n_nodes);

// Ensemble matching the condensate mode of a validated config.
ForceEnsemble ensemble_for(const ValidatedConfig& config);

}  // namespace quartosc
