#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "quartosc/force_ensemble.hpp"
#include "quartosc/model.hpp"
#include "quartosc/time_series.hpp"

// Exact evolution engine. Each force value phi gets its own Hamiltonian
// H(phi) = p^2/2m + (m w0^2/2) x^2 + (beta/4) x^4 + phi x in a truncated
// number basis; observables are weight-averaged over the force ensemble.

namespace quartosc {

// Eigenpairs of one force branch: energies ascending, vectors columnwise
// orthonormal.
struct SpectralBranch {
    double phi = 0.0;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

// Ensemble-averaged density matrix in the number basis at one time.
struct DensityCoefficients {
    double t = 0.0;
    Eigen::MatrixXcd c;
};

// Position operator in the number basis: (n, n+1) = sqrt(hbar(n+1)/2m w0).
Eigen::MatrixXd position_matrix(const OscillatorParams& osc, int basis_size);

// H(phi) in the number basis. Real symmetric, bandwidth 4.
Eigen::MatrixXd build_hamiltonian(const OscillatorParams& osc, double phi,
                                  int basis_size);

// Full spectrum of a real symmetric matrix. Throws NoConvergence if the
// solver fails; rejects visibly asymmetric input.
SpectralBranch eigendecompose(const Eigen::MatrixXd& h, double phi = 0.0);

struct EngineOptions {
    int threads = 0;            // <= 0 means hardware concurrency
    double weight_floor = 1e-250;  // drop force nodes below this weight
};

// Diagonalizes every force branch once at construction, then evaluates
// observables at arbitrary times in O(M^2) per (branch, time). Branch work
// is parallel; reductions run in fixed node order so results are bit-stable
// across thread counts.
class SpectralEngine {
public:
    SpectralEngine(const ValidatedConfig& config, const ForceEnsemble& ensemble,
                   EngineOptions options = {});

    TimeSeries mean_position(const std::vector<double>& times) const;
    double stationary_value() const;
    DensityCoefficients density_coefficients(double t) const;

    std::size_t branch_count() const { return branches_.size(); }
    double branch_phi(std::size_t k) const { return branches_[k].phi; }
    double branch_weight(std::size_t k) const { return branches_[k].weight; }
    // <H(phi)> of the evolving branch state; time-independent by unitarity.
    double branch_energy(std::size_t k) const;
    // Number-basis amplitudes of branch k at time t.
    Eigen::VectorXcd branch_state(std::size_t k, double t) const;
    double branch_mean_position(std::size_t k, double t) const;

    int basis_size() const { return basis_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    struct Branch {
        double phi = 0.0;
        double weight = 0.0;
        Eigen::VectorXd energies;
        Eigen::MatrixXd vectors;     // V, columns are eigenvectors
        Eigen::VectorXcd amplitudes; // a = V^T c0
        Eigen::MatrixXd x_eigen;     // V^T X V
    };

    double branch_mean(const Branch& b, double t) const;

    int basis_ = 0;
    int threads_ = 1;
    std::vector<Branch> branches_;
    std::vector<std::string> warnings_;
};

// One-shot conveniences over SpectralEngine. The grid argument controls both
// sample times and basis size, so it may deliberately differ from
// config.grid (warnings then report truncation risk).
TimeSeries mean_position(const ValidatedConfig& config,
                         const ForceEnsemble& ensemble,
                         const SimulationGrid& grid,
                         std::vector<std::string>* warnings = nullptr);
double stationary_value(const ValidatedConfig& config,
                        const ForceEnsemble& ensemble);
DensityCoefficients density_coefficients(const ValidatedConfig& config,
                                         const ForceEnsemble& ensemble,
                                         double t);

}  // namespace quartosc
