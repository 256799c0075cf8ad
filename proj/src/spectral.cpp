#include "quartosc/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel_for.hpp"

namespace quartosc {

Eigen::MatrixXd position_matrix(const OscillatorParams& osc, int basis_size) {
    if (basis_size < 2) {
        throw ConfigError(ErrorCode::BasisTooSmall,
                          std::to_string(basis_size));
    }
    const double lam = std::sqrt(hbar / (2.0 * osc.m * osc.omega0));
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(basis_size, basis_size);
    for (int n = 0; n + 1 < basis_size; ++n) {
        const double v = lam * std::sqrt(n + 1.0);
        x(n, n + 1) = v;
        x(n + 1, n) = v;
    }
    return x;
}

Eigen::MatrixXd build_hamiltonian(const OscillatorParams& osc, double phi,
                                  int basis_size) {
    if (basis_size < 2) {
        throw ConfigError(ErrorCode::BasisTooSmall,
                          std::to_string(basis_size));
    }
    const int m = basis_size;
    const double lam = std::sqrt(hbar / (2.0 * osc.m * osc.omega0));
    const double lam2 = lam * lam;
    const double b4 = 0.25 * osc.beta * lam2 * lam2;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    // Closed-form ladder elements of X^4: diagonal 3(2n^2+2n+1), second
    // off-diagonal (4n+6)sqrt((n+1)(n+2)), fourth off-diagonal
    // sqrt((n+1)(n+2)(n+3)(n+4)); everything else vanishes.
    for (int n = 0; n < m; ++n) {
        h(n, n) = hbar * osc.omega0 * (n + 0.5) +
                  b4 * 3.0 * (2.0 * n * n + 2.0 * n + 1.0);
    }
    for (int n = 0; n + 1 < m; ++n) {
        const double v = phi * lam * std::sqrt(n + 1.0);
        h(n, n + 1) += v;
        h(n + 1, n) += v;
    }
    for (int n = 0; n + 2 < m; ++n) {
        const double v =
            b4 * (4.0 * n + 6.0) * std::sqrt((n + 1.0) * (n + 2.0));
        h(n, n + 2) += v;
        h(n + 2, n) += v;
    }
    for (int n = 0; n + 4 < m; ++n) {
        const double v = b4 * std::sqrt((n + 1.0) * (n + 2.0) * (n + 3.0) *
                                        (n + 4.0));
        h(n, n + 4) += v;
        h(n + 4, n) += v;
    }
    return h;
}

SpectralBranch eigendecompose(const Eigen::MatrixXd& h, double phi) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("eigendecompose: matrix not square");
    }
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("eigendecompose: matrix not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericError(ErrorCode::NoConvergence,
                           "symmetric eigensolver failed");
    }
    SpectralBranch b;
    b.phi = phi;
    b.energies = solver.eigenvalues();
    b.vectors = solver.eigenvectors();
    return b;
}

SpectralEngine::SpectralEngine(const ValidatedConfig& config,
                               const ForceEnsemble& ensemble,
                               EngineOptions options)
    : basis_(config.grid.basis_size),
      threads_(detail::resolve_threads(options.threads)) {
    const int m = basis_;
    const int n_occ = static_cast<int>(config.coefficients.size()) - 1;
    if (n_occ < 0) {
        throw ConfigError(ErrorCode::UnnormalizedState, "empty state");
    }
    if (n_occ >= m) {
        throw ConfigError(ErrorCode::BasisTooSmall,
                          "state occupies level " + std::to_string(n_occ) +
                              " but basis ends at " + std::to_string(m - 1));
    }
    if (n_occ >= m - 5) {
        warnings_.push_back(
            "TruncationWarning: initial-state support (level " +
            std::to_string(n_occ) + ") within 5 levels of basis edge " +
            std::to_string(m));
    }
    if (ensemble.nodes.empty()) {
        throw ConfigError(ErrorCode::NonPositiveNodeCount, "empty ensemble");
    }

    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(m);
    for (std::size_t n = 0; n < config.coefficients.size(); ++n) {
        c0(static_cast<Eigen::Index>(n)) = config.coefficients[n];
    }
    const Eigen::MatrixXd x = position_matrix(config.osc, m);

    // Nodes below the weight floor contribute nothing representable to the
    // average; skip them so wide ensembles don't pay for dead branches.
    std::vector<const ForceNode*> active;
    active.reserve(ensemble.nodes.size());
    for (const auto& node : ensemble.nodes) {
        if (node.weight >= options.weight_floor) active.push_back(&node);
    }
    if (active.empty()) {
        throw ConfigError(ErrorCode::NonPositiveNodeCount,
                          "all ensemble weights below weight floor");
    }

    branches_.resize(active.size());
    const OscillatorParams osc = config.osc;
    detail::parallel_for_blocks(
        threads_, active.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const ForceNode& node = *active[k];
                SpectralBranch eig =
                    eigendecompose(build_hamiltonian(osc, node.phi, m),
                                   node.phi);
                Branch& b = branches_[k];
                b.phi = node.phi;
                b.weight = node.weight;
                b.energies = std::move(eig.energies);
                b.vectors = std::move(eig.vectors);
                b.amplitudes = b.vectors.transpose() * c0;
                b.x_eigen.noalias() = b.vectors.transpose() * x * b.vectors;
            }
        });
}

double SpectralEngine::branch_mean(const Branch& b, double t) const {
    const Eigen::Index m = b.energies.size();
    Eigen::VectorXd ur(m);
    Eigen::VectorXd ui(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        // u = a * exp(-i E t / hbar)
        const double ph = -b.energies(i) * t / hbar;
        const double cs = std::cos(ph);
        const double sn = std::sin(ph);
        const std::complex<double> a = b.amplitudes(i);
        ur(i) = a.real() * cs - a.imag() * sn;
        ui(i) = a.real() * sn + a.imag() * cs;
    }
    // <X> = u^dag Xe u; Xe real symmetric kills the imaginary part.
    return ur.dot(b.x_eigen.selfadjointView<Eigen::Lower>() * ur) +
           ui.dot(b.x_eigen.selfadjointView<Eigen::Lower>() * ui);
}

TimeSeries SpectralEngine::mean_position(
    const std::vector<double>& times) const {
    if (times.empty()) {
        throw ConfigError(ErrorCode::EmptyTimeGrid, "no sample times");
    }
    TimeSeries out;
    out.times = times;
    out.values.assign(times.size(), 0.0);
    out.method = "spectral";
    // Parallel over time blocks; the branch sum for one sample stays on one
    // thread in node order, so thread count never changes a bit of output.
    detail::parallel_for_blocks(
        threads_, times.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t j = lo; j < hi; ++j) {
                double acc = 0.0;
                for (const Branch& b : branches_) {
                    acc += b.weight * branch_mean(b, times[j]);
                }
                out.values[j] = acc;
            }
        });
    return out;
}

double SpectralEngine::stationary_value() const {
    double acc = 0.0;
    for (const Branch& b : branches_) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < b.energies.size(); ++i) {
            s += std::norm(b.amplitudes(i)) * b.x_eigen(i, i);
        }
        acc += b.weight * s;
    }
    return acc;
}

DensityCoefficients SpectralEngine::density_coefficients(double t) const {
    DensityCoefficients out;
    out.t = t;
    out.c = Eigen::MatrixXcd::Zero(basis_, basis_);
    for (std::size_t k = 0; k < branches_.size(); ++k) {
        const Eigen::VectorXcd psi = branch_state(k, t);
        out.c.noalias() += branches_[k].weight * (psi * psi.adjoint());
    }
    return out;
}

double SpectralEngine::branch_energy(std::size_t k) const {
    const Branch& b = branches_[k];
    double e = 0.0;
    for (Eigen::Index i = 0; i < b.energies.size(); ++i) {
        e += std::norm(b.amplitudes(i)) * b.energies(i);
    }
    return e;
}

Eigen::VectorXcd SpectralEngine::branch_state(std::size_t k, double t) const {
    const Branch& b = branches_[k];
    const Eigen::Index m = b.energies.size();
    Eigen::VectorXcd u(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        u(i) = b.amplitudes(i) *
               std::polar(1.0, -b.energies(i) * t / hbar);
    }
    return b.vectors * u;
}

double SpectralEngine::branch_mean_position(std::size_t k, double t) const {
    return branch_mean(branches_[k], t);
}

TimeSeries mean_position(const ValidatedConfig& config,
                         const ForceEnsemble& ensemble,
                         const SimulationGrid& grid,
                         std::vector<std::string>* warnings) {
    ValidatedConfig local = config;
    local.grid = grid;
    SpectralEngine engine(local, ensemble);
    TimeSeries series = engine.mean_position(grid.times);
    if (warnings != nullptr) {
        warnings->insert(warnings->end(), engine.warnings().begin(),
                         engine.warnings().end());
    }
    return series;
}

double stationary_value(const ValidatedConfig& config,
                        const ForceEnsemble& ensemble) {
    return SpectralEngine(config, ensemble).stationary_value();
}

DensityCoefficients density_coefficients(const ValidatedConfig& config,
                                         const ForceEnsemble& ensemble,
                                         double t) {
    return SpectralEngine(config, ensemble).density_coefficients(t);
}

}  // namespace quartosc
