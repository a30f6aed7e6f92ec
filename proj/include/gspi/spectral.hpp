#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gspi/graph.hpp"

namespace gspi {

/// Laplacian eigenpairs: ascending eigenvalues, orthonormal eigenvector
/// columns. Each eigenvector's largest-magnitude entry is positive (lowest
/// index on ties). lambda_0 is clamped to exactly 0.
struct SpectralBasis {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  ///< column l is u_l

    int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
    double lambda_max() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0; }
};

/// Dense symmetric eigendecomposition of a graph Laplacian. Throws
/// NumericError when the solver fails or the eigen-residual exceeds
/// 1e-6 * max(1, lambda_max).
SpectralBasis eigendecompose(const Eigen::MatrixXd& laplacian);

inline SpectralBasis eigendecompose(const WeightedGraph& g) { return eigendecompose(laplacian(g)); }

/// Graph Fourier transform: component l is <S, u_l>.
std::vector<double> gft(const SpectralBasis& basis, std::span<const double> signal);

/// Selected spectrum components in the given order.
std::vector<double> spectrum_slice(std::span<const double> spectrum, std::span<const int> indices);

/// Largest |u_l(i)|.
double inf_norm(const SpectralBasis& basis, int l);

/// On-disk cache of spectral bases keyed by the graph content hash.
/// Each entry is `<hash>.json` (metadata) plus `<hash>.bin` (raw doubles:
/// eigenvalues, then eigenvectors in column-major order).
class SpectralCache {
public:
    explicit SpectralCache(std::filesystem::path dir);

    std::optional<SpectralBasis> load(const WeightedGraph& g) const;
    void store(const WeightedGraph& g, const SpectralBasis& basis) const;
    SpectralBasis load_or_compute(const WeightedGraph& g) const;

private:
    std::filesystem::path dir_;
};

}  // namespace gspi
