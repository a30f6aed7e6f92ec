#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gspi/dynamics.hpp"
#include "gspi/graph.hpp"
#include "gspi/spectral.hpp"

namespace gspi {

/// How edge weights combine along a path.
///  - product: path weight is the product of w along the path; the dominant
///    path maximizes it (the spreading probability along the path).
///  - sum_distance: the conventional shortest path over distances a_ij; the
///    reported path weight is the summed distance.
enum class PathOperator { product, sum_distance };

/// Dominant paths from one center to every node.
struct DominantPathTable {
    NodeId center = 0;
    PathOperator op = PathOperator::product;
    std::vector<double> wdp;         ///< weight of the dominant path; 1 at the center for product
    std::vector<int> ldp;            ///< edge count of the dominant path (pseudo-hops); -1 if unreachable
    std::vector<NodeId> predecessor; ///< -1 at the center and for unreachable nodes

    /// Node sequence center..v of the dominant path.
    std::vector<NodeId> path_to(NodeId v) const;
};

/// Dijkstra-style search. For `product` it maximizes the left-to-right
/// floating-point product directly (monotone since w <= 1), so WDP equals the
/// best product over all simple paths bit for bit. Equal weights go to the
/// lexicographically smaller node sequence.
DominantPathTable dominant_paths(const WeightedGraph& g, NodeId center, PathOperator op = PathOperator::product);

/// Nodes exactly r pseudo-hops from the center, ascending.
std::vector<NodeId> ring(const DominantPathTable& table, int r);

/// Zero-sum sequence m^s_0..m^s_s weighting the rings of a wavelet.
struct MSequence {
    int scale = 1;
    std::vector<double> values;
};

/// Zero-mean profile on [0,1] used to derive an MSequence:
/// f(t) = -4 / (pi^(1/4) sqrt(3 sigma)) (16 t^2 / sigma^2 - 1) exp(-8 t^2 / sigma^2).
struct MexicanHatProfile {
    double sigma = 0.9;
    double operator()(double t) const;
};

/// m^s_k is the mean of the profile over [k/(s+1), (k+1)/(s+1)] (composite
/// Simpson, 10^4 panels), then the sequence is re-centered to sum to zero.
/// Throws ValidationError if any value is exactly zero.
MSequence m_sequence(int scale, const MexicanHatProfile& profile = {});

/// Explicit list; must sum to zero within 1e-9 with no zero entries.
MSequence m_sequence(std::vector<double> values);

/// Ring amplitude H(x) = c x^k.
struct HProfile {
    int c = 1;
    int k = 2;
    double operator()(double x) const;
};

/// Node-centered distance-based wavelet.
struct DbgwFunction {
    NodeId center = 0;
    int scale = 1;
    std::vector<double> psi;
};

/// psi(center) = m_0; node v in ring s' (1 <= s' <= s) gets
/// m_{s'} H(WDP(v)) / sum_{ring s'} H(WDP); nodes past the scale get 0.
/// An empty ring's m_{s'} is folded into the center value so psi still sums to zero.
DbgwFunction dbgw_function(const WeightedGraph& g, NodeId center, int scale, const HProfile& h, const MSequence& m,
                           const DominantPathTable& table);

double dbgw_coeff(std::span<const double> signal, const DbgwFunction& psi);

struct DbgwConfig {
    int scale = 1;
    HProfile h{1, 2};
    MSequence m = m_sequence(1);
    PathOperator op = PathOperator::product;
};

/// Wavelet functions for every center of a graph, stored sparsely so many
/// signals on the same graph can be transformed cheaply.
class DbgwTransform {
public:
    DbgwTransform(const WeightedGraph& g, const DbgwConfig& config);

    int size() const noexcept { return static_cast<int>(rows_.size()); }
    const DbgwConfig& config() const noexcept { return config_; }

    /// Coefficient per center, ordered by node id.
    std::vector<double> apply(std::span<const double> signal) const;
    double apply_at(NodeId center, std::span<const double> signal) const;

    /// Dense wavelet function centered at `center`.
    std::vector<double> function(NodeId center) const;

private:
    struct Entry {
        NodeId node;
        double value;
    };
    DbgwConfig config_;
    std::vector<std::vector<Entry>> rows_;
};

/// Coefficients at every center (computed concurrently per center).
std::vector<double> dbgw_all_coeffs(const WeightedGraph& g, std::span<const double> signal, const DbgwConfig& config);

/// Band-pass kernel g with g(0) = 0 and decay at infinity, at scale s.
struct SgwKernel {
    std::function<double(double)> g;
    double scale = 10.0;
    std::string name;

    double operator()(double lambda) const { return g(scale * lambda); }
};

/// g(x) = x exp(1 - x), peak 1 at x = 1.
SgwKernel default_sgw_kernel(double scale = 10.0);

/// psi(v) = sum_l g(s lambda_l) u_l(center) u_l(v), exact over all eigenpairs.
std::vector<double> sgw_function(const SpectralBasis& basis, NodeId center, const SgwKernel& kernel);

/// Coefficient per center: U diag(g(s lambda)) U^T S.
std::vector<double> sgw_all_coeffs(const SpectralBasis& basis, std::span<const double> signal, const SgwKernel& kernel);

/// Precomputed SGW operator for repeated use on one graph.
class SgwTransform {
public:
    SgwTransform(const SpectralBasis& basis, const SgwKernel& kernel);
    std::vector<double> apply(std::span<const double> signal) const;

private:
    Eigen::MatrixXd op_;
};

}  // namespace gspi
