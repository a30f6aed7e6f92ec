#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace gspi {

using NodeId = int;

struct Edge {
    NodeId u;
    NodeId v;
    double distance;  ///< a_uv >= 1
};

struct Neighbor {
    NodeId node;
    double distance;
    double weight;  ///< beta / distance
};

/// Undirected network with per-edge distances a_ij >= 1 and contact weights
/// w(i,j) = beta / a_ij in (0, beta].
///
/// Adjacency lists are sorted by neighbor id. Edges are stored once with
/// u < v, sorted lexicographically. Immutable after construction.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Throws ValidationError on self-loops, out-of-range ids, distance < 1,
    /// beta outside (0,1] or duplicate edges.
    WeightedGraph(int node_count, double beta, std::vector<Edge> edges);

    int node_count() const noexcept { return static_cast<int>(adjacency_.size()); }
    int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
    double beta() const noexcept { return beta_; }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Neighbor>& neighbors(NodeId v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
    int degree(NodeId v) const { return static_cast<int>(neighbors(v).size()); }
    double weighted_degree(NodeId v) const;

    /// w(u,v), 0 when not adjacent.
    double weight(NodeId u, NodeId v) const;
    /// a_uv, nullopt when not adjacent.
    std::optional<double> distance(NodeId u, NodeId v) const;

    int max_degree() const;
    double max_distance() const;

    bool is_connected() const;

    /// Hop distances from `source`; -1 for unreachable nodes.
    std::vector<int> hop_distances(NodeId source) const;

    /// Stable FNV-1a hash of (n, beta, edges).
    std::uint64_t content_hash() const;

private:
    double beta_ = 1.0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

enum class GraphFamily { erdos_renyi, scale_free, geometric, edge_list };

std::string to_string(GraphFamily f);
GraphFamily graph_family_from_string(std::string_view s);

/// Parameters of a random graph model.
struct GraphGenSpec {
    GraphFamily family = GraphFamily::erdos_renyi;
    int n = 100;
    double rho = 0.05;   ///< ER edge probability
    int gamma = 3;       ///< SF attachment count
    double xi = 0.1;     ///< RGG connection radius in the unit square
    double distance_low = 1.0;
    double distance_high = 100.0;
    double beta = 0.5;
    std::uint64_t seed = 1;
    std::string edge_list_path;  ///< only for GraphFamily::edge_list

    /// Throws ValidationError when a field is out of its valid range.
    void validate() const;
};

struct ComponentResult {
    WeightedGraph graph;
    std::vector<NodeId> original_ids;  ///< original_ids[new] = old
};

/// Induced subgraph on the largest connected component, re-indexed in
/// original order. Ties go to the component holding the smallest node id.
ComponentResult largest_component(const WeightedGraph& g);

/// Draws a graph from `spec` and keeps its largest component.
/// Bit-reproducible for a fixed spec. Throws GenerationError when the
/// largest component is a single node.
WeightedGraph generate(const GraphGenSpec& spec);

/// Raw parse of a whitespace-separated edge list ("u v [distance]").
/// Node labels are mapped to dense ids in order of first appearance.
/// Duplicate edges keep the first distance. Lines starting with '#' and
/// blank lines are skipped. The result may be disconnected.
struct ParsedEdgeList {
    WeightedGraph graph;
    std::vector<std::string> labels;  ///< labels[id]
};
ParsedEdgeList parse_edge_list(std::string_view text, double beta);

/// parse_edge_list followed by largest_component.
WeightedGraph from_edge_list(std::string_view text, double beta);

struct GraphStats {
    int order = 0;
    int size = 0;
    double average_degree = 0.0;
    int diameter = 0;                    ///< hop-based
    double average_shortest_path = 0.0;  ///< hop-based, over unordered pairs
};

GraphStats stats(const WeightedGraph& g);

/// Dense combinatorial Laplacian L = D - W.
Eigen::MatrixXd laplacian(const WeightedGraph& g);

nlohmann::json to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& j);

}  // namespace gspi
