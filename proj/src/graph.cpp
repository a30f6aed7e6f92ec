#include "gspi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gspi/error.hpp"
#include "gspi/rng.hpp"

namespace gspi {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v)
{
    if (u > v)
        std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

WeightedGraph::WeightedGraph(int node_count, double beta, std::vector<Edge> edges) : beta_(beta)
{
    if (node_count < 1)
        throw ValidationError("graph needs at least one node");
    if (!(beta > 0.0 && beta <= 1.0))
        throw ValidationError("beta must lie in (0, 1]");
    for (auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
            throw ValidationError("edge endpoint out of range");
        if (e.u == e.v)
            throw ValidationError("self-loop at node " + std::to_string(e.u));
        if (!(e.distance >= 1.0) || !std::isfinite(e.distance))
            throw ValidationError("edge distance must be a finite value >= 1");
        if (e.u > e.v)
            std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw ValidationError("duplicate edge " + std::to_string(edges[i].u) + "-" + std::to_string(edges[i].v));

    edges_ = std::move(edges);
    adjacency_.assign(static_cast<std::size_t>(node_count), {});
    for (const auto& e : edges_) {
        const double w = beta_ / e.distance;
        adjacency_[e.u].push_back({e.v, e.distance, w});
        adjacency_[e.v].push_back({e.u, e.distance, w});
    }
    for (auto& adj : adjacency_)
        std::sort(adj.begin(), adj.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

double WeightedGraph::weighted_degree(NodeId v) const
{
    double d = 0.0;
    for (const auto& nb : neighbors(v))
        d += nb.weight;
    return d;
}

double WeightedGraph::weight(NodeId u, NodeId v) const
{
    const auto& adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Neighbor& a, NodeId x) { return a.node < x; });
    return (it != adj.end() && it->node == v) ? it->weight : 0.0;
}

std::optional<double> WeightedGraph::distance(NodeId u, NodeId v) const
{
    const auto& adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Neighbor& a, NodeId x) { return a.node < x; });
    if (it != adj.end() && it->node == v)
        return it->distance;
    return std::nullopt;
}

int WeightedGraph::max_degree() const
{
    int d = 0;
    for (const auto& adj : adjacency_)
        d = std::max(d, static_cast<int>(adj.size()));
    return d;
}

double WeightedGraph::max_distance() const
{
    double d = 0.0;
    for (const auto& e : edges_)
        d = std::max(d, e.distance);
    return d;
}

std::vector<int> WeightedGraph::hop_distances(NodeId source) const
{
    std::vector<int> dist(adjacency_.size(), -1);
    std::queue<NodeId> q;
    dist.at(static_cast<std::size_t>(source)) = 0;
    q.push(source);
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        for (const auto& nb : adjacency_[u]) {
            if (dist[nb.node] < 0) {
                dist[nb.node] = dist[u] + 1;
                q.push(nb.node);
            }
        }
    }
    return dist;
}

bool WeightedGraph::is_connected() const
{
    if (adjacency_.empty())
        return false;
    auto d = hop_distances(0);
    return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

std::uint64_t WeightedGraph::content_hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    const std::int64_t n = node_count();
    feed(&n, sizeof n);
    feed(&beta_, sizeof beta_);
    for (const auto& e : edges_) {
        const std::int32_t uv[2] = {e.u, e.v};
        feed(uv, sizeof uv);
        feed(&e.distance, sizeof e.distance);
    }
    return h;
}

std::string to_string(GraphFamily f)
{
    switch (f) {
    case GraphFamily::erdos_renyi: return "ER";
    case GraphFamily::scale_free: return "SF";
    case GraphFamily::geometric: return "RGG";
    case GraphFamily::edge_list: return "EdgeList";
    }
    return "?";
}

GraphFamily graph_family_from_string(std::string_view s)
{
    if (s == "ER" || s == "er")
        return GraphFamily::erdos_renyi;
    if (s == "SF" || s == "sf")
        return GraphFamily::scale_free;
    if (s == "RGG" || s == "rgg")
        return GraphFamily::geometric;
    if (s == "EdgeList" || s == "edge_list" || s == "edgelist")
        return GraphFamily::edge_list;
    throw ValidationError("unknown graph family '" + std::string(s) + "'");
}

void GraphGenSpec::validate() const
{
    if (!(beta > 0.0 && beta <= 1.0))
        throw ValidationError("beta must lie in (0, 1]");
    if (!(distance_low >= 1.0) || !(distance_high >= distance_low))
        throw ValidationError("distance range must satisfy 1 <= low <= high");
    switch (family) {
    case GraphFamily::erdos_renyi:
        if (n < 2)
            throw ValidationError("n must be >= 2");
        if (!(rho > 0.0 && rho <= 1.0))
            throw ValidationError("rho must lie in (0, 1]");
        break;
    case GraphFamily::scale_free:
        if (gamma < 1)
            throw ValidationError("gamma must be >= 1");
        if (n < gamma + 1)
            throw ValidationError("n must be >= gamma + 1");
        break;
    case GraphFamily::geometric:
        if (n < 2)
            throw ValidationError("n must be >= 2");
        if (!(xi > 0.0 && xi <= std::sqrt(2.0)))
            throw ValidationError("xi must lie in (0, sqrt(2)]");
        break;
    case GraphFamily::edge_list:
        if (edge_list_path.empty())
            throw ValidationError("edge list family needs a path");
        break;
    }
}

ComponentResult largest_component(const WeightedGraph& g)
{
    const int n = g.node_count();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<int> sizes;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] >= 0)
            continue;
        const int id = static_cast<int>(sizes.size());
        int size = 0;
        std::vector<NodeId> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            ++size;
            for (const auto& nb : g.neighbors(u)) {
                if (comp[nb.node] < 0) {
                    comp[nb.node] = id;
                    stack.push_back(nb.node);
                }
            }
        }
        sizes.push_back(size);
    }
    // components are numbered by their smallest node id, so max_element keeps the first
    const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    ComponentResult out;
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    for (NodeId v = 0; v < n; ++v) {
        if (comp[v] == best) {
            remap[v] = static_cast<int>(out.original_ids.size());
            out.original_ids.push_back(v);
        }
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (comp[e.u] == best)
            edges.push_back({remap[e.u], remap[e.v], e.distance});
    out.graph = WeightedGraph(static_cast<int>(out.original_ids.size()), g.beta(), std::move(edges));
    return out;
}

namespace {

using Pairs = std::vector<std::pair<NodeId, NodeId>>;

Pairs erdos_renyi_pairs(int n, double rho, Rng& rng)
{
    Pairs pairs;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(rho))
                pairs.emplace_back(u, v);
    return pairs;
}

// Start from a complete graph on gamma+1 nodes; each new node attaches to
// gamma distinct existing nodes with probability proportional to degree.
Pairs scale_free_pairs(int n, int gamma, Rng& rng)
{
    Pairs pairs;
    std::vector<NodeId> endpoints;  // node repeated once per incident edge
    for (NodeId u = 0; u <= gamma; ++u)
        for (NodeId v = u + 1; v <= gamma; ++v) {
            pairs.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    std::vector<NodeId> chosen;
    for (NodeId v = gamma + 1; v < n; ++v) {
        chosen.clear();
        // rejection on repeats is sequential sampling without replacement
        while (static_cast<int>(chosen.size()) < gamma) {
            NodeId t = endpoints[rng.below(endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
                chosen.push_back(t);
        }
        for (NodeId t : chosen) {
            pairs.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return pairs;
}

Pairs geometric_pairs(int n, double xi, Rng& rng)
{
    std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
        p.first = rng.uniform();
        p.second = rng.uniform();
    }
    // grid bucketing keeps this near-linear for small radii
    const int cells = std::max(1, static_cast<int>(1.0 / xi));
    auto cell_of = [cells](double x) { return std::min(cells - 1, static_cast<int>(x * cells)); };
    std::vector<std::vector<NodeId>> grid(static_cast<std::size_t>(cells * cells));
    for (NodeId i = 0; i < n; ++i)
        grid[cell_of(pts[i].first) * cells + cell_of(pts[i].second)].push_back(i);

    const double r2 = xi * xi;
    Pairs pairs;
    for (NodeId i = 0; i < n; ++i) {
        const int cx = cell_of(pts[i].first), cy = cell_of(pts[i].second);
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                const int x = cx + dx, y = cy + dy;
                if (x < 0 || y < 0 || x >= cells || y >= cells)
                    continue;
                for (NodeId j : grid[x * cells + y]) {
                    if (j <= i)
                        continue;
                    const double ddx = pts[i].first - pts[j].first, ddy = pts[i].second - pts[j].second;
                    if (ddx * ddx + ddy * ddy <= r2)
                        pairs.emplace_back(i, j);
                }
            }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

}  // namespace

WeightedGraph generate(const GraphGenSpec& spec)
{
    spec.validate();
    if (spec.family == GraphFamily::edge_list)
        throw ValidationError("edge-list graphs are loaded, not generated");

    Rng rng(spec.seed);
    Pairs pairs;
    switch (spec.family) {
    case GraphFamily::erdos_renyi: pairs = erdos_renyi_pairs(spec.n, spec.rho, rng); break;
    case GraphFamily::scale_free: pairs = scale_free_pairs(spec.n, spec.gamma, rng); break;
    case GraphFamily::geometric: pairs = geometric_pairs(spec.n, spec.xi, rng); break;
    case GraphFamily::edge_list: break;
    }
    for (auto& p : pairs)
        if (p.first > p.second)
            std::swap(p.first, p.second);
    std::sort(pairs.begin(), pairs.end());

    // distances are drawn after the structure, in canonical edge order
    Rng dist_rng(derive_seed(spec.seed, {0x64697374}));
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [u, v] : pairs)
        edges.push_back({u, v, dist_rng.uniform(spec.distance_low, spec.distance_high)});

    auto comp = largest_component(WeightedGraph(spec.n, spec.beta, std::move(edges)));
    if (comp.graph.node_count() < 2)
        throw GenerationError("generated graph has no component with more than one node");
    return std::move(comp.graph);
}

ParsedEdgeList parse_edge_list(std::string_view text, double beta)
{
    ParsedEdgeList out;
    std::unordered_map<std::string, NodeId> ids;
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    auto id_of = [&](const std::string& label) {
        auto [it, inserted] = ids.emplace(label, static_cast<NodeId>(out.labels.size()));
        if (inserted)
            out.labels.push_back(label);
        return it->second;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::istringstream in(line);
        std::string a, b, c, extra;
        if (!(in >> a) || a[0] == '#')
            continue;
        if (!(in >> b))
            throw ParseError("expected 'u v [distance]'", line_no);
        double distance = 1.0;
        if (in >> c) {
            char* tail = nullptr;
            distance = std::strtod(c.c_str(), &tail);
            if (tail == c.c_str() || *tail != '\0')
                throw ParseError("bad distance '" + c + "'", line_no);
            if (in >> extra)
                throw ParseError("too many fields", line_no);
        }
        if (!(distance >= 1.0))
            throw ValidationError("distance < 1 on line " + std::to_string(line_no));
        const NodeId u = id_of(a), v = id_of(b);
        if (u == v)
            throw ParseError("self-loop", line_no);
        if (seen.insert(edge_key(u, v)).second)
            edges.push_back({u, v, distance});
        if (end == text.size())
            break;
    }
    if (edges.empty())
        throw ValidationError("no edges");
    out.graph = WeightedGraph(static_cast<int>(out.labels.size()), beta, std::move(edges));
    return out;
}

WeightedGraph from_edge_list(std::string_view text, double beta)
{
    return largest_component(parse_edge_list(text, beta).graph).graph;
}

GraphStats stats(const WeightedGraph& g)
{
    GraphStats s;
    s.order = g.node_count();
    s.size = g.edge_count();
    s.average_degree = s.order ? 2.0 * s.size / s.order : 0.0;
    long double total = 0;
    long long pairs = 0;
    for (NodeId v = 0; v < s.order; ++v) {
        auto d = g.hop_distances(v);
        for (NodeId u = v + 1; u < s.order; ++u) {
            if (d[u] < 0)
                continue;
            s.diameter = std::max(s.diameter, d[u]);
            total += d[u];
            ++pairs;
        }
    }
    s.average_shortest_path = pairs ? static_cast<double>(total / pairs) : 0.0;
    return s;
}

Eigen::MatrixXd laplacian(const WeightedGraph& g)
{
    const int n = g.node_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (NodeId i = 0; i < n; ++i) {
        double d = 0.0;
        for (const auto& nb : g.neighbors(i)) {
            L(i, nb.node) = -nb.weight;
            d += nb.weight;
        }
        L(i, i) = d;
    }
    return L;
}

nlohmann::json to_json(const WeightedGraph& g)
{
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges())
        edges.push_back({e.u, e.v, e.distance});
    return {{"beta", g.beta()}, {"n", g.node_count()}, {"edges", std::move(edges)}};
}

WeightedGraph graph_from_json(const nlohmann::json& j)
{
    try {
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges"))
            edges.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>()});
        return WeightedGraph(j.at("n").get<int>(), j.at("beta").get<double>(), std::move(edges));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("graph json: ") + ex.what());
    }
}

}  // namespace gspi
