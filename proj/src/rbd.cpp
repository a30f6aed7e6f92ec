#include "gspi/baselines.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "gspi/error.hpp"
#include "gspi/parallel.hpp"

namespace gspi {

std::string to_string(BallMetric m) { return m == BallMetric::hop ? "hop" : "distance"; }

BallMetric ball_metric_from_string(std::string_view s)
{
    if (s == "hop")
        return BallMetric::hop;
    if (s == "distance")
        return BallMetric::distance;
    throw ValidationError("unknown ball metric '" + std::string(s) + "'");
}

void RbdParams::validate() const
{
    if (!(radius > 0.0))
        throw ValidationError("RBD radius must be positive");
    if (!(threshold > 0.0))
        throw ValidationError("RBD threshold must be positive");
}

nlohmann::json to_json(const RbdParams& p)
{
    return {{"type", "rbd"}, {"radius", p.radius}, {"threshold", p.threshold}, {"metric", to_string(p.metric)}};
}

RbdParams rbd_params_from_json(const nlohmann::json& j)
{
    RbdParams p;
    p.radius = j.at("radius").get<double>();
    p.threshold = j.at("threshold").get<double>();
    p.metric = ball_metric_from_string(j.value("metric", std::string("hop")));
    p.validate();
    return p;
}

RbdIndex::RbdIndex(const WeightedGraph& g, BallMetric metric)
    : n_(g.node_count()), metric_(metric),
      d_(static_cast<std::size_t>(n_) * n_, std::numeric_limits<double>::infinity())
{
    parallel_for(static_cast<std::size_t>(n_), [&](std::size_t s) {
        double* row = d_.data() + s * n_;
        if (metric_ == BallMetric::hop) {
            const auto h = g.hop_distances(static_cast<NodeId>(s));
            for (int v = 0; v < n_; ++v)
                if (h[v] >= 0)
                    row[v] = h[v];
            return;
        }
        using Item = std::pair<double, NodeId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        row[s] = 0.0;
        heap.push({0.0, static_cast<NodeId>(s)});
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d > row[u])
                continue;
            for (const auto& nb : g.neighbors(u))
                if (d + nb.distance < row[nb.node]) {
                    row[nb.node] = d + nb.distance;
                    heap.push({row[nb.node], nb.node});
                }
        }
    });
}

double rbd_statistic(const RbdIndex& index, std::span<const std::uint8_t> reported, double radius)
{
    if (static_cast<int>(reported.size()) != index.size())
        throw ValidationError("snapshot size does not match graph");
    std::vector<NodeId> infected;
    for (NodeId v = 0; v < index.size(); ++v)
        if (reported[v])
            infected.push_back(v);
    if (infected.empty())
        throw ValidationError("RBD needs at least one reported infected node");
    const int total = static_cast<int>(infected.size());
    double best = 0.0;
    for (NodeId c = 0; c < index.size(); ++c) {
        int inside = 0;
        for (NodeId v : infected)
            inside += index.distance(c, v) <= radius;
        best = std::max(best, static_cast<double>(inside) / std::max(1, total - inside));
    }
    return best;
}

Label rbd_detect(const RbdIndex& index, const Snapshot& snap, const RbdParams& params)
{
    params.validate();
    if (index.metric() != params.metric)
        throw ValidationError("RBD index metric does not match parameters");
    return rbd_statistic(index, snap.reported, params.radius) >= params.threshold ? Label::epidemic
                                                                                  : Label::random_failure;
}

Label rbd_detect(const WeightedGraph& g, const Snapshot& snap, const RbdParams& params)
{
    return rbd_detect(RbdIndex(g, params.metric), snap, params);
}

RbdTuning rbd_tune(const RbdIndex& index, std::span<const Snapshot> snapshots, std::span<const double> radius_grid,
                   std::span<const double> threshold_grid)
{
    if (radius_grid.empty() || threshold_grid.empty())
        throw ValidationError("RBD grids must be non-empty");
    if (snapshots.empty())
        throw ValidationError("RBD tuning needs labeled snapshots");
    std::vector<double> radii(radius_grid.begin(), radius_grid.end());
    std::vector<double> thetas(threshold_grid.begin(), threshold_grid.end());
    std::sort(radii.begin(), radii.end());
    std::sort(thetas.begin(), thetas.end());
    for (double r : radii)
        RbdParams{r, 1.0}.validate();
    for (double t : thetas)
        RbdParams{1.0, t}.validate();

    // statistic per (radius, snapshot)
    std::vector<double> stat(radii.size() * snapshots.size());
    parallel_for(stat.size(), [&](std::size_t k) {
        stat[k] = rbd_statistic(index, snapshots[k % snapshots.size()].reported, radii[k / snapshots.size()]);
    });

    RbdTuning best;
    best.accuracy = -1.0;
    for (std::size_t ri = 0; ri < radii.size(); ++ri)
        for (double t : thetas) {
            int correct = 0;
            for (std::size_t i = 0; i < snapshots.size(); ++i) {
                const auto said = stat[ri * snapshots.size() + i] >= t ? Label::epidemic : Label::random_failure;
                correct += said == snapshots[i].label;
            }
            const double acc = static_cast<double>(correct) / static_cast<double>(snapshots.size());
            if (acc > best.accuracy)
                best = {{radii[ri], t, index.metric()}, acc};
        }
    return best;
}

}  // namespace gspi
