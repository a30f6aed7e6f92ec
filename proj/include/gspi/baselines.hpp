#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "gspi/dynamics.hpp"
#include "gspi/graph.hpp"

namespace gspi {

enum class BallMetric { hop, distance };

std::string to_string(BallMetric m);
BallMetric ball_metric_from_string(std::string_view s);

struct RbdParams {
    double radius = 1.0;
    double threshold = 1.0;
    BallMetric metric = BallMetric::hop;

    /// Throws ValidationError unless radius > 0 and threshold > 0.
    void validate() const;
};

nlohmann::json to_json(const RbdParams& p);
RbdParams rbd_params_from_json(const nlohmann::json& j);

/// All-pairs ball distances of one graph, shared by every snapshot on it.
class RbdIndex {
public:
    RbdIndex(const WeightedGraph& g, BallMetric metric);

    int size() const noexcept { return n_; }
    BallMetric metric() const noexcept { return metric_; }
    double distance(NodeId a, NodeId b) const { return d_[static_cast<std::size_t>(a) * n_ + b]; }

private:
    int n_ = 0;
    BallMetric metric_;
    std::vector<double> d_;
};

/// max over centers c of inside(c) / max(1, outside(c)), counting reported
/// infected nodes within `radius` of c. Needs at least one infected node.
double rbd_statistic(const RbdIndex& index, std::span<const std::uint8_t> reported, double radius);

/// Epidemic iff the statistic reaches the threshold.
Label rbd_detect(const RbdIndex& index, const Snapshot& snap, const RbdParams& params);
Label rbd_detect(const WeightedGraph& g, const Snapshot& snap, const RbdParams& params);

struct RbdTuning {
    RbdParams params;
    double accuracy = 0.0;
};

/// Grid search maximizing accuracy on the given snapshots. Ties go to the
/// smallest radius, then the smallest threshold.
RbdTuning rbd_tune(const RbdIndex& index, std::span<const Snapshot> snapshots, std::span<const double> radius_grid,
                   std::span<const double> threshold_grid);

}  // namespace gspi
