#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gspi/dynamics.hpp"
#include "gspi/graph.hpp"
#include "gspi/wavelets.hpp"

namespace gspi {

struct RankedNode {
    NodeId node;
    double coefficient;
};

/// Throws ValidationError unless m_0 > 0 and sum_{r>=1} |m_r| <= m_0.
void check_sign_condition(const MSequence& m);

/// Infected nodes (per `states`) sorted by DBGW coefficient of the +-A
/// signal, descending; ties keep the lower id first. Asserts every infected
/// coefficient is >= 0 (NumericError otherwise).
std::vector<RankedNode> rank_quarantine(const DbgwTransform& transform, std::span<const std::uint8_t> states,
                                        double amplitude = 1000.0);
/// Healthy nodes sorted ascending (most negative first); asserts every
/// healthy coefficient is <= 0.
std::vector<RankedNode> rank_vaccination(const DbgwTransform& transform, std::span<const std::uint8_t> states,
                                         double amplitude = 1000.0);

/// Convenience forms on reported states.
std::vector<RankedNode> rank_quarantine(const WeightedGraph& g, const Snapshot& snap, const DbgwConfig& config = {},
                                        double amplitude = 1000.0);
std::vector<RankedNode> rank_vaccination(const WeightedGraph& g, const Snapshot& snap, const DbgwConfig& config = {},
                                         double amplitude = 1000.0);

enum class QuarantinePolicy { none, random, degree, dbgw };

std::string to_string(QuarantinePolicy p);
QuarantinePolicy quarantine_policy_from_string(std::string_view s);

struct QuarantineSchedule {
    /// Infected count that starts the observation, as a fraction of N.
    double start_fraction = 0.20;
    /// Share of the non-quarantined infected quarantined at observation start.
    double initial_fraction = 0.20;
    /// Share quarantined at every later trigger.
    double repeat_fraction = 0.20;
    /// A trigger fires each time infections grow by this share of N ...
    double trigger_fraction = 0.10;
    /// ... or by this many nodes when set.
    std::optional<int> trigger_count;
    /// Degree policy ranks by sum_j w(i,j) unless false.
    bool weighted_degree = true;

    void validate() const;
    int start_count(int n) const;
    int trigger_size(int n) const;
};

struct MicroConfig {
    QuarantineSchedule schedule;
    std::vector<QuarantinePolicy> policies{QuarantinePolicy::none, QuarantinePolicy::random,
                                           QuarantinePolicy::degree, QuarantinePolicy::dbgw};
    std::vector<int> target_phis;
    int runs = 50;
    int max_t = 500;       ///< steps after observation start
    std::vector<NodeId> seeds;  ///< fixed epidemic seeds; empty draws seed_count uniform seeds per run
    int seed_count = 1;
    double amplitude = 1000.0;
    DbgwConfig dbgw;
    std::uint64_t master_seed = 1;

    void validate(int n) const;
};

struct MicroRow {
    QuarantinePolicy policy;
    int phi = 0;
    double mean_time = 0.0;
    double std_time = 0.0;
    int runs = 0;
    int censored = 0;
};

struct MicroReport {
    std::vector<MicroRow> rows;  ///< policy-major, then phi in config order
    /// times[p][k][run]: steps from observation start to phi k under policy p;
    /// censored runs hold max_t.
    std::vector<std::vector<std::vector<double>>> times;
    std::vector<std::vector<std::vector<std::uint8_t>>> censored;  ///< same layout, 1 if phi was never reached
};

/// Monte Carlo quarantine experiment. Every run shares its pre-observation
/// trajectory and spreading randomness across policies; policies are
/// recomputed on the current true state at each trigger.
MicroReport quarantine_experiment(const WeightedGraph& g, const MicroConfig& config);

/// "policy,phi,mean_time,std_time,runs,censored"
std::string micro_to_csv(const MicroReport& report);

}  // namespace gspi
