#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gspi/error.hpp"
#include "gspi/graph.hpp"
#include "gspi/rng.hpp"

namespace gspi {

enum class Label { random_failure = 0, epidemic = 1 };

std::string to_string(Label l);
Label label_from_string(std::string_view s);

/// Per-node reported states (and true states when known) at time t.
/// States are stored as 1 = infected, 0 = healthy.
struct Snapshot {
    std::vector<std::uint8_t> reported;
    std::vector<std::uint8_t> truth;  ///< empty when unknown
    int t = 0;
    Label label = Label::random_failure;

    int node_count() const noexcept { return static_cast<int>(reported.size()); }
    bool has_truth() const noexcept { return !truth.empty(); }
    int reported_infected() const;
    int true_infected() const;
};

/// The +-A binary signal of a snapshot.
struct GraphSignal {
    std::vector<double> values;
    double amplitude = 1000.0;

    int size() const noexcept { return static_cast<int>(values.size()); }
};

/// Thrown when an epidemic misses its target within max_t steps.
class SimulationTimeout : public Error {
public:
    SimulationTimeout(const std::string& what, Snapshot partial) : Error(what), partial_(std::move(partial)) {}
    const Snapshot& partial() const noexcept { return partial_; }

private:
    Snapshot partial_;
};

/// Discrete-time SI process with synchronous updates.
///
/// During each step every transmitting infected node attempts each
/// susceptible neighbor independently with probability w(i,j); infections
/// take effect at the end of the step. Quarantined nodes stay infected but
/// never transmit; vaccinated nodes are never infected.
class SiProcess {
public:
    struct Transmission {
        int t;
        NodeId source;
        NodeId target;
    };

    SiProcess(const WeightedGraph& g, std::span<const NodeId> seeds, std::uint64_t rng_seed);

    void step();

    int time() const noexcept { return t_; }
    int infected_count() const noexcept { return infected_count_; }
    const std::vector<std::uint8_t>& infected() const noexcept { return infected_; }
    bool is_quarantined(NodeId v) const { return quarantined_.at(static_cast<std::size_t>(v)) != 0; }
    bool is_vaccinated(NodeId v) const { return vaccinated_.at(static_cast<std::size_t>(v)) != 0; }

    /// v must be infected. Throws ValidationError otherwise.
    void quarantine(NodeId v);
    /// v must be healthy. Throws ValidationError otherwise.
    void vaccinate(NodeId v);

    /// True when no transmitter has a susceptible, non-vaccinated neighbor.
    bool halted() const;

    /// Optional record of every successful transmission.
    void enable_audit(bool on) { audit_ = on; }
    const std::vector<Transmission>& audit_log() const noexcept { return log_; }

    Snapshot snapshot() const;

private:
    const WeightedGraph* graph_;
    Rng rng_;
    int t_ = 0;
    int infected_count_ = 0;
    std::vector<std::uint8_t> infected_;
    std::vector<std::uint8_t> quarantined_;
    std::vector<std::uint8_t> vaccinated_;
    bool audit_ = false;
    std::vector<Transmission> log_;
};

/// Runs SI until the first step with at least `target_phi` infected nodes.
/// Throws SimulationTimeout (carrying the partial snapshot) if max_t passes first.
Snapshot simulate_epidemic(const WeightedGraph& g, std::span<const NodeId> seeds, int target_phi, int max_t,
                           std::uint64_t rng_seed);

/// As simulate_epidemic, but when the final step overshoots, a uniform subset
/// of that step's new infections is kept so exactly target_phi nodes are infected.
Snapshot simulate_epidemic_exact(const WeightedGraph& g, std::span<const NodeId> seeds, int target_phi, int max_t,
                                 std::uint64_t rng_seed);

/// Exactly target_phi distinct nodes, uniformly without replacement.
Snapshot simulate_random_failures(const WeightedGraph& g, int target_phi, std::uint64_t rng_seed);

/// Per-node Bernoulli(p_fail) failures; the count is not controlled.
Snapshot simulate_random_failures_bernoulli(const WeightedGraph& g, double p_fail, std::uint64_t rng_seed);

/// Report noise. Rates apply to the true healthy (fp) and true infected (fn)
/// populations with ceiling rounding; explicit counts override the rates.
struct NoiseSpec {
    double fp_rate = 0.0;
    double fn_rate = 0.0;
    std::optional<int> n_fp;
    std::optional<int> n_fn;

    /// Resolved (n_fp, n_fn) for the given true counts.
    std::pair<int, int> counts(int healthy, int infected) const;
};

/// Flips reports uniformly at random; true states are preserved. Throws
/// ValidationError when counts exceed the available nodes or when no node
/// would be reported infected.
Snapshot add_report_noise(const Snapshot& snap, const NoiseSpec& noise, std::uint64_t rng_seed);

/// S(i) = +A for reported infected, -A otherwise.
GraphSignal to_signal(const Snapshot& snap, double amplitude);

/// Same, from true states.
GraphSignal to_true_signal(const Snapshot& snap, double amplitude);

/// Greedy far-apart seed placement: first seed uniform, then repeatedly the
/// node maximizing hop distance to the chosen set (lowest id on ties).
std::vector<NodeId> far_apart_seeds(const WeightedGraph& g, int count, std::uint64_t rng_seed);

/// Uniform distinct seeds.
std::vector<NodeId> random_seeds(const WeightedGraph& g, int count, std::uint64_t rng_seed);

/// CSV with header "node,reported,true,label,t"; states are I or H, the
/// true column is empty when unknown.
std::string snapshot_to_csv(const Snapshot& snap);
Snapshot snapshot_from_csv(std::string_view text);

}  // namespace gspi
