#include "gspi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gspi {

std::string to_string(Label l) { return l == Label::epidemic ? "epidemic" : "random_failure"; }

Label label_from_string(std::string_view s)
{
    if (s == "epidemic")
        return Label::epidemic;
    if (s == "random_failure")
        return Label::random_failure;
    throw ValidationError("unknown label '" + std::string(s) + "'");
}

int Snapshot::reported_infected() const { return static_cast<int>(std::count(reported.begin(), reported.end(), 1)); }

int Snapshot::true_infected() const { return static_cast<int>(std::count(truth.begin(), truth.end(), 1)); }

SiProcess::SiProcess(const WeightedGraph& g, std::span<const NodeId> seeds, std::uint64_t rng_seed)
    : graph_(&g), rng_(rng_seed), infected_(static_cast<std::size_t>(g.node_count()), 0),
      quarantined_(infected_.size(), 0), vaccinated_(infected_.size(), 0)
{
    if (seeds.empty())
        throw ValidationError("epidemic needs at least one seed");
    for (NodeId s : seeds) {
        if (s < 0 || s >= g.node_count())
            throw ValidationError("seed " + std::to_string(s) + " is not a node");
        if (!infected_[s]) {
            infected_[s] = 1;
            ++infected_count_;
        }
    }
}

void SiProcess::step()
{
    ++t_;
    std::vector<NodeId> fresh;
    std::vector<std::uint8_t> hit(infected_.size(), 0);
    const int n = graph_->node_count();
    for (NodeId i = 0; i < n; ++i) {
        if (!infected_[i] || quarantined_[i])
            continue;
        for (const auto& nb : graph_->neighbors(i)) {
            const NodeId j = nb.node;
            if (infected_[j] || vaccinated_[j] || hit[j])
                continue;
            if (rng_.bernoulli(nb.weight)) {
                hit[j] = 1;
                fresh.push_back(j);
                if (audit_)
                    log_.push_back({t_, i, j});
            }
        }
    }
    for (NodeId j : fresh)
        infected_[j] = 1;
    infected_count_ += static_cast<int>(fresh.size());
}

void SiProcess::quarantine(NodeId v)
{
    if (!infected_.at(static_cast<std::size_t>(v)))
        throw ValidationError("only infected nodes can be quarantined");
    quarantined_[v] = 1;
}

void SiProcess::vaccinate(NodeId v)
{
    if (infected_.at(static_cast<std::size_t>(v)))
        throw ValidationError("only healthy nodes can be vaccinated");
    vaccinated_[v] = 1;
}

bool SiProcess::halted() const
{
    for (NodeId i = 0; i < graph_->node_count(); ++i) {
        if (!infected_[i] || quarantined_[i])
            continue;
        for (const auto& nb : graph_->neighbors(i))
            if (!infected_[nb.node] && !vaccinated_[nb.node])
                return false;
    }
    return true;
}

Snapshot SiProcess::snapshot() const
{
    Snapshot s;
    s.reported = infected_;
    s.truth = infected_;
    s.t = t_;
    s.label = Label::epidemic;
    return s;
}

Snapshot simulate_epidemic(const WeightedGraph& g, std::span<const NodeId> seeds, int target_phi, int max_t,
                           std::uint64_t rng_seed)
{
    if (target_phi < 1 || target_phi > g.node_count())
        throw ValidationError("target_phi must lie in [1, N]");
    if (max_t < 0)
        throw ValidationError("max_t must be >= 0");
    SiProcess process(g, seeds, rng_seed);
    while (process.infected_count() < target_phi) {
        if (process.time() >= max_t)
            throw SimulationTimeout("epidemic reached " + std::to_string(process.infected_count()) + " of "
                                        + std::to_string(target_phi) + " infections by t=" + std::to_string(max_t),
                                    process.snapshot());
        process.step();
    }
    return process.snapshot();
}

Snapshot simulate_epidemic_exact(const WeightedGraph& g, std::span<const NodeId> seeds, int target_phi, int max_t,
                                 std::uint64_t rng_seed)
{
    if (target_phi < 1 || target_phi > g.node_count())
        throw ValidationError("target_phi must lie in [1, N]");
    if (max_t < 0)
        throw ValidationError("max_t must be >= 0");
    SiProcess process(g, seeds, rng_seed);
    auto before = process.infected();
    while (process.infected_count() < target_phi) {
        if (process.time() >= max_t)
            throw SimulationTimeout("epidemic reached " + std::to_string(process.infected_count()) + " of "
                                        + std::to_string(target_phi) + " infections by t=" + std::to_string(max_t),
                                    process.snapshot());
        before = process.infected();
        process.step();
    }
    auto snap = process.snapshot();
    int excess = process.infected_count() - target_phi;
    if (excess > 0) {
        std::vector<NodeId> fresh;
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (snap.reported[v] && !before[v])
                fresh.push_back(v);
        Rng rng(derive_seed(rng_seed, {1}));
        for (int i = 0; i < excess; ++i) {
            const auto j = static_cast<std::size_t>(i) + rng.below(fresh.size() - static_cast<std::size_t>(i));
            std::swap(fresh[static_cast<std::size_t>(i)], fresh[j]);
            snap.reported[fresh[static_cast<std::size_t>(i)]] = 0;
            snap.truth[fresh[static_cast<std::size_t>(i)]] = 0;
        }
    }
    return snap;
}

namespace {

// first k entries of a partial Fisher-Yates shuffle of 0..n-1
std::vector<NodeId> sample_without_replacement(int n, int k, Rng& rng)
{
    std::vector<NodeId> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

}  // namespace

Snapshot simulate_random_failures(const WeightedGraph& g, int target_phi, std::uint64_t rng_seed)
{
    const int n = g.node_count();
    if (target_phi < 1 || target_phi > n)
        throw ValidationError("target_phi must lie in [1, N]");
    Rng rng(rng_seed);
    Snapshot s;
    s.truth.assign(static_cast<std::size_t>(n), 0);
    for (NodeId v : sample_without_replacement(n, target_phi, rng))
        s.truth[v] = 1;
    s.reported = s.truth;
    s.label = Label::random_failure;
    return s;
}

Snapshot simulate_random_failures_bernoulli(const WeightedGraph& g, double p_fail, std::uint64_t rng_seed)
{
    if (!(p_fail >= 0.0 && p_fail <= 1.0))
        throw ValidationError("p_fail must lie in [0, 1]");
    Rng rng(rng_seed);
    Snapshot s;
    s.truth.assign(static_cast<std::size_t>(g.node_count()), 0);
    for (auto& x : s.truth)
        x = rng.bernoulli(p_fail) ? 1 : 0;
    s.reported = s.truth;
    s.label = Label::random_failure;
    return s;
}

std::pair<int, int> NoiseSpec::counts(int healthy, int infected) const
{
    if (!(fp_rate >= 0.0 && fp_rate < 1.0) || !(fn_rate >= 0.0 && fn_rate < 1.0))
        throw ValidationError("noise rates must lie in [0, 1)");
    // the epsilon keeps products like 0.1 * 90 from rounding up to 10
    auto ceil_count = [](double rate, int population) {
        return static_cast<int>(std::ceil(rate * population - 1e-9));
    };
    const int fp = n_fp ? *n_fp : ceil_count(fp_rate, healthy);
    const int fn = n_fn ? *n_fn : ceil_count(fn_rate, infected);
    if (fp < 0 || fn < 0)
        throw ValidationError("noise counts must be nonnegative");
    return {fp, fn};
}

Snapshot add_report_noise(const Snapshot& snap, const NoiseSpec& noise, std::uint64_t rng_seed)
{
    if (!snap.has_truth())
        throw ValidationError("report noise needs true states");
    std::vector<NodeId> healthy, infected;
    for (NodeId v = 0; v < snap.node_count(); ++v)
        (snap.truth[v] ? infected : healthy).push_back(v);
    const auto [n_fp, n_fn] = noise.counts(static_cast<int>(healthy.size()), static_cast<int>(infected.size()));
    if (n_fp > static_cast<int>(healthy.size()) || n_fn > static_cast<int>(infected.size()))
        throw ValidationError("noise flip counts exceed available nodes");

    Rng rng(rng_seed);
    Snapshot out = snap;
    out.reported = snap.truth;
    for (int idx : sample_without_replacement(static_cast<int>(healthy.size()), n_fp, rng))
        out.reported[healthy[idx]] = 1;
    for (int idx : sample_without_replacement(static_cast<int>(infected.size()), n_fn, rng))
        out.reported[infected[idx]] = 0;
    if (out.reported_infected() < 1)
        throw ValidationError("noise leaves no node reported infected");
    return out;
}

GraphSignal to_signal(const Snapshot& snap, double amplitude)
{
    if (!(amplitude > 0.0))
        throw ValidationError("signal amplitude must be positive");
    GraphSignal s;
    s.amplitude = amplitude;
    s.values.reserve(snap.reported.size());
    for (auto r : snap.reported)
        s.values.push_back(r ? amplitude : -amplitude);
    return s;
}

GraphSignal to_true_signal(const Snapshot& snap, double amplitude)
{
    if (!snap.has_truth())
        throw ValidationError("snapshot has no true states");
    Snapshot copy;
    copy.reported = snap.truth;
    return to_signal(copy, amplitude);
}

std::vector<NodeId> far_apart_seeds(const WeightedGraph& g, int count, std::uint64_t rng_seed)
{
    const int n = g.node_count();
    if (count < 1 || count > n)
        throw ValidationError("seed count must lie in [1, N]");
    Rng rng(rng_seed);
    std::vector<NodeId> seeds{static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)))};
    std::vector<int> nearest = g.hop_distances(seeds[0]);
    while (static_cast<int>(seeds.size()) < count) {
        NodeId best = -1;
        for (NodeId v = 0; v < n; ++v) {
            if (std::find(seeds.begin(), seeds.end(), v) != seeds.end())
                continue;
            if (best < 0 || nearest[v] > nearest[best])
                best = v;
        }
        seeds.push_back(best);
        auto d = g.hop_distances(best);
        for (NodeId v = 0; v < n; ++v)
            if (d[v] >= 0 && (nearest[v] < 0 || d[v] < nearest[v]))
                nearest[v] = d[v];
    }
    return seeds;
}

std::vector<NodeId> random_seeds(const WeightedGraph& g, int count, std::uint64_t rng_seed)
{
    if (count < 1 || count > g.node_count())
        throw ValidationError("seed count must lie in [1, N]");
    Rng rng(rng_seed);
    return sample_without_replacement(g.node_count(), count, rng);
}

std::string snapshot_to_csv(const Snapshot& snap)
{
    std::ostringstream out;
    out << "node,reported,true,label,t\n";
    const std::string label = to_string(snap.label);
    for (NodeId v = 0; v < snap.node_count(); ++v) {
        out << v << ',' << (snap.reported[v] ? 'I' : 'H') << ',';
        if (snap.has_truth())
            out << (snap.truth[v] ? 'I' : 'H');
        out << ',' << label << ',' << snap.t << '\n';
    }
    return out.str();
}

Snapshot snapshot_from_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line))
        throw ParseError("empty snapshot file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "node,reported,true,label,t")
        throw ParseError("unexpected snapshot header '" + line + "'", 1);

    Snapshot s;
    bool any_truth = false, any_missing_truth = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            f.push_back(cell);
        if (line.back() == ',')
            f.emplace_back();
        if (f.size() != 5)
            throw ParseError("expected 5 fields", line_no);
        auto integer = [&](const std::string& x) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(x, &used);
            } catch (const std::logic_error&) {
                used = 0;
            }
            if (used == 0 || used != x.size())
                throw ParseError("expected an integer, got '" + x + "'", line_no);
            return v;
        };
        const int node = integer(f[0]);
        if (node != s.node_count())
            throw ParseError("nodes must be listed densely in order", line_no);
        auto state = [&](const std::string& x) -> std::uint8_t {
            if (x == "I")
                return 1;
            if (x == "H")
                return 0;
            throw ParseError("state must be I or H", line_no);
        };
        s.reported.push_back(state(f[1]));
        if (f[2].empty())
            any_missing_truth = true;
        else {
            any_truth = true;
            s.truth.push_back(state(f[2]));
        }
        s.label = label_from_string(f[3]);
        s.t = integer(f[4]);
    }
    if (any_truth && any_missing_truth)
        throw ParseError("true column must be filled for every node or none");
    if (s.reported.empty())
        throw ParseError("snapshot has no nodes");
    return s;
}

}  // namespace gspi
