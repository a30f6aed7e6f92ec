#include "gspi/micro.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gspi/error.hpp"
#include "gspi/io.hpp"
#include "gspi/parallel.hpp"
#include "gspi/rng.hpp"
#include "gspi/stats.hpp"

namespace gspi {

void check_sign_condition(const MSequence& m)
{
    if (m.values.empty() || !(m.values[0] > 0.0))
        throw ValidationError("ranking needs m_0 > 0");
    double tail = 0.0;
    for (std::size_t r = 1; r < m.values.size(); ++r)
        tail += std::abs(m.values[r]);
    if (tail > m.values[0] * (1.0 + 1e-12))
        throw ValidationError("ranking needs sum_{r>=1} |m_r| <= m_0");
}

namespace {

std::vector<double> state_signal(std::span<const std::uint8_t> states, double amplitude)
{
    std::vector<double> s(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        s[i] = states[i] ? amplitude : -amplitude;
    return s;
}

std::vector<RankedNode> rank(const DbgwTransform& transform, std::span<const std::uint8_t> states, double amplitude,
                             bool infected)
{
    check_sign_condition(transform.config().m);
    if (static_cast<int>(states.size()) != transform.size())
        throw ValidationError("state vector does not match graph");
    const auto signal = state_signal(states, amplitude);
    const double tol = 1e-9 * amplitude;
    std::vector<RankedNode> out;
    for (NodeId v = 0; v < transform.size(); ++v) {
        if ((states[v] != 0) != infected)
            continue;
        const double c = transform.apply_at(v, signal);
        if (infected ? c < -tol : c > tol)
            throw NumericError("DBGW coefficient of node " + std::to_string(v) + " has the wrong sign");
        out.push_back({v, c});
    }
    if (infected)
        std::stable_sort(out.begin(), out.end(),
                         [](const RankedNode& a, const RankedNode& b) { return a.coefficient > b.coefficient; });
    else
        std::stable_sort(out.begin(), out.end(),
                         [](const RankedNode& a, const RankedNode& b) { return a.coefficient < b.coefficient; });
    return out;
}

}  // namespace

std::vector<RankedNode> rank_quarantine(const DbgwTransform& transform, std::span<const std::uint8_t> states,
                                        double amplitude)
{
    return rank(transform, states, amplitude, true);
}

std::vector<RankedNode> rank_vaccination(const DbgwTransform& transform, std::span<const std::uint8_t> states,
                                         double amplitude)
{
    return rank(transform, states, amplitude, false);
}

std::vector<RankedNode> rank_quarantine(const WeightedGraph& g, const Snapshot& snap, const DbgwConfig& config,
                                        double amplitude)
{
    check_sign_condition(config.m);
    return rank_quarantine(DbgwTransform(g, config), snap.reported, amplitude);
}

std::vector<RankedNode> rank_vaccination(const WeightedGraph& g, const Snapshot& snap, const DbgwConfig& config,
                                         double amplitude)
{
    check_sign_condition(config.m);
    return rank_vaccination(DbgwTransform(g, config), snap.reported, amplitude);
}

std::string to_string(QuarantinePolicy p)
{
    switch (p) {
    case QuarantinePolicy::none: return "none";
    case QuarantinePolicy::random: return "random";
    case QuarantinePolicy::degree: return "degree";
    case QuarantinePolicy::dbgw: return "dbgw";
    }
    return "?";
}

QuarantinePolicy quarantine_policy_from_string(std::string_view s)
{
    for (auto p : {QuarantinePolicy::none, QuarantinePolicy::random, QuarantinePolicy::degree, QuarantinePolicy::dbgw})
        if (s == to_string(p))
            return p;
    throw ValidationError("unknown quarantine policy '" + std::string(s) + "'");
}

void QuarantineSchedule::validate() const
{
    auto unit = [](double x, const char* name) {
        if (!(x >= 0.0 && x <= 1.0))
            throw ValidationError(std::string(name) + " must lie in [0, 1]");
    };
    unit(start_fraction, "start_fraction");
    unit(initial_fraction, "initial_fraction");
    unit(repeat_fraction, "repeat_fraction");
    if (!(trigger_fraction > 0.0 && trigger_fraction <= 1.0))
        throw ValidationError("trigger_fraction must lie in (0, 1]");
    if (trigger_count && *trigger_count < 1)
        throw ValidationError("trigger_count must be >= 1");
}

int QuarantineSchedule::start_count(int n) const
{
    return std::max(1, static_cast<int>(std::lround(start_fraction * n)));
}

int QuarantineSchedule::trigger_size(int n) const
{
    if (trigger_count)
        return *trigger_count;
    return std::max(1, static_cast<int>(std::lround(trigger_fraction * n)));
}

void MicroConfig::validate(int n) const
{
    schedule.validate();
    if (policies.empty())
        throw ValidationError("micro experiment needs at least one policy");
    if (target_phis.empty())
        throw ValidationError("micro experiment needs at least one target phi");
    for (int phi : target_phis)
        if (phi < 1 || phi > n)
            throw ValidationError("target phi " + std::to_string(phi) + " outside [1, N]");
    if (runs < 1)
        throw ValidationError("runs must be >= 1");
    if (max_t < 1)
        throw ValidationError("max_t must be >= 1");
    if (seeds.empty() && (seed_count < 1 || seed_count > n))
        throw ValidationError("seed_count must lie in [1, N]");
    if (!(amplitude > 0.0))
        throw ValidationError("amplitude must be positive");
    if (std::find(policies.begin(), policies.end(), QuarantinePolicy::dbgw) != policies.end())
        check_sign_condition(dbgw.m);
}

namespace {

class Quarantiner {
public:
    Quarantiner(const WeightedGraph& g, const MicroConfig& c, const DbgwTransform* dbgw)
        : g_(g), config_(c), dbgw_(dbgw)
    {
    }

    void apply(SiProcess& proc, QuarantinePolicy policy, double fraction, Rng& rng) const
    {
        if (policy == QuarantinePolicy::none || fraction <= 0.0)
            return;
        std::vector<NodeId> pool;
        for (NodeId v = 0; v < g_.node_count(); ++v)
            if (proc.infected()[v] && !proc.is_quarantined(v))
                pool.push_back(v);
        const auto k = static_cast<std::size_t>(
            std::min<long>(static_cast<long>(pool.size()), std::lround(fraction * static_cast<double>(pool.size()))));
        if (k == 0)
            return;
        switch (policy) {
        case QuarantinePolicy::random:
            for (std::size_t i = 0; i < k; ++i)
                std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
            break;
        case QuarantinePolicy::degree: {
            auto deg = [&](NodeId v) {
                return config_.schedule.weighted_degree ? g_.weighted_degree(v) : static_cast<double>(g_.degree(v));
            };
            std::stable_sort(pool.begin(), pool.end(), [&](NodeId a, NodeId b) { return deg(a) > deg(b); });
            break;
        }
        case QuarantinePolicy::dbgw: {
            // quarantined nodes still count as infected in the state signal
            const auto ranked = rank_quarantine(*dbgw_, proc.infected(), config_.amplitude);
            pool.clear();
            for (const auto& r : ranked)
                if (!proc.is_quarantined(r.node))
                    pool.push_back(r.node);
            break;
        }
        case QuarantinePolicy::none: break;
        }
        for (std::size_t i = 0; i < k; ++i)
            proc.quarantine(pool[i]);
    }

private:
    const WeightedGraph& g_;
    const MicroConfig& config_;
    const DbgwTransform* dbgw_;
};

}  // namespace

MicroReport quarantine_experiment(const WeightedGraph& g, const MicroConfig& config)
{
    const int n = g.node_count();
    config.validate(n);
    std::unique_ptr<DbgwTransform> dbgw;
    if (std::find(config.policies.begin(), config.policies.end(), QuarantinePolicy::dbgw) != config.policies.end())
        dbgw = std::make_unique<DbgwTransform>(g, config.dbgw);
    const Quarantiner quarantiner(g, config, dbgw.get());

    const auto np = config.policies.size();
    const auto nk = config.target_phis.size();
    const auto runs = static_cast<std::size_t>(config.runs);
    const int start = config.schedule.start_count(n);
    const int trigger = config.schedule.trigger_size(n);
    const auto censored_time = static_cast<double>(config.max_t);

    MicroReport report;
    report.times.assign(np, std::vector<std::vector<double>>(nk, std::vector<double>(runs, censored_time)));
    report.censored.assign(np, std::vector<std::vector<std::uint8_t>>(nk, std::vector<std::uint8_t>(runs, 1)));

    parallel_for(runs, [&](std::size_t run) {
        const auto seeds = config.seeds.empty()
            ? random_seeds(g, config.seed_count, derive_seed(config.master_seed, {run, 0}))
            : config.seeds;
        SiProcess pre(g, seeds, derive_seed(config.master_seed, {run, 1}));
        // shared pre-observation trajectory; a run that never reaches the
        // observation start stays censored for every policy
        while (pre.infected_count() < start && pre.time() < config.max_t && !pre.halted())
            pre.step();
        if (pre.infected_count() < start)
            return;

        for (std::size_t p = 0; p < np; ++p) {
            SiProcess proc = pre;
            Rng pick(derive_seed(config.master_seed, {run, 2, p}));
            const auto policy = config.policies[p];
            quarantiner.apply(proc, policy, config.schedule.initial_fraction, pick);
            int last_trigger = proc.infected_count();
            std::vector<std::uint8_t> reached(nk, 0);
            std::size_t remaining = nk;
            auto record = [&](int t) {
                for (std::size_t k = 0; k < nk; ++k)
                    if (!reached[k] && proc.infected_count() >= config.target_phis[k]) {
                        reached[k] = 1;
                        --remaining;
                        report.times[p][k][run] = t;
                        report.censored[p][k][run] = 0;
                    }
            };
            record(0);
            for (int t = 1; t <= config.max_t && remaining > 0 && !proc.halted(); ++t) {
                proc.step();
                record(t);
                if (proc.infected_count() - last_trigger >= trigger) {
                    quarantiner.apply(proc, policy, config.schedule.repeat_fraction, pick);
                    last_trigger = proc.infected_count();
                }
            }
        }
    });

    for (std::size_t p = 0; p < np; ++p)
        for (std::size_t k = 0; k < nk; ++k) {
            const auto& ts = report.times[p][k];
            MicroRow row;
            row.policy = config.policies[p];
            row.phi = config.target_phis[k];
            row.mean_time = mean(ts);
            row.std_time = sample_stddev(ts);
            row.runs = config.runs;
            const auto& cs = report.censored[p][k];
            row.censored = static_cast<int>(std::count(cs.begin(), cs.end(), std::uint8_t{1}));
            report.rows.push_back(row);
        }
    return report;
}

std::string micro_to_csv(const MicroReport& report)
{
    std::ostringstream out;
    out << "policy,phi,mean_time,std_time,runs,censored\n";
    for (const auto& r : report.rows)
        out << to_string(r.policy) << ',' << r.phi << ',' << format_double(r.mean_time) << ','
            << format_double(r.std_time) << ',' << r.runs << ',' << r.censored << '\n';
    return out.str();
}

}  // namespace gspi
