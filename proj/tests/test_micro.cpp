#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "gspi/micro.hpp"
#include "util.hpp"

using namespace gspi;

namespace {

MicroConfig small_config()
{
    MicroConfig c;
    c.target_phis = {40, 60};
    c.runs = 12;
    c.max_t = 400;
    c.master_seed = 5;
    return c;
}

WeightedGraph small_rgg()
{
    GraphGenSpec s;
    s.family = GraphFamily::geometric;
    s.n = 80;
    s.xi = 0.2;
    s.beta = 0.3;
    s.seed = 4;
    return generate(s);
}

}  // namespace

TEST_SUITE("micro") {

TEST_CASE("sign condition")
{
    CHECK_NOTHROW(check_sign_condition(m_sequence(std::vector<double>{0.155, -0.155})));
    CHECK_NOTHROW(check_sign_condition(m_sequence(1)));
    CHECK_THROWS_AS(check_sign_condition(m_sequence(std::vector<double>{-0.2, 0.2})), ValidationError);
    CHECK_THROWS_AS(check_sign_condition(m_sequence(std::vector<double>{0.1, 0.2, -0.3})), ValidationError);

    const auto g = testutil::path_graph(5);
    DbgwConfig bad;
    bad.scale = 2;
    bad.m = m_sequence(std::vector<double>{0.1, 0.2, -0.3});
    Snapshot s;
    s.reported = {1, 1, 0, 0, 0};
    CHECK_THROWS_AS(rank_quarantine(g, s, bad), ValidationError);
    CHECK_THROWS_AS(rank_vaccination(g, s, bad), ValidationError);
}

TEST_CASE("rankings match a brute-force ordering")
{
    Rng rng(14);
    const double a = 1000.0;
    for (int k = 0; k < 40; ++k) {
        const int n = 3 + static_cast<int>(rng.below(8));
        const auto g = testutil::random_connected(rng, n, 0.3);
        Snapshot s;
        s.reported = testutil::random_states(rng, n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1))));
        const DbgwConfig cfg;

        std::vector<RankedNode> infected, healthy;
        for (NodeId c = 0; c < n; ++c) {
            const auto psi = dbgw_function(g, c, cfg.scale, cfg.h, cfg.m, dominant_paths(g, c));
            double coeff = 0.0;
            for (int v = 0; v < n; ++v)
                coeff += psi.psi[v] * (s.reported[v] ? a : -a);
            (s.reported[c] ? infected : healthy).push_back({c, coeff});
        }
        std::stable_sort(infected.begin(), infected.end(),
                         [](const RankedNode& x, const RankedNode& y) { return x.coefficient > y.coefficient; });
        std::stable_sort(healthy.begin(), healthy.end(),
                         [](const RankedNode& x, const RankedNode& y) { return x.coefficient < y.coefficient; });

        const auto q = rank_quarantine(g, s, cfg, a);
        const auto v = rank_vaccination(g, s, cfg, a);
        REQUIRE(q.size() == infected.size());
        REQUIRE(v.size() == healthy.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            CHECK(q[i].node == infected[i].node);
            CHECK(q[i].coefficient == doctest::Approx(infected[i].coefficient).scale(a));
            CHECK(q[i].coefficient >= -1e-9 * a);
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i].node == healthy[i].node);
            CHECK(v[i].coefficient <= 1e-9 * a);
        }
    }
}

TEST_CASE("isolated infection ranks first")
{
    // 0-1-2-3-4-5 with 0,1,2 infected and an isolated infected node 5
    const auto g = testutil::path_graph(6, 0.5, 2.0);
    Snapshot s;
    s.reported = {1, 1, 1, 0, 0, 1};
    const auto q = rank_quarantine(g, s);
    REQUIRE(q.size() == 4);
    CHECK(q[0].node == 5);
    CHECK(q.back().node == 1);
    // ties keep the lower id first: nodes 0 and 1 both score zero
    CHECK(q[2].node == 0);
}

TEST_CASE("schedule and config validation")
{
    QuarantineSchedule s;
    CHECK(s.start_count(300) == 60);
    CHECK(s.trigger_size(300) == 30);
    s.trigger_count = 7;
    CHECK(s.trigger_size(300) == 7);
    s.initial_fraction = 1.5;
    CHECK_THROWS_AS(s.validate(), ValidationError);

    auto c = small_config();
    CHECK_NOTHROW(c.validate(80));
    c.target_phis = {81};
    CHECK_THROWS_AS(c.validate(80), ValidationError);
    c = small_config();
    c.runs = 0;
    CHECK_THROWS_AS(c.validate(80), ValidationError);
    c = small_config();
    c.policies.clear();
    CHECK_THROWS_AS(c.validate(80), ValidationError);

    CHECK(quarantine_policy_from_string("dbgw") == QuarantinePolicy::dbgw);
    CHECK(to_string(QuarantinePolicy::none) == "none");
    CHECK_THROWS_AS(quarantine_policy_from_string("all"), ValidationError);
}

TEST_CASE("quarantine experiment")
{
    const auto g = small_rgg();
    REQUIRE(g.node_count() >= 60);
    auto cfg = small_config();
    const auto r = quarantine_experiment(g, cfg);
    REQUIRE(r.rows.size() == 8);
    REQUIRE(r.times.size() == 4);

    SUBCASE("layout and reproducibility")
    {
        CHECK(r.rows[0].policy == QuarantinePolicy::none);
        CHECK(r.rows[0].phi == 40);
        CHECK(r.rows[1].phi == 60);
        CHECK(r.rows[7].policy == QuarantinePolicy::dbgw);
        for (const auto& row : r.rows)
            CHECK(row.runs == 12);
        const auto again = quarantine_experiment(g, cfg);
        CHECK(micro_to_csv(again) == micro_to_csv(r));
        const auto csv = micro_to_csv(r);
        CHECK(csv.rfind("policy,phi,mean_time,std_time,runs,censored\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    }
    SUBCASE("no quarantine is never slower on average")
    {
        for (std::size_t p = 1; p < 4; ++p)
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(r.rows[k].mean_time <= r.rows[p * 2 + k].mean_time);
        for (std::size_t p = 1; p < 4; ++p)
            CHECK(r.rows[0].censored <= r.rows[p * 2].censored);
    }
    SUBCASE("censored runs hold max_t")
    {
        for (std::size_t p = 0; p < 4; ++p)
            for (std::size_t k = 0; k < 2; ++k)
                for (int run = 0; run < 12; ++run) {
                    if (r.censored[p][k][run])
                        CHECK(r.times[p][k][run] == 400.0);
                    else
                        CHECK(r.times[p][k][run] <= 400.0);
                }
    }
    SUBCASE("quarantining every infected node halts the epidemic")
    {
        cfg.schedule.initial_fraction = 1.0;
        cfg.schedule.repeat_fraction = 1.0;
        cfg.policies = {QuarantinePolicy::random, QuarantinePolicy::degree, QuarantinePolicy::dbgw};
        const auto halted = quarantine_experiment(g, cfg);
        for (const auto& row : halted.rows) {
            CHECK(row.censored == 12);
            CHECK(row.mean_time == 400.0);
        }
    }
    SUBCASE("fixed seeds")
    {
        cfg.seeds = {0, 1};
        cfg.policies = {QuarantinePolicy::none};
        const auto fixed = quarantine_experiment(g, cfg);
        CHECK(fixed.rows.size() == 2);
        CHECK(fixed.rows[0].mean_time <= fixed.rows[1].mean_time);
    }
}

}  // TEST_SUITE
