// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance [AC1 AC2 ...]   (no arguments runs everything)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "bound_oracle.hpp"
#include "gspi/experiments.hpp"
#include "gspi/stats.hpp"
#include "path_oracle.hpp"
#include "util.hpp"

using namespace gspi;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// connected ER / SF / RGG graph with n nodes
WeightedGraph random_family_graph(Rng& rng, int family, int n)
{
    for (;;) {
        GraphGenSpec s;
        s.n = n;
        s.beta = rng.uniform(0.1, 1.0);
        s.seed = rng.next();
        if (family == 0) {
            s.rho = std::min(1.0, 3.0 * std::log(n) / n);
        } else if (family == 1) {
            s.family = GraphFamily::scale_free;
            s.gamma = 1 + static_cast<int>(rng.below(3));
        } else {
            s.family = GraphFamily::geometric;
            s.xi = std::min(1.0, std::sqrt(3.0 * std::log(n) / (3.14159 * n)));
        }
        try {
            auto g = generate(s);
            if (g.node_count() >= 2)
                return g;
        } catch (const GenerationError&) {
        }
    }
}

Outcome ac1_zero_mean()
{
    Rng rng(1001);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const auto g = random_family_graph(rng, k % 3, 10 + static_cast<int>(rng.below(191)));
        const int s = 1 + static_cast<int>(rng.below(3));
        const NodeId c = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.node_count())));
        const auto f = dbgw_function(g, c, s, HProfile{1, 2}, m_sequence(s), dominant_paths(g, c));
        double sum = 0.0;
        for (double x : f.psi)
            sum += x;
        worst = std::max(worst, std::abs(sum));
    }
    return {worst <= 1e-9, "max |sum psi| = " + fmt("%.3g", worst) + " over 500 configurations"};
}

Outcome ac2_dominant_paths()
{
    Rng rng(1002);
    long long mismatches = 0, pairs = 0;
    for (int k = 0; k < 200; ++k) {
        const int n = 2 + static_cast<int>(rng.below(8));
        const auto g = testutil::random_connected(rng, n, 0.35, rng.uniform(0.1, 1.0));
        for (NodeId c = 0; c < n; ++c) {
            const auto t = dominant_paths(g, c);
            const auto b = testutil::brute_dominant_paths(g, c);
            for (NodeId v = 0; v < n; ++v) {
                if (v == c)
                    continue;
                ++pairs;
                mismatches += t.wdp[v] != b[v].weight || t.ldp[v] != static_cast<int>(b[v].nodes.size()) - 1;
            }
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches in " + std::to_string(pairs) + " pairs"};
}

Outcome ac3_spectral()
{
    Rng rng(1003);
    double residual = 0, ortho = 0, parseval = 0;
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + static_cast<int>(rng.below(49));
        const auto g = testutil::random_connected(rng, n, rng.uniform(0.02, 0.3), rng.uniform(0.1, 1.0));
        const auto l = laplacian(g);
        const auto b = eigendecompose(l);
        for (int i = 0; i < n; ++i)
            residual = std::max(residual,
                                (l * b.eigenvectors.col(i) - b.eigenvalues(i) * b.eigenvectors.col(i)).norm());
        const Eigen::MatrixXd gram = b.eigenvectors.transpose() * b.eigenvectors;
        ortho = std::max(ortho, (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
        std::vector<double> s(static_cast<std::size_t>(n));
        double es = 0;
        for (auto& x : s) {
            x = rng.uniform(-1000, 1000);
            es += x * x;
        }
        double eh = 0;
        for (double x : gft(b, s))
            eh += x * x;
        parseval = std::max(parseval, std::abs(std::sqrt(eh) - std::sqrt(es)) / std::sqrt(es));
    }
    const bool ok = residual <= 1e-6 && ortho <= 1e-8 && parseval <= 1e-6;
    return {ok, "residual " + fmt("%.2g", residual) + ", orthonormality " + fmt("%.2g", ortho) + ", Parseval "
                    + fmt("%.2g", parseval)};
}

Outcome ac4_sign()
{
    const double a = 1000.0;
    DbgwConfig cfg;
    cfg.m = m_sequence(std::vector<double>{0.155, -0.155});
    Rng rng(1004);
    long long bad = 0, coeffs = 0;
    for (int k = 0; k < 200; ++k) {
        const auto g = random_family_graph(rng, k % 3, 50 + static_cast<int>(rng.below(100)));
        const int n = g.node_count();
        const int phi = std::max(2, static_cast<int>(n * rng.uniform(0.05, 0.6)));
        Snapshot snap;
        if (k % 2) {
            try {
                snap = simulate_epidemic(g, random_seeds(g, 1 + static_cast<int>(rng.below(3)), rng.next()), phi,
                                         100000, rng.next());
            } catch (const SimulationTimeout& e) {
                snap = e.partial();
            }
        } else {
            snap = simulate_random_failures(g, phi, rng.next());
        }
        const auto c = dbgw_all_coeffs(g, to_signal(snap, a).values, cfg);
        for (int v = 0; v < n; ++v) {
            ++coeffs;
            const double tol = 1e-9 * a;
            if (snap.reported[v])
                bad += c[v] < -tol || c[v] > 2 * a * 0.155 + tol;
            else
                bad += c[v] > tol || c[v] < -2 * a * 0.155 - tol;
        }
    }
    return {bad == 0, std::to_string(bad) + " out-of-range coefficients among " + std::to_string(coeffs)};
}

Outcome ac5_m_sequence()
{
    const auto m = m_sequence(1, MexicanHatProfile{0.9});
    const bool ok = std::abs(m.values[0] - 0.155) <= 1e-3 && std::abs(m.values[1] + 0.155) <= 1e-3;
    return {ok, "m = (" + fmt("%.6f", m.values[0]) + ", " + fmt("%.6f", m.values[1]) + ")"};
}

json desk_config(std::uint64_t master)
{
    auto j = preset_config("scenario1");
    j["master_seed"] = master;
    j["epidemic"]["phis"] = {150};
    j["n_per_class"] = 200;
    return j;
}

Outcome ac6_metric_detection()
{
    auto j = desk_config(20240601);
    j["detectors"] = json::array({{{"type", "smoothness"}}, {{"type", "energy_concentration"}}});
    const auto train_cfg = parse_config(j);
    j["master_seed"] = 20240611;
    const auto test_cfg = parse_config(j);
    const auto g = build_graph(train_cfg);
    const auto train = build_dataset(train_cfg, g);
    const auto test = build_dataset(test_cfg, g);

    const DetectorContext ctx(g, train_cfg);
    std::vector<const Snapshot*> train_snaps;
    for (const auto& it : train.items)
        train_snaps.push_back(&it.snapshot);
    bool ok = true;
    std::string detail;
    for (const auto& det : train_cfg.detectors) {
        const auto model = train_detector(det, ctx, train_snaps, 1);
        int correct = 0;
        for (const auto& it : test.items)
            correct += run_detector(model, ctx, it.snapshot).label == it.snapshot.label;
        const double acc = static_cast<double>(correct) / static_cast<double>(test.items.size());
        ok = ok && acc >= 0.85;
        detail += (detail.empty() ? "" : ", ") + det.name + " " + fmt("%.3f", acc);
    }
    return {ok, detail + " on " + std::to_string(test.items.size()) + " test snapshots"};
}

std::map<std::string, double> aidp_by_method(const ExperimentConfig& c, int phi)
{
    const auto g = build_graph(c);
    const auto d = build_dataset(c, g);
    std::map<std::string, double> out;
    for (const auto& r : evaluate(c, d))
        if (r.phi == phi)
            out[r.method] = r.aidp;
    return out;
}

Outcome ac7_learning_order()
{
    auto j = desk_config(20240601);
    j["noise"] = {{"fp_rate", 0.1}, {"fn_rate", 0.1}};
    j["folds"] = 10;
    j["detectors"] = json::array({{{"type", "rf"}, {"features", "gft"}, {"mode", "fast"}},
                                  {{"type", "rf"}, {"features", "dbgw"}, {"mode", "fast"}}});
    const auto a = aidp_by_method(parse_config(j), 150);
    const double gft = a.at("rf-gft-fast"), dbgw = a.at("rf-dbgw-fast");
    return {dbgw >= gft - 0.02 && dbgw >= 0.80,
            "rf-dbgw-fast " + fmt("%.3f", dbgw) + ", rf-gft-fast " + fmt("%.3f", gft)};
}

Outcome ac8_rbd()
{
    auto j = preset_config("scenario2");
    json keep = json::array();
    for (const auto& d : j["detectors"])
        if (d["type"] == "rbd" || (d["type"] == "rf" && d.value("mode", "") == "direct"))
            keep.push_back(d);
    j["detectors"] = keep;
    const auto c = parse_config(j);
    const auto g = build_graph(c);
    const auto d = build_dataset(c, g);
    std::map<int, std::map<std::string, double>> by_phi;
    for (const auto& r : evaluate(c, d))
        by_phi[r.phi][r.method] = r.aidp;
    bool ok = true;
    std::string detail;
    for (const auto& [phi, m] : by_phi) {
        const double rbd = m.at("rbd"), direct = m.at("rf-dbgw-direct");
        ok = ok && rbd <= direct;
        detail += (detail.empty() ? "" : "; ") + std::string("phi ") + std::to_string(phi) + ": rbd " + fmt("%.3f", rbd)
            + ", rf-dbgw-direct " + fmt("%.3f", direct);
    }
    return {ok, detail};
}

Outcome ac9_bounds()
{
    Rng rng(1009);
    const double a = 1000.0;
    long long covered = 0, violations = 0;
    for (int k = 0; k < 50; ++k) {
        const int n = 3 + static_cast<int>(rng.below(8));
        const auto g = testutil::random_connected(rng, n, rng.uniform(0.1, 0.6), rng.uniform(0.1, 1.0));
        const auto st = testutil::random_states(rng, n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1))));
        std::vector<double> clean(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            clean[i] = st[i] ? a : -a;
        const auto sm = testutil::check_smoothness_bound(g, clean, a);
        const auto hc = testutil::check_hecr_bound(eigendecompose(g), clean, a, std::max(1.0 / n, 0.1 + 0.2 * rng.uniform()));
        covered += sm.placements + hc.placements;
        violations += sm.violations + hc.violations;
    }
    return {violations == 0 && covered > 0, std::to_string(violations) + " counterexamples in "
                                                + std::to_string(covered) + " covered noise placements"};
}

Outcome ac10_micro()
{
    const auto c = parse_config(preset_config("micro_rgg"));
    const auto g = build_graph(c);
    const auto r = quarantine_experiment(g, c.micro);
    std::size_t k = 0;
    for (std::size_t i = 1; i < c.micro.target_phis.size(); ++i)
        if (c.micro.target_phis[i] > c.micro.target_phis[k])
            k = i;
    std::size_t pr = 0, pd = 0;
    for (std::size_t p = 0; p < c.micro.policies.size(); ++p) {
        if (c.micro.policies[p] == QuarantinePolicy::random)
            pr = p;
        if (c.micro.policies[p] == QuarantinePolicy::dbgw)
            pd = p;
    }
    const auto& xd = r.times[pd][k];
    const auto& xr = r.times[pr][k];
    const double md = mean(xd), mr = mean(xr);
    const double vd = sample_variance(xd) / xd.size(), vr = sample_variance(xr) / xr.size();
    double p_value = 1.0;
    if (vd + vr > 0) {
        const double t = (md - mr) / std::sqrt(vd + vr);
        const double df = (vd + vr) * (vd + vr)
            / (vd * vd / (xd.size() - 1.0) + vr * vr / (xr.size() - 1.0));
        p_value = boost::math::cdf(boost::math::complement(boost::math::students_t(df), t));
    } else if (md > mr) {
        p_value = 0.0;
    }
    return {md >= mr && p_value < 0.05, "phi " + std::to_string(c.micro.target_phis[k]) + ": dbgw mean "
                                            + fmt("%.1f", md) + ", random mean " + fmt("%.1f", mr)
                                            + ", one-sided Welch p = " + fmt("%.3g", p_value)};
}

std::map<std::string, std::string> tree(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) {
            std::ifstream in(e.path(), std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            out[fs::relative(e.path(), dir).generic_string()] = s.str();
        }
    return out;
}

Outcome ac11_reproducible()
{
    testutil::TempDir dir("acceptance_repro");
    auto j = preset_config("scenario2");
    j["out"] = (dir.path / "a").string();
    cmd_make_dataset(parse_config(j));
    j["out"] = (dir.path / "b").string();
    cmd_make_dataset(parse_config(j));
    const auto a = tree(dir.path / "a"), b = tree(dir.path / "b");
    return {!a.empty() && a == b, std::to_string(a.size()) + " files compared"};
}

}  // namespace

int main(int argc, char** argv)
{
    struct Criterion {
        std::string id;
        std::string title;
        std::function<Outcome()> run;
        double limit_s;  // 0 means no runtime limit
    };
    const std::vector<Criterion> all{
        {"AC1", "wavelet zero mean", ac1_zero_mean, 30},
        {"AC2", "dominant paths equal exhaustive enumeration", ac2_dominant_paths, 60},
        {"AC3", "spectral invariants", ac3_spectral, 30},
        {"AC4", "wavelet coefficient signs", ac4_sign, 0},
        {"AC5", "m-sequence from the profile", ac5_m_sequence, 0},
        {"AC6", "metric detectors at desk scale", ac6_metric_detection, 300},
        {"AC7", "DBGW-fast RF vs GFT-fast RF under noise", ac7_learning_order, 600},
        {"AC8", "RBD below DBGW-direct RF", ac8_rbd, 0},
        {"AC9", "robustness bounds under exhaustive noise", ac9_bounds, 300},
        {"AC10", "DBGW quarantine delays the epidemic", ac10_micro, 600},
        {"AC11", "dataset generation is reproducible", ac11_reproducible, 0},
    };
    std::set<std::string> wanted(argv + 1, argv + argc);

    int failures = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id))
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass;
        if (c.limit_s > 0 && secs > c.limit_s) {
            pass = false;
            o.detail += ", over the " + fmt("%.0f", c.limit_s) + " s limit";
        }
        failures += !pass;
        std::printf("%-5s %s  %s: %s (%.1f s)\n", c.id.c_str(), pass ? "PASS" : "FAIL", c.title.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
