#include "gspi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "gspi/error.hpp"
#include "gspi/io.hpp"
#include "gspi/parallel.hpp"
#include "gspi/rng.hpp"
#include "gspi/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gspi {

namespace {

// Typed access to one JSON object that remembers which keys were read, so
// misspelled keys are reported instead of silently ignored.
class Fields {
public:
    Fields(const json& j, std::string where) : j_(j), where_(std::move(where))
    {
        if (!j_.is_object())
            throw ValidationError(where_ + " must be a JSON object");
    }

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    template <typename T>
    T get(const std::string& key, T fallback)
    {
        return has(key) ? convert<T>(key) : fallback;
    }

    template <typename T>
    T require(const std::string& key)
    {
        if (!has(key))
            throw ValidationError(where_ + "." + key + " is required");
        return convert<T>(key);
    }

    const json& raw(const std::string& key)
    {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const
    {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k))
                throw ValidationError("unknown field " + where_ + "." + k);
    }

private:
    template <typename T>
    T convert(const std::string& key)
    {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ValidationError(where_ + "." + key + " has the wrong type");
        }
    }

    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

std::string hex64(std::uint64_t x)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::uint64_t parse_hex64(const std::string& s)
{
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 16);
        if (used != s.size())
            throw ValidationError("bad hash '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ValidationError("bad hash '" + s + "'");
    }
}

fs::path resolve(const fs::path& base, const std::string& p)
{
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

// ---------------------------------------------------------------------------
// Detector specs

std::string to_string(DetectorKind k)
{
    switch (k) {
    case DetectorKind::smoothness: return "smoothness";
    case DetectorKind::hecr: return "hecr";
    case DetectorKind::lecr: return "lecr";
    case DetectorKind::energy_concentration: return "energy_concentration";
    case DetectorKind::naive_bayes: return "nb";
    case DetectorKind::random_forest: return "rf";
    case DetectorKind::rbd: return "rbd";
    }
    return "?";
}

DetectorKind detector_kind_from_string(std::string_view s)
{
    for (auto k : {DetectorKind::smoothness, DetectorKind::hecr, DetectorKind::lecr, DetectorKind::energy_concentration,
                   DetectorKind::naive_bayes, DetectorKind::random_forest, DetectorKind::rbd})
        if (s == to_string(k))
            return k;
    throw ValidationError("unknown detector type '" + std::string(s) + "'");
}

bool DetectorSpec::is_metric() const
{
    return kind == DetectorKind::smoothness || kind == DetectorKind::hecr || kind == DetectorKind::lecr
        || kind == DetectorKind::energy_concentration;
}

bool DetectorSpec::is_classifier() const
{
    return kind == DetectorKind::naive_bayes || kind == DetectorKind::random_forest;
}

bool DetectorSpec::needs_basis() const
{
    if (kind == DetectorKind::hecr || kind == DetectorKind::lecr || kind == DetectorKind::energy_concentration)
        return true;
    return is_classifier() && source != FeatureSource::dbgw;
}

DetectorSpec detector_spec_from_json(const json& j)
{
    Fields f(j, "detector");
    DetectorSpec d;
    d.kind = detector_kind_from_string(f.require<std::string>("type"));
    d.epsilon = f.get("epsilon", d.epsilon);
    d.alpha = f.get("alpha", d.alpha);
    d.gamma = f.get("gamma", d.gamma);
    const auto weighting = f.get<std::string>("weighting", "distance");
    if (weighting == "distance")
        d.weighting = SmoothnessWeighting::distance;
    else if (weighting == "weight")
        d.weighting = SmoothnessWeighting::weight;
    else
        throw ValidationError("detector.weighting must be distance or weight");
    d.source = feature_source_from_string(f.get<std::string>("features", to_string(d.source)));
    d.mode = feature_mode_from_string(f.get<std::string>("mode", to_string(d.mode)));
    d.slice = f.get("slice", d.slice);
    d.rf.n_tree = f.get("n_tree", d.rf.n_tree);
    d.rf.features_per_split = f.get("features_per_split", d.rf.features_per_split);
    d.rf.bootstrap = f.get("bootstrap", d.rf.bootstrap);
    d.rf.seed = f.get("seed", d.rf.seed);
    d.radius_grid = f.get("radius_grid", d.radius_grid);
    d.threshold_grid = f.get("threshold_grid", d.threshold_grid);
    d.ball = ball_metric_from_string(f.get<std::string>("ball", to_string(d.ball)));

    std::string fallback = to_string(d.kind);
    if (d.is_classifier())
        fallback += "-" + to_string(d.source) + "-" + to_string(d.mode);
    d.name = f.get("name", fallback);
    f.finish();

    if (!(d.epsilon > 50.0 && d.epsilon < 100.0))
        throw ValidationError("detector.epsilon must lie in (50, 100)");
    if (!(d.alpha > 0.0 && d.alpha <= 1.0) || !(d.gamma > 0.0 && d.gamma <= 1.0))
        throw ValidationError("detector alpha and gamma must lie in (0, 1]");
    if (d.rf.n_tree < 1 || d.rf.features_per_split < 0)
        throw ValidationError("detector n_tree must be >= 1 and features_per_split >= 0");
    if (!d.slice.empty() && d.mode == FeatureMode::fast)
        throw ValidationError("detector.slice applies to direct features only");
    if (d.kind == DetectorKind::rbd) {
        if (d.radius_grid.empty() || d.threshold_grid.empty())
            throw ValidationError("rbd detector needs non-empty grids");
        for (double r : d.radius_grid)
            RbdParams{r, 1.0}.validate();
        for (double t : d.threshold_grid)
            RbdParams{1.0, t}.validate();
    }
    if (d.name.empty() || d.name.find_first_of(",/\\\n") != std::string::npos)
        throw ValidationError("detector.name must be non-empty without , / \\ or newlines");
    return d;
}

json to_json(const DetectorSpec& d)
{
    json j = {{"type", to_string(d.kind)}, {"name", d.name}};
    if (d.is_metric()) {
        j["epsilon"] = d.epsilon;
        if (d.kind == DetectorKind::smoothness)
            j["weighting"] = d.weighting == SmoothnessWeighting::distance ? "distance" : "weight";
        if (d.kind == DetectorKind::hecr || d.kind == DetectorKind::energy_concentration)
            j["alpha"] = d.alpha;
        if (d.kind == DetectorKind::lecr || d.kind == DetectorKind::energy_concentration)
            j["gamma"] = d.gamma;
    } else if (d.is_classifier()) {
        j["features"] = to_string(d.source);
        j["mode"] = to_string(d.mode);
        if (!d.slice.empty())
            j["slice"] = d.slice;
        if (d.kind == DetectorKind::random_forest) {
            j["n_tree"] = d.rf.n_tree;
            j["features_per_split"] = d.rf.features_per_split;
            j["bootstrap"] = d.rf.bootstrap;
            j["seed"] = d.rf.seed;
        }
    } else {
        j["radius_grid"] = d.radius_grid;
        j["threshold_grid"] = d.threshold_grid;
        j["ball"] = to_string(d.ball);
    }
    return j;
}

json to_json(const DbgwConfig& c)
{
    return {{"scale", c.scale},
            {"h_c", c.h.c},
            {"h_k", c.h.k},
            {"m", c.m.values},
            {"operator", c.op == PathOperator::product ? "product" : "sum_distance"}};
}

DbgwConfig dbgw_config_from_json(const json& j)
{
    Fields f(j, "dbgw");
    DbgwConfig c;
    c.scale = f.get("scale", 1);
    if (c.scale < 1)
        throw ValidationError("dbgw.scale must be >= 1");
    c.h.c = f.get("h_c", 1);
    c.h.k = f.get("h_k", 2);
    if (f.has("m")) {
        if (f.has("sigma"))
            throw ValidationError("dbgw takes either m or sigma, not both");
        c.m = m_sequence(f.raw("m").get<std::vector<double>>());
    } else {
        c.m = m_sequence(c.scale, MexicanHatProfile{f.get("sigma", 0.9)});
    }
    if (c.m.scale != c.scale)
        throw ValidationError("dbgw.m must have scale + 1 entries");
    const auto op = f.get<std::string>("operator", "product");
    if (op == "product")
        c.op = PathOperator::product;
    else if (op == "sum_distance")
        c.op = PathOperator::sum_distance;
    else
        throw ValidationError("dbgw.operator must be product or sum_distance");
    f.finish();
    return c;
}

// ---------------------------------------------------------------------------
// Configs

namespace {

GraphGenSpec graph_spec_from_json(const json& j, std::uint64_t master_seed)
{
    Fields f(j, "graph");
    GraphGenSpec s;
    s.family = graph_family_from_string(f.require<std::string>("family"));
    s.n = f.get("n", s.n);
    s.rho = f.get("rho", s.rho);
    s.gamma = f.get("gamma", s.gamma);
    s.xi = f.get("xi", s.xi);
    s.distance_low = f.get("distance_low", s.distance_low);
    s.distance_high = f.get("distance_high", s.distance_high);
    s.beta = f.get("beta", s.beta);
    s.seed = f.get("seed", derive_seed(master_seed, {0x6772}));
    s.edge_list_path = f.get<std::string>("edge_list", "");
    f.finish();
    if (s.family == GraphFamily::edge_list)
        throw ValidationError("use graph_file for edge lists");
    s.validate();
    return s;
}

MicroConfig micro_from_json(const json& j, std::uint64_t master_seed)
{
    Fields f(j, "micro");
    MicroConfig m;
    if (f.has("policies")) {
        m.policies.clear();
        for (const auto& p : f.raw("policies"))
            m.policies.push_back(quarantine_policy_from_string(p.get<std::string>()));
    }
    m.target_phis = f.require<std::vector<int>>("phis");
    m.runs = f.get("runs", m.runs);
    m.max_t = f.get("max_t", m.max_t);
    m.seeds = f.get("seeds", m.seeds);
    m.seed_count = f.get("seed_count", m.seed_count);
    m.schedule.start_fraction = f.get("start_fraction", m.schedule.start_fraction);
    m.schedule.initial_fraction = f.get("initial_fraction", m.schedule.initial_fraction);
    m.schedule.repeat_fraction = f.get("repeat_fraction", m.schedule.repeat_fraction);
    m.schedule.trigger_fraction = f.get("trigger_fraction", m.schedule.trigger_fraction);
    if (f.has("trigger_count"))
        m.schedule.trigger_count = f.raw("trigger_count").get<int>();
    m.schedule.weighted_degree = f.get("weighted_degree", m.schedule.weighted_degree);
    m.master_seed = derive_seed(master_seed, {0x6d6963});
    f.finish();
    m.schedule.validate();
    return m;
}

}  // namespace

ExperimentConfig parse_config(const json& j, const fs::path& base_dir)
{
    Fields f(j, "config");
    ExperimentConfig c;
    c.raw = j;
    if (!f.has("master_seed"))
        throw ValidationError("config.master_seed is required");
    c.master_seed = f.require<std::uint64_t>("master_seed");

    if (f.has("graph_file")) {
        c.graph_file = resolve(base_dir, f.require<std::string>("graph_file"));
        c.graph.beta = f.get("beta", c.graph.beta);
        if (f.has("graph"))
            throw ValidationError("config takes either graph or graph_file, not both");
    } else if (f.has("graph")) {
        c.graph = graph_spec_from_json(f.raw("graph"), c.master_seed);
    }

    if (f.has("epidemic")) {
        Fields e(f.raw("epidemic"), "epidemic");
        c.epidemic.seed_count = e.get("seeds", c.epidemic.seed_count);
        const auto placement = e.get<std::string>("placement", "random");
        if (placement == "random")
            c.epidemic.placement = SeedPlacement::random;
        else if (placement == "far")
            c.epidemic.placement = SeedPlacement::far_apart;
        else
            throw ValidationError("epidemic.placement must be random or far");
        c.epidemic.phis = e.get("phis", c.epidemic.phis);
        c.epidemic.max_t = e.get("max_t", c.epidemic.max_t);
        c.epidemic.max_attempts = e.get("max_attempts", c.epidemic.max_attempts);
        c.epidemic.exact_phi = e.get("exact_phi", c.epidemic.exact_phi);
        e.finish();
        if (c.epidemic.seed_count < 1)
            throw ValidationError("epidemic.seeds must be >= 1");
        if (c.epidemic.max_t < 1 || c.epidemic.max_attempts < 1)
            throw ValidationError("epidemic.max_t and max_attempts must be >= 1");
        for (int phi : c.epidemic.phis)
            if (phi < c.epidemic.seed_count)
                throw ValidationError("every phi must be >= the seed count");
    }

    if (f.has("noise")) {
        Fields n(f.raw("noise"), "noise");
        c.noise.fp_rate = n.get("fp_rate", 0.0);
        c.noise.fn_rate = n.get("fn_rate", 0.0);
        if (n.has("n_fp"))
            c.noise.n_fp = n.raw("n_fp").get<int>();
        if (n.has("n_fn"))
            c.noise.n_fn = n.raw("n_fn").get<int>();
        n.finish();
        if (!(c.noise.fp_rate >= 0.0 && c.noise.fp_rate <= 1.0 && c.noise.fn_rate >= 0.0 && c.noise.fn_rate <= 1.0))
            throw ValidationError("noise rates must lie in [0, 1]");
    }

    c.amplitude = f.get("amplitude", c.amplitude);
    if (!(c.amplitude > 0.0))
        throw ValidationError("amplitude must be positive");
    c.n_per_class = f.get("n_per_class", c.n_per_class);
    if (c.n_per_class < 1)
        throw ValidationError("n_per_class must be >= 1");
    if (f.has("detectors"))
        for (const auto& d : f.raw("detectors"))
            c.detectors.push_back(detector_spec_from_json(d));
    std::set<std::string> names;
    for (const auto& d : c.detectors)
        if (!names.insert(d.name).second)
            throw ValidationError("duplicate detector name '" + d.name + "'");
    if (f.has("dbgw"))
        c.dbgw = dbgw_config_from_json(f.raw("dbgw"));
    c.sgw_scale = f.get("sgw_scale", c.sgw_scale);
    if (!(c.sgw_scale > 0.0))
        throw ValidationError("sgw_scale must be positive");
    c.folds = f.get("folds", c.folds);
    if (c.folds < 2)
        throw ValidationError("folds must be >= 2");
    if (f.has("micro"))
        c.micro = micro_from_json(f.raw("micro"), c.master_seed);
    c.micro.dbgw = c.dbgw;
    c.micro.amplitude = c.amplitude;
    if (f.has("phi"))
        c.phi = f.raw("phi").get<int>();
    if (f.has("dataset"))
        c.dataset_dir = resolve(base_dir, f.require<std::string>("dataset"));
    if (f.has("model"))
        c.model_path = resolve(base_dir, f.require<std::string>("model"));
    if (f.has("snapshot"))
        c.snapshot_path = resolve(base_dir, f.require<std::string>("snapshot"));
    if (f.has("spectral_cache"))
        c.spectral_cache = resolve(base_dir, f.require<std::string>("spectral_cache"));
    if (f.has("out"))
        c.out_dir = resolve(base_dir, f.require<std::string>("out"));
    f.has("description");
    f.finish();
    return c;
}

ExperimentConfig load_config(const fs::path& path)
{
    return parse_config(read_json(path), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

std::vector<std::string> preset_names() { return {"scenario1", "scenario2", "scenario3", "micro_rgg"}; }

json preset_config(std::string_view name)
{
    const json detectors = json::array({
        {{"type", "smoothness"}},
        {{"type", "energy_concentration"}},
        {{"type", "nb"}, {"features", "gft"}, {"mode", "fast"}},
        {{"type", "rf"}, {"features", "gft"}, {"mode", "fast"}},
        {{"type", "nb"}, {"features", "dbgw"}, {"mode", "fast"}},
        {{"type", "rf"}, {"features", "dbgw"}, {"mode", "fast"}},
        {{"type", "rf"}, {"features", "dbgw"}, {"mode", "direct"}},
        {{"type", "rbd"}, {"radius_grid", {1, 2, 3}}, {"threshold_grid", {0.1, 0.25, 0.5, 0.75, 1, 1.5, 2, 3, 4}}},
    });
    json c = {{"master_seed", 20240601},
              {"amplitude", 1000},
              {"n_per_class", 200},
              {"folds", 10},
              {"dbgw", {{"scale", 1}, {"sigma", 0.9}}},
              {"detectors", detectors}};
    if (name == "scenario1") {
        c["description"] = "ER n=300 rho=0.03, one random seed, no noise";
        c["graph"] = {{"family", "ER"}, {"n", 300}, {"rho", 0.03}, {"beta", 0.5}, {"seed", 11}};
        c["epidemic"] = {{"seeds", 1}, {"placement", "random"}, {"phis", {60, 150}}};
    } else if (name == "scenario2") {
        c["description"] = "ER n=300 rho=0.03, four far-apart seeds, 10% report noise";
        c["graph"] = {{"family", "ER"}, {"n", 300}, {"rho", 0.03}, {"beta", 0.5}, {"seed", 12}};
        c["epidemic"] = {{"seeds", 4}, {"placement", "far"}, {"phis", {60, 150}}};
        c["noise"] = {{"fp_rate", 0.1}, {"fn_rate", 0.1}};
    } else if (name == "scenario3") {
        c["description"] = "SF n=300 gamma=3, four far-apart seeds, 10% report noise";
        c["graph"] = {{"family", "SF"}, {"n", 300}, {"gamma", 3}, {"beta", 0.5}, {"seed", 13}};
        c["epidemic"] = {{"seeds", 4}, {"placement", "far"}, {"phis", {60, 150}}};
        c["noise"] = {{"fp_rate", 0.1}, {"fn_rate", 0.1}};
    } else if (name == "micro_rgg") {
        c = {{"master_seed", 20240602},
             {"description", "RGG n=300 xi=0.12 beta=0.25 quarantine experiment"},
             {"amplitude", 1000},
             {"graph", {{"family", "RGG"}, {"n", 300}, {"xi", 0.12}, {"beta", 0.25}, {"seed", 14}}},
             {"dbgw", {{"scale", 1}, {"sigma", 0.9}}},
             {"micro",
              {{"policies", {"none", "random", "degree", "dbgw"}},
               {"phis", {120, 160, 200}},
               {"runs", 50},
               {"max_t", 3000},
               {"seed_count", 1}}}};
    } else {
        throw ValidationError("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

WeightedGraph build_graph(const ExperimentConfig& c)
{
    if (c.graph_file.empty())
        return generate(c.graph);
    const auto text = read_file(c.graph_file);
    if (c.graph_file.extension() == ".json") {
        try {
            return graph_from_json(json::parse(text));
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("graph JSON: ") + e.what(), 0);
        }
    }
    return from_edge_list(text, c.graph.beta);
}

// ---------------------------------------------------------------------------
// Datasets

namespace {

constexpr std::uint64_t kSim = 0, kNoise = 1, kSeeds = 2;

std::string item_file(Label label, int phi, int index)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshots/phi%d/%s_%04d.csv", phi, to_string(label).c_str(), index);
    return buf;
}

Snapshot simulate_item(const WeightedGraph& g, const ItemRecord& r, const EpidemicSpec& epi, const NoiseSpec& noise)
{
    Snapshot s;
    if (r.label == Label::random_failure)
        s = simulate_random_failures(g, r.phi, r.sim_seed);
    else if (epi.exact_phi)
        s = simulate_epidemic_exact(g, r.seeds, r.phi, epi.max_t, r.sim_seed);
    else
        s = simulate_epidemic(g, r.seeds, r.phi, epi.max_t, r.sim_seed);
    s.label = r.label;
    const bool noisy = noise.fp_rate > 0.0 || noise.fn_rate > 0.0 || noise.n_fp.value_or(0) > 0
        || noise.n_fn.value_or(0) > 0;
    if (noisy)
        s = add_report_noise(s, noise, r.noise_seed);
    return s;
}

struct ItemOutcome {
    DatasetItem item;
    std::vector<TimeoutRecord> timeouts;
};

ItemOutcome generate_item(const ExperimentConfig& c, const WeightedGraph& g, Label label, int phi, int index)
{
    ItemOutcome out;
    const auto lab = static_cast<std::uint64_t>(label);
    for (int attempt = 0; attempt < c.epidemic.max_attempts; ++attempt) {
        const auto key = [&](std::uint64_t stream) {
            return derive_seed(c.master_seed, {static_cast<std::uint64_t>(phi), lab, static_cast<std::uint64_t>(index),
                                               static_cast<std::uint64_t>(attempt), stream});
        };
        ItemRecord r;
        r.label = label;
        r.phi = phi;
        r.index = index;
        r.attempts = attempt + 1;
        r.sim_seed = key(kSim);
        r.noise_seed = key(kNoise);
        r.file = item_file(label, phi, index);
        if (label == Label::epidemic)
            r.seeds = c.epidemic.placement == SeedPlacement::far_apart
                ? far_apart_seeds(g, c.epidemic.seed_count, key(kSeeds))
                : random_seeds(g, c.epidemic.seed_count, key(kSeeds));
        try {
            out.item.snapshot = simulate_item(g, r, c.epidemic, c.noise);
            out.item.record = std::move(r);
            return out;
        } catch (const SimulationTimeout& e) {
            out.timeouts.push_back({phi, index, attempt, e.partial().true_infected()});
        }
    }
    throw GenerationError("epidemic item phi=" + std::to_string(phi) + " index=" + std::to_string(index)
                          + " timed out in all " + std::to_string(c.epidemic.max_attempts) + " attempts");
}

}  // namespace

std::vector<const DatasetItem*> Dataset::at_phi(int phi) const
{
    std::vector<const DatasetItem*> out;
    for (const auto& it : items)
        if (it.record.phi == phi)
            out.push_back(&it);
    return out;
}

std::vector<int> Dataset::phis() const
{
    std::vector<int> out;
    for (const auto& it : items)
        if (std::find(out.begin(), out.end(), it.record.phi) == out.end())
            out.push_back(it.record.phi);
    return out;
}

Dataset build_dataset(const ExperimentConfig& c, const WeightedGraph& g)
{
    if (c.epidemic.phis.empty())
        throw ValidationError("epidemic.phis must list at least one phi");
    for (int phi : c.epidemic.phis)
        if (phi < 1 || phi > g.node_count())
            throw ValidationError("phi " + std::to_string(phi) + " outside [1, N]");
    struct Job {
        Label label;
        int phi;
        int index;
    };
    std::vector<Job> jobs;
    for (int phi : c.epidemic.phis)
        for (auto label : {Label::epidemic, Label::random_failure})
            for (int i = 0; i < c.n_per_class; ++i)
                jobs.push_back({label, phi, i});
    std::vector<ItemOutcome> outcomes(jobs.size());
    parallel_for(jobs.size(),
                 [&](std::size_t k) { outcomes[k] = generate_item(c, g, jobs[k].label, jobs[k].phi, jobs[k].index); });
    Dataset d;
    d.graph = g;
    for (auto& o : outcomes) {
        d.items.push_back(std::move(o.item));
        d.timeouts.insert(d.timeouts.end(), o.timeouts.begin(), o.timeouts.end());
    }
    return d;
}

Snapshot regenerate(const WeightedGraph& g, const ItemRecord& r, const EpidemicSpec& epi, const NoiseSpec& noise)
{
    return simulate_item(g, r, epi, noise);
}

json manifest_json(const ExperimentConfig& c, const Dataset& d)
{
    json items = json::array();
    for (const auto& it : d.items) {
        const auto& r = it.record;
        items.push_back({{"file", r.file},
                         {"label", to_string(r.label)},
                         {"phi", r.phi},
                         {"index", r.index},
                         {"attempts", r.attempts},
                         {"seeds", r.seeds},
                         {"sim_seed", r.sim_seed},
                         {"noise_seed", r.noise_seed}});
    }
    json timeouts = json::array();
    for (const auto& t : d.timeouts)
        timeouts.push_back({{"phi", t.phi}, {"index", t.index}, {"attempt", t.attempt}, {"reached", t.reached}});
    json noise = {{"fp_rate", c.noise.fp_rate}, {"fn_rate", c.noise.fn_rate}};
    if (c.noise.n_fp)
        noise["n_fp"] = *c.noise.n_fp;
    if (c.noise.n_fn)
        noise["n_fn"] = *c.noise.n_fn;
    // where the dataset was written is not part of its content
    json config = c.raw;
    if (config.is_object())
        config.erase("out");
    return {{"format", "gsp-infect-dataset"},
            {"version", 1},
            {"master_seed", c.master_seed},
            {"graph_file", "graph.json"},
            {"graph_hash", hex64(d.graph.content_hash())},
            {"node_count", d.graph.node_count()},
            {"amplitude", c.amplitude},
            {"n_per_class", c.n_per_class},
            {"epidemic",
             {{"seeds", c.epidemic.seed_count},
              {"placement", c.epidemic.placement == SeedPlacement::far_apart ? "far" : "random"},
              {"phis", c.epidemic.phis},
              {"max_t", c.epidemic.max_t},
              {"max_attempts", c.epidemic.max_attempts},
              {"exact_phi", c.epidemic.exact_phi}}},
            {"noise", noise},
            {"config", config},
            {"items", items},
            {"timeouts", timeouts}};
}

std::vector<ItemRecord> manifest_items(const json& manifest)
{
    std::vector<ItemRecord> out;
    try {
        for (const auto& j : manifest.at("items")) {
            ItemRecord r;
            r.file = j.at("file").get<std::string>();
            r.label = label_from_string(j.at("label").get<std::string>());
            r.phi = j.at("phi").get<int>();
            r.index = j.at("index").get<int>();
            r.attempts = j.at("attempts").get<int>();
            r.seeds = j.at("seeds").get<std::vector<NodeId>>();
            r.sim_seed = j.at("sim_seed").get<std::uint64_t>();
            r.noise_seed = j.at("noise_seed").get<std::uint64_t>();
            out.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed manifest: ") + e.what());
    }
    return out;
}

Dataset load_dataset(const fs::path& dir, json* manifest_out)
{
    const auto manifest = read_json(dir / "manifest.json");
    Dataset d;
    d.graph = graph_from_json(read_json(dir / manifest.at("graph_file").get<std::string>()));
    if (hex64(d.graph.content_hash()) != manifest.at("graph_hash").get<std::string>())
        throw ValidationError("dataset graph does not match its manifest hash");
    for (auto& r : manifest_items(manifest)) {
        DatasetItem it;
        it.snapshot = snapshot_from_csv(read_file(dir / r.file));
        if (it.snapshot.node_count() != d.graph.node_count())
            throw ValidationError(r.file + " does not match the graph size");
        if (it.snapshot.label != r.label)
            throw ValidationError(r.file + " label disagrees with the manifest");
        it.record = std::move(r);
        d.items.push_back(std::move(it));
    }
    for (const auto& t : manifest.value("timeouts", json::array()))
        d.timeouts.push_back({t.at("phi"), t.at("index"), t.at("attempt"), t.at("reached")});
    if (manifest_out)
        *manifest_out = manifest;
    return d;
}

// ---------------------------------------------------------------------------
// Detectors

DetectorContext::DetectorContext(const WeightedGraph& g, double amplitude, DbgwConfig dbgw, double sgw_scale,
                                 fs::path spectral_cache)
    : graph_(&g), amplitude_(amplitude), cache_(std::move(spectral_cache)), dbgw_(std::move(dbgw)),
      sgw_scale_(sgw_scale)
{
}

DetectorContext::DetectorContext(const WeightedGraph& g, const ExperimentConfig& c)
    : DetectorContext(g, c.amplitude, c.dbgw, c.sgw_scale, c.spectral_cache)
{
}

const SpectralBasis& DetectorContext::basis() const
{
    if (!basis_)
        basis_ = std::make_unique<SpectralBasis>(cache_.empty() ? eigendecompose(*graph_)
                                                                : SpectralCache(cache_).load_or_compute(*graph_));
    return *basis_;
}

const FeatureExtractor& DetectorContext::features(FeatureSource source) const
{
    if (source == FeatureSource::dbgw) {
        if (!dbgw_only_)
            dbgw_only_ = std::make_unique<FeatureExtractor>(*graph_, nullptr, dbgw_, default_sgw_kernel(sgw_scale_));
        return *dbgw_only_;
    }
    if (!features_)
        features_ = std::make_unique<FeatureExtractor>(*graph_, &basis(), dbgw_, default_sgw_kernel(sgw_scale_));
    return *features_;
}

const RbdIndex& DetectorContext::rbd_index(BallMetric m) const
{
    auto& slot = rbd_[m == BallMetric::hop ? 0 : 1];
    if (!slot)
        slot = std::make_unique<RbdIndex>(*graph_, m);
    return *slot;
}

void DetectorContext::prepare(const DetectorSpec& d) const
{
    if (d.needs_basis())
        basis();
    if (d.is_classifier()) {
        const std::vector<double> zero(static_cast<std::size_t>(graph_->node_count()), 0.0);
        features(d.source).primary(zero, d.source);
    }
    if (d.kind == DetectorKind::rbd)
        rbd_index(d.ball);
}

double DetectorContext::metric(const DetectorSpec& d, const Snapshot& s, DetectorKind which) const
{
    if (s.node_count() != graph_->node_count())
        throw ValidationError("snapshot has " + std::to_string(s.node_count()) + " nodes, graph has "
                              + std::to_string(graph_->node_count()));
    const auto signal = to_signal(s, amplitude_).values;
    switch (which) {
    case DetectorKind::smoothness: return smoothness(*graph_, signal, d.weighting);
    case DetectorKind::hecr: return hecr(gft(basis(), signal), d.alpha);
    case DetectorKind::lecr: return lecr(gft(basis(), signal), d.gamma);
    default: throw ValidationError("not a metric detector");
    }
}

std::vector<double> DetectorContext::feature_vector(const DetectorSpec& d, const Snapshot& s) const
{
    if (s.node_count() != graph_->node_count())
        throw ValidationError("snapshot has " + std::to_string(s.node_count()) + " nodes, graph has "
                              + std::to_string(graph_->node_count()));
    const auto signal = to_signal(s, amplitude_).values;
    return features(d.source).extract(signal, d.source, d.mode, d.slice).values;
}

namespace {

std::vector<DetectorKind> metric_parts(const DetectorSpec& d)
{
    if (d.kind == DetectorKind::energy_concentration)
        return {DetectorKind::hecr, DetectorKind::lecr};
    return {d.kind};
}

Label metric_verdict(const DetectorSpec& d, std::span<const PredictionInterval> intervals, std::span<const double> v)
{
    if (d.kind == DetectorKind::energy_concentration)
        return energy_concentration_detect(metric_detect(v[0], intervals[0]), metric_detect(v[1], intervals[1]));
    return metric_detect(v[0], intervals[0]);
}

std::shared_ptr<Classifier> new_classifier(const DetectorSpec& d, std::uint64_t seed)
{
    if (d.kind == DetectorKind::naive_bayes)
        return std::make_shared<NaiveBayes>();
    auto rf = d.rf;
    rf.seed = derive_seed(seed, {rf.seed});
    return std::make_shared<RandomForest>(rf);
}

}  // namespace

DetectorModel train_detector(const DetectorSpec& d, const DetectorContext& ctx, std::span<const Snapshot* const> train,
                             std::uint64_t seed)
{
    if (train.empty())
        throw ValidationError("no training snapshots");
    ctx.prepare(d);
    DetectorModel m;
    m.spec = d;
    m.node_count = ctx.graph().node_count();
    m.graph_hash = ctx.graph().content_hash();
    m.phi = train.front()->reported_infected();
    m.amplitude = ctx.amplitude();

    if (d.is_metric()) {
        std::vector<const Snapshot*> failures;
        for (auto* s : train)
            if (s->label == Label::random_failure)
                failures.push_back(s);
        for (auto part : metric_parts(d)) {
            std::vector<double> values(failures.size());
            parallel_for(failures.size(), [&](std::size_t i) { values[i] = ctx.metric(d, *failures[i], part); });
            m.intervals.push_back(fit_interval(values, d.epsilon, to_string(part)));
        }
    } else if (d.is_classifier()) {
        LabeledDataset data;
        data.features.resize(train.size());
        data.labels.resize(train.size());
        parallel_for(train.size(), [&](std::size_t i) {
            data.features[i] = ctx.feature_vector(d, *train[i]);
            data.labels[i] = train[i]->label;
        });
        auto clf = new_classifier(d, seed);
        clf->fit(data);
        m.classifier = std::move(clf);
    } else {
        std::vector<Snapshot> snaps;
        for (auto* s : train)
            snaps.push_back(*s);
        const auto tuned = rbd_tune(ctx.rbd_index(d.ball), snaps, d.radius_grid, d.threshold_grid);
        m.rbd = tuned.params;
        m.train_accuracy = tuned.accuracy;
    }

    if (d.kind != DetectorKind::rbd) {
        int correct = 0;
        for (auto* s : train)
            correct += run_detector(m, ctx, *s).label == s->label;
        m.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
    }
    return m;
}

Verdict run_detector(const DetectorModel& m, const DetectorContext& ctx, const Snapshot& s)
{
    if (s.node_count() != m.node_count || ctx.graph().node_count() != m.node_count)
        throw ValidationError("model expects " + std::to_string(m.node_count) + " nodes, snapshot has "
                              + std::to_string(s.node_count()));
    const auto& d = m.spec;
    Verdict v;
    if (d.is_metric()) {
        std::vector<double> values;
        for (auto part : metric_parts(d))
            values.push_back(ctx.metric(d, s, part));
        v.label = metric_verdict(d, m.intervals, values);
        v.score = values[0];
    } else if (d.is_classifier()) {
        const auto x = ctx.feature_vector(d, s);
        v.label = m.classifier->predict(x);
        if (const auto* nb = dynamic_cast<const NaiveBayes*>(m.classifier.get())) {
            const auto lj = nb->log_joint(x);
            v.score = 1.0 / (1.0 + std::exp(lj[0] - lj[1]));
        } else if (const auto* rf = dynamic_cast<const RandomForest*>(m.classifier.get())) {
            v.score = static_cast<double>(rf->epidemic_votes(x)) / rf->tree_count();
        }
    } else {
        v.score = rbd_statistic(ctx.rbd_index(m.rbd.metric), s.reported, m.rbd.radius);
        v.label = v.score >= m.rbd.threshold ? Label::epidemic : Label::random_failure;
    }
    return v;
}

json DetectorModel::to_json() const
{
    json j = {{"format", "gsp-infect-model"},
              {"version", 1},
              {"detector", gspi::to_json(spec)},
              {"node_count", node_count},
              {"graph_hash", hex64(graph_hash)},
              {"phi", phi},
              {"amplitude", amplitude},
              {"train_accuracy", train_accuracy}};
    if (spec.is_metric()) {
        json iv = json::array();
        for (const auto& p : intervals)
            iv.push_back(gspi::to_json(p));
        j["intervals"] = iv;
    } else if (spec.is_classifier()) {
        j["classifier"] = classifier->to_json();
        if (spec.source == FeatureSource::dbgw)
            j["dbgw"] = gspi::to_json(dbgw);
        if (spec.source == FeatureSource::sgw)
            j["sgw_scale"] = sgw_scale;
    } else {
        j["rbd"] = gspi::to_json(rbd);
    }
    return j;
}

DetectorModel DetectorModel::from_json(const json& j)
{
    try {
        if (j.value("format", "") != "gsp-infect-model")
            throw ValidationError("not a gsp-infect model file");
        DetectorModel m;
        m.spec = detector_spec_from_json(j.at("detector"));
        m.node_count = j.at("node_count").get<int>();
        m.graph_hash = parse_hex64(j.at("graph_hash").get<std::string>());
        m.phi = j.at("phi").get<int>();
        m.amplitude = j.at("amplitude").get<double>();
        m.train_accuracy = j.value("train_accuracy", 0.0);
        if (m.spec.is_metric()) {
            for (const auto& p : j.at("intervals"))
                m.intervals.push_back(interval_from_json(p));
            if (m.intervals.size() != metric_parts(m.spec).size())
                throw ValidationError("model has the wrong number of intervals");
        } else if (m.spec.is_classifier()) {
            m.classifier = classifier_from_json(j.at("classifier"));
            if (j.contains("dbgw"))
                m.dbgw = dbgw_config_from_json(j.at("dbgw"));
            m.sgw_scale = j.value("sgw_scale", m.sgw_scale);
        } else {
            m.rbd = rbd_params_from_json(j.at("rbd"));
        }
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<MethodScore> evaluate(const ExperimentConfig& c, const Dataset& d)
{
    if (c.detectors.empty())
        throw ValidationError("config lists no detectors");
    const DetectorContext ctx(d.graph, c);
    std::vector<MethodScore> rows;
    for (int phi : d.phis()) {
        const auto items = d.at_phi(phi);
        std::vector<Label> labels;
        for (auto* it : items)
            labels.push_back(it->snapshot.label);
        const auto cv_seed = derive_seed(c.master_seed, {static_cast<std::uint64_t>(phi), 0x6376});
        const auto fold = stratified_folds(labels, c.folds, cv_seed);

        for (const auto& det : c.detectors) {
            ctx.prepare(det);
            MethodScore row{det.name, phi, 0.0, 0.0};
            if (det.is_classifier()) {
                LabeledDataset data;
                data.features.resize(items.size());
                data.labels = labels;
                parallel_for(items.size(),
                             [&](std::size_t i) { data.features[i] = ctx.feature_vector(det, items[i]->snapshot); });
                const auto report = kfold_aidp(
                    data, c.folds,
                    [&](int f) -> std::unique_ptr<Classifier> {
                        const auto seed = derive_seed(cv_seed, {static_cast<std::uint64_t>(f)});
                        if (det.kind == DetectorKind::naive_bayes)
                            return std::make_unique<NaiveBayes>();
                        auto rf = det.rf;
                        rf.seed = derive_seed(seed, {rf.seed});
                        return std::make_unique<RandomForest>(rf);
                    },
                    cv_seed);
                row.aidp = report.aidp;
                row.std = report.std;
                rows.push_back(row);
                continue;
            }

            std::vector<double> acc;
            if (det.is_metric()) {
                const auto parts = metric_parts(det);
                std::vector<std::vector<double>> values(parts.size(), std::vector<double>(items.size()));
                for (std::size_t p = 0; p < parts.size(); ++p)
                    parallel_for(items.size(),
                                 [&](std::size_t i) { values[p][i] = ctx.metric(det, items[i]->snapshot, parts[p]); });
                for (int f = 0; f < c.folds; ++f) {
                    std::vector<PredictionInterval> intervals;
                    for (std::size_t p = 0; p < parts.size(); ++p) {
                        std::vector<double> train;
                        for (std::size_t i = 0; i < items.size(); ++i)
                            if (fold[i] != f && labels[i] == Label::random_failure)
                                train.push_back(values[p][i]);
                        intervals.push_back(fit_interval(train, det.epsilon, to_string(parts[p])));
                    }
                    int correct = 0, total = 0;
                    for (std::size_t i = 0; i < items.size(); ++i) {
                        if (fold[i] != f)
                            continue;
                        std::vector<double> v;
                        for (std::size_t p = 0; p < parts.size(); ++p)
                            v.push_back(values[p][i]);
                        correct += metric_verdict(det, intervals, v) == labels[i];
                        ++total;
                    }
                    acc.push_back(static_cast<double>(correct) / total);
                }
            } else {
                const auto& index = ctx.rbd_index(det.ball);
                for (int f = 0; f < c.folds; ++f) {
                    std::vector<Snapshot> train;
                    for (std::size_t i = 0; i < items.size(); ++i)
                        if (fold[i] != f)
                            train.push_back(items[i]->snapshot);
                    const auto tuned = rbd_tune(index, train, det.radius_grid, det.threshold_grid);
                    int correct = 0, total = 0;
                    for (std::size_t i = 0; i < items.size(); ++i) {
                        if (fold[i] != f)
                            continue;
                        correct += rbd_detect(index, items[i]->snapshot, tuned.params) == labels[i];
                        ++total;
                    }
                    acc.push_back(static_cast<double>(correct) / total);
                }
            }
            row.aidp = mean(acc);
            row.std = sample_stddev(acc);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string aidp_to_csv(std::span<const MethodScore> rows)
{
    std::ostringstream out;
    out << "method,phi,aidp,std\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.phi << ',' << format_double(r.aidp) << ',' << format_double(r.std) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Bounds

json robustness_bounds(const DetectorModel& m, const WeightedGraph& g, const Snapshot& s, double amplitude)
{
    const auto& d = m.spec;
    if (!d.is_metric())
        throw ValidationError("robustness bounds apply to metric detectors only, not " + to_string(d.kind));
    if (d.kind == DetectorKind::lecr)
        throw ValidationError("no robustness bound is defined for the LECR detector");
    if (s.node_count() != g.node_count() || g.node_count() != m.node_count)
        throw ValidationError("snapshot, graph and model sizes differ");
    if (!(amplitude > 0.0))
        throw ValidationError("amplitude must be positive");

    Snapshot initial = s;
    if (s.has_truth())
        initial.reported = s.truth;
    const auto clean = to_signal(initial, amplitude).values;
    const auto noisy = to_signal(s, amplitude).values;

    json out = {{"detector", d.name}, {"amplitude", amplitude}};
    if (s.has_truth()) {
        int nf = 0;
        for (int v = 0; v < s.node_count(); ++v)
            nf += s.reported[v] != s.truth[v];
        out["n_f_observed"] = nf;
    }
    auto side_name = [](double ci, const PredictionInterval& p) {
        return ci < p.cs ? "below_interval" : ci > p.ce ? "above_interval" : "inside";
    };

    if (d.kind == DetectorKind::smoothness) {
        const auto& p = m.intervals.at(0);
        // the bound's Delta is the largest smoothness coefficient on an edge
        double delta = g.max_distance();
        if (d.weighting == SmoothnessWeighting::weight) {
            delta = 0.0;
            for (const auto& e : g.edges())
                delta = std::max(delta, g.beta() / e.distance);
        }
        const double ci = smoothness(g, clean, d.weighting);
        out["metric"] = "smoothness";
        out["ci"] = ci;
        out["cs"] = p.cs;
        out["ce"] = p.ce;
        out["case"] = side_name(ci, p);
        out["max_degree"] = g.max_degree();
        out["max_distance"] = delta;
        out["bound"] = smoothness_nf_bound(ci, p.cs, p.ce, amplitude, g.max_degree(), delta);
        return out;
    }

    // hecr, or the HECR half of energy concentration
    const auto& p = m.intervals.at(0);
    const auto basis = eigendecompose(g);
    const auto noisy_spec = gft(basis, noisy);
    const auto in = hecr_bound_inputs(basis, clean, energy(noisy_spec), amplitude, d.alpha, p);
    double noisy_high = 0.0;
    for (int j = high_band_start(g.node_count(), d.alpha); j < g.node_count(); ++j)
        noisy_high += noisy_spec[j];
    out["metric"] = "hecr";
    out["ci"] = in.ci;
    out["cs"] = p.cs;
    out["ce"] = p.ce;
    out["case"] = side_name(in.ci, p);
    out["noisy_energy"] = in.noisy_energy;
    out["high_band_sum_sign"] = noisy_high >= 0.0 ? "nonnegative" : "negative";
    if (in.ci < p.cs)
        out["bound"] = hecr_nf_bound(in, IntervalSide::below_interval);
    else if (in.ci > p.ce)
        out["bound"] = hecr_nf_bound(in, IntervalSide::above_interval,
                                     noisy_high >= 0.0 ? HighSumSign::nonnegative : HighSumSign::negative);
    else
        out["bound"] = 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

fs::path dataset_dir(const ExperimentConfig& c) { return c.dataset_dir.empty() ? c.out_dir : c.dataset_dir; }

WeightedGraph graph_for_item_commands(const ExperimentConfig& c)
{
    if (!c.graph_file.empty())
        return build_graph(c);
    if (!c.dataset_dir.empty())
        return graph_from_json(read_json(c.dataset_dir / "graph.json"));
    throw ValidationError("config needs graph_file or dataset to locate the graph");
}

}  // namespace

void cmd_generate_graph(const ExperimentConfig& c)
{
    const auto g = build_graph(c);
    write_json_atomic(c.out_dir / "graph.json", to_json(g));
}

void cmd_make_dataset(const ExperimentConfig& c)
{
    const auto g = build_graph(c);
    const auto d = build_dataset(c, g);
    write_json_atomic(c.out_dir / "graph.json", to_json(g));
    for (const auto& it : d.items)
        write_file_atomic(c.out_dir / it.record.file, snapshot_to_csv(it.snapshot));
    write_json_atomic(c.out_dir / "manifest.json", manifest_json(c, d));
}

void cmd_train(const ExperimentConfig& c)
{
    if (c.detectors.empty())
        throw ValidationError("config lists no detectors");
    const auto d = load_dataset(dataset_dir(c));
    const auto phis = d.phis();
    int phi = 0;
    if (c.phi)
        phi = *c.phi;
    else if (phis.size() == 1)
        phi = phis.front();
    else
        throw ValidationError("dataset has several phis; set config.phi");
    std::vector<const Snapshot*> train;
    for (auto* it : d.at_phi(phi))
        train.push_back(&it->snapshot);
    if (train.empty())
        throw ValidationError("dataset has no snapshots at phi " + std::to_string(phi));

    const DetectorContext ctx(d.graph, c);
    json report = {{"phi", phi}, {"training_snapshots", train.size()}, {"models", json::array()}};
    for (const auto& det : c.detectors) {
        auto m = train_detector(det, ctx, train, derive_seed(c.master_seed, {0x7472}));
        m.phi = phi;
        m.dbgw = c.dbgw;
        m.sgw_scale = c.sgw_scale;
        const auto file = "model_" + det.name + ".json";
        write_json_atomic(c.out_dir / file, m.to_json());
        report["models"].push_back({{"name", det.name}, {"file", file}, {"train_accuracy", m.train_accuracy}});
    }
    write_json_atomic(c.out_dir / "train_report.json", report);
}

void cmd_detect(const ExperimentConfig& c)
{
    if (c.model_path.empty() || c.snapshot_path.empty())
        throw ValidationError("detect needs model and snapshot paths");
    const auto m = DetectorModel::from_json(read_json(c.model_path));
    const auto g = graph_for_item_commands(c);
    const auto s = snapshot_from_csv(read_file(c.snapshot_path));
    if (s.node_count() != m.node_count || g.node_count() != m.node_count)
        throw ValidationError("model expects " + std::to_string(m.node_count) + " nodes; graph has "
                              + std::to_string(g.node_count()) + ", snapshot has " + std::to_string(s.node_count()));
    const DetectorContext ctx(g, m.amplitude, m.dbgw, m.sgw_scale, c.spectral_cache);
    const auto v = run_detector(m, ctx, s);
    write_json_atomic(c.out_dir / "verdict.json",
                      {{"verdict", to_string(v.label)}, {"score", v.score}, {"model", m.spec.name}});
}

void cmd_evaluate(const ExperimentConfig& c)
{
    Dataset d = c.dataset_dir.empty() ? build_dataset(c, build_graph(c)) : load_dataset(c.dataset_dir);
    const auto rows = evaluate(c, d);
    write_file_atomic(c.out_dir / "aidp.csv", aidp_to_csv(rows));
}

void cmd_micro(const ExperimentConfig& c)
{
    if (c.micro.target_phis.empty())
        throw ValidationError("config needs a micro section");
    const auto g = build_graph(c);
    const auto report = quarantine_experiment(g, c.micro);
    write_file_atomic(c.out_dir / "micro.csv", micro_to_csv(report));
}

void cmd_bounds(const ExperimentConfig& c)
{
    if (c.model_path.empty() || c.snapshot_path.empty())
        throw ValidationError("bounds needs model and snapshot paths");
    const auto m = DetectorModel::from_json(read_json(c.model_path));
    const auto g = graph_for_item_commands(c);
    const auto s = snapshot_from_csv(read_file(c.snapshot_path));
    const double a = c.raw.contains("amplitude") ? c.amplitude : m.amplitude;
    write_json_atomic(c.out_dir / "bounds.json", robustness_bounds(m, g, s, a));
}

}  // namespace gspi
