#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gspi/baselines.hpp"
#include "gspi/dynamics.hpp"
#include "gspi/graph.hpp"
#include "gspi/learning.hpp"
#include "gspi/metrics.hpp"
#include "gspi/micro.hpp"
#include "gspi/spectral.hpp"
#include "gspi/wavelets.hpp"

namespace gspi {

enum class SeedPlacement { random, far_apart };

struct EpidemicSpec {
    int seed_count = 1;
    SeedPlacement placement = SeedPlacement::random;
    std::vector<int> phis;
    int max_t = 10000;
    int max_attempts = 20;  ///< retries with fresh seeds after a timeout
    bool exact_phi = false; ///< trim the final step's overshoot so exactly phi are infected
};

enum class DetectorKind { smoothness, hecr, lecr, energy_concentration, naive_bayes, random_forest, rbd };

std::string to_string(DetectorKind k);
DetectorKind detector_kind_from_string(std::string_view s);

struct DetectorSpec {
    DetectorKind kind = DetectorKind::smoothness;
    std::string name;  ///< method label in reports
    double epsilon = 95.0;
    double alpha = 0.1;
    double gamma = 0.1;
    SmoothnessWeighting weighting = SmoothnessWeighting::distance;
    FeatureSource source = FeatureSource::dbgw;
    FeatureMode mode = FeatureMode::fast;
    std::vector<int> slice;
    RandomForestConfig rf;
    std::vector<double> radius_grid{1, 2, 3};
    std::vector<double> threshold_grid{0.25, 0.5, 1, 2, 4};
    BallMetric ball = BallMetric::hop;

    bool is_metric() const;
    bool is_classifier() const;
    bool needs_basis() const;
};

DetectorSpec detector_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DetectorSpec& d);

struct ExperimentConfig {
    GraphGenSpec graph;
    std::filesystem::path graph_file;  ///< graph JSON or edge list; overrides `graph`
    EpidemicSpec epidemic;
    NoiseSpec noise;
    double amplitude = 1000.0;
    int n_per_class = 200;
    std::vector<DetectorSpec> detectors;
    DbgwConfig dbgw;
    double sgw_scale = 10.0;
    int folds = 10;
    std::uint64_t master_seed = 0;
    MicroConfig micro;
    std::optional<int> phi;            ///< train: which phi of the dataset
    std::filesystem::path dataset_dir;
    std::filesystem::path model_path;
    std::filesystem::path snapshot_path;
    std::filesystem::path spectral_cache;
    std::filesystem::path out_dir = ".";
    nlohmann::json raw;                ///< config as given, for manifests
};

/// Validates and fills defaults. Relative paths resolve against `base_dir`.
/// Throws ValidationError on bad or unknown fields; master_seed is required.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Bundled desk-scale scenarios: "scenario1", "scenario2", "scenario3", "micro_rgg".
nlohmann::json preset_config(std::string_view name);
std::vector<std::string> preset_names();

nlohmann::json to_json(const DbgwConfig& c);
DbgwConfig dbgw_config_from_json(const nlohmann::json& j);

/// Graph described by the config (generated, or loaded from graph_file).
WeightedGraph build_graph(const ExperimentConfig& c);

/// Everything needed to regenerate one snapshot.
struct ItemRecord {
    Label label = Label::random_failure;
    int phi = 0;
    int index = 0;
    int attempts = 1;
    std::vector<NodeId> seeds;     ///< epidemic seeds (empty for random failures)
    std::uint64_t sim_seed = 0;
    std::uint64_t noise_seed = 0;
    std::string file;              ///< relative to the dataset dir
};

struct TimeoutRecord {
    int phi = 0;
    int index = 0;
    int attempt = 0;
    int reached = 0;
};

struct DatasetItem {
    ItemRecord record;
    Snapshot snapshot;
};

struct Dataset {
    WeightedGraph graph;
    std::vector<DatasetItem> items;
    std::vector<TimeoutRecord> timeouts;

    std::vector<const DatasetItem*> at_phi(int phi) const;
    std::vector<int> phis() const;
};

/// Balanced dataset: for every phi, n_per_class epidemics and n_per_class
/// random failures, each from its own derived seed. Items are generated
/// concurrently; the result does not depend on the thread count.
Dataset build_dataset(const ExperimentConfig& c, const WeightedGraph& g);

/// Recreates a snapshot from its manifest record.
Snapshot regenerate(const WeightedGraph& g, const ItemRecord& r, const EpidemicSpec& epi, const NoiseSpec& noise);

nlohmann::json manifest_json(const ExperimentConfig& c, const Dataset& d);
/// Reads graph.json, manifest.json and every snapshot CSV of a dataset dir.
Dataset load_dataset(const std::filesystem::path& dir, nlohmann::json* manifest = nullptr);
std::vector<ItemRecord> manifest_items(const nlohmann::json& manifest);

/// Shared per-graph state for detectors: basis and wavelet operators are
/// built on first use.
class DetectorContext {
public:
    DetectorContext(const WeightedGraph& g, double amplitude, DbgwConfig dbgw, double sgw_scale,
                    std::filesystem::path spectral_cache = {});
    DetectorContext(const WeightedGraph& g, const ExperimentConfig& c);

    const WeightedGraph& graph() const noexcept { return *graph_; }
    double amplitude() const noexcept { return amplitude_; }
    const SpectralBasis& basis() const;
    /// Extractor for a source; DBGW features do not need the spectral basis.
    const FeatureExtractor& features(FeatureSource source) const;
    const RbdIndex& rbd_index(BallMetric m) const;
    /// Builds everything `d` needs so later calls are safe to make concurrently.
    void prepare(const DetectorSpec& d) const;

    /// The metric value (or HECR for energy concentration) of a snapshot.
    double metric(const DetectorSpec& d, const Snapshot& s, DetectorKind which) const;
    std::vector<double> feature_vector(const DetectorSpec& d, const Snapshot& s) const;

private:
    const WeightedGraph* graph_;
    double amplitude_;
    std::filesystem::path cache_;
    DbgwConfig dbgw_;
    double sgw_scale_;
    mutable std::unique_ptr<SpectralBasis> basis_;
    mutable std::unique_ptr<FeatureExtractor> features_;
    mutable std::unique_ptr<FeatureExtractor> dbgw_only_;
    mutable std::unique_ptr<RbdIndex> rbd_[2];
};

struct Verdict {
    Label label = Label::random_failure;
    double score = 0.0;
};

/// A trained detector of any kind.
struct DetectorModel {
    DetectorSpec spec;
    int node_count = 0;
    std::uint64_t graph_hash = 0;
    int phi = 0;
    double amplitude = 1000.0;
    DbgwConfig dbgw;
    double sgw_scale = 10.0;
    std::vector<PredictionInterval> intervals;  ///< one, or (hecr, lecr) for energy concentration
    std::shared_ptr<Classifier> classifier;
    RbdParams rbd;
    double train_accuracy = 0.0;

    nlohmann::json to_json() const;
    static DetectorModel from_json(const nlohmann::json& j);
};

/// Metric detectors fit on the random-failure items only.
DetectorModel train_detector(const DetectorSpec& d, const DetectorContext& ctx, std::span<const Snapshot* const> train,
                             std::uint64_t seed);
Verdict run_detector(const DetectorModel& m, const DetectorContext& ctx, const Snapshot& s);

struct MethodScore {
    std::string method;
    int phi = 0;
    double aidp = 0.0;
    double std = 0.0;
};

/// Stratified k-fold AIDP of every configured detector at every phi.
std::vector<MethodScore> evaluate(const ExperimentConfig& c, const Dataset& d);
std::string aidp_to_csv(std::span<const MethodScore> rows);

/// Robustness bounds for a metric model on one snapshot. The noiseless signal
/// is the snapshot's true column when present, else the reported one.
nlohmann::json robustness_bounds(const DetectorModel& m, const WeightedGraph& g, const Snapshot& s, double amplitude);

// Command entry points; each writes its outputs under c.out_dir atomically.
void cmd_generate_graph(const ExperimentConfig& c);
void cmd_make_dataset(const ExperimentConfig& c);
void cmd_train(const ExperimentConfig& c);
void cmd_detect(const ExperimentConfig& c);
void cmd_evaluate(const ExperimentConfig& c);
void cmd_micro(const ExperimentConfig& c);
void cmd_bounds(const ExperimentConfig& c);

}  // namespace gspi
