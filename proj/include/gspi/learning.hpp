#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gspi/dynamics.hpp"
#include "gspi/graph.hpp"
#include "gspi/spectral.hpp"
#include "gspi/wavelets.hpp"

namespace gspi {

// ---------------------------------------------------------------------------
// Features

enum class FeatureSource { gft, dbgw, sgw };
enum class FeatureMode { direct, fast };

std::string to_string(FeatureSource s);
std::string to_string(FeatureMode m);
FeatureSource feature_source_from_string(std::string_view s);
FeatureMode feature_mode_from_string(std::string_view s);

struct FeatureVector {
    std::vector<double> values;
    FeatureSource source = FeatureSource::gft;
    FeatureMode mode = FeatureMode::direct;
};

/// (mean, unbiased variance, IQR) of a primary feature vector. Needs >= 4 values.
std::vector<double> fast_features(std::span<const double> primary);

/// Feature extraction bound to one graph. Wavelet operators are built once
/// and reused for every signal.
class FeatureExtractor {
public:
    /// `basis` is required for the GFT and SGW sources.
    FeatureExtractor(const WeightedGraph& g, const SpectralBasis* basis, DbgwConfig dbgw = {},
                     SgwKernel sgw = default_sgw_kernel());

    /// Primary vector for a source: raw signed GFT spectrum, or per-node wavelet coefficients.
    std::vector<double> primary(std::span<const double> signal, FeatureSource source) const;

    /// Direct mode returns the primary vector, optionally restricted to
    /// `slice` indices; fast mode returns its three summary statistics.
    FeatureVector extract(std::span<const double> signal, FeatureSource source, FeatureMode mode,
                          std::span<const int> slice = {}) const;

private:
    const WeightedGraph* graph_;
    const SpectralBasis* basis_;
    DbgwConfig dbgw_config_;
    SgwKernel sgw_kernel_;
    mutable std::unique_ptr<DbgwTransform> dbgw_;
    mutable std::unique_ptr<SgwTransform> sgw_;
};

/// Convenience one-shot extraction.
FeatureVector extract_features(const WeightedGraph& g, const SpectralBasis* basis, std::span<const double> signal,
                               FeatureSource source, FeatureMode mode, const DbgwConfig& dbgw = {},
                               const SgwKernel& sgw = default_sgw_kernel());

// ---------------------------------------------------------------------------
// Data

struct LabeledDataset {
    std::vector<std::vector<double>> features;
    std::vector<Label> labels;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t feature_count() const { return features.empty() ? 0 : features.front().size(); }
    void add(std::vector<double> x, Label y);
    /// Throws ValidationError on inconsistent lengths.
    void validate() const;
    LabeledDataset subset(std::span<const std::size_t> indices) const;
    std::size_t count(Label y) const;
};

// ---------------------------------------------------------------------------
// Classifiers

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void fit(const LabeledDataset& data) = 0;
    virtual Label predict(std::span<const double> x) const = 0;
    virtual nlohmann::json to_json() const = 0;
    virtual std::string name() const = 0;
};

/// Gaussian naive Bayes. Per-class, per-feature population variances plus
/// a floor of 1e-9 times the largest feature variance of the training data.
class NaiveBayes final : public Classifier {
public:
    void fit(const LabeledDataset& data) override;
    Label predict(std::span<const double> x) const override;
    /// log p(y) + sum_j log N(x_j; mu_yj, var_yj), indexed by Label.
    std::array<double, 2> log_joint(std::span<const double> x) const;
    nlohmann::json to_json() const override;
    std::string name() const override { return "nb"; }

    static NaiveBayes from_json(const nlohmann::json& j);

private:
    std::array<double, 2> log_prior_{};
    std::array<std::vector<double>, 2> means_;
    std::array<std::vector<double>, 2> variances_;
};

struct RandomForestConfig {
    int n_tree = 100;
    /// Features tried per split; 0 means floor(sqrt(f)).
    int features_per_split = 0;
    bool bootstrap = true;
    std::uint64_t seed = 1;
};

/// CART forest with Gini splits, bootstrap samples of the training size and
/// trees grown until pure or fewer than two samples. Majority vote; ties and
/// undecidable leaves go to random_failure. Trees train concurrently with
/// per-tree random streams, so results do not depend on the thread count.
class RandomForest final : public Classifier {
public:
    explicit RandomForest(RandomForestConfig config = {}) : config_(config) {}

    void fit(const LabeledDataset& data) override;
    Label predict(std::span<const double> x) const override;
    /// Number of trees voting epidemic.
    int epidemic_votes(std::span<const double> x) const;
    nlohmann::json to_json() const override;
    std::string name() const override { return "rf"; }

    int tree_count() const noexcept { return static_cast<int>(trees_.size()); }
    const RandomForestConfig& config() const noexcept { return config_; }

    static RandomForest from_json(const nlohmann::json& j);

    struct Node {
        int feature = -1;  ///< -1 for leaves
        double threshold = 0.0;
        int left = -1;     ///< x[feature] <= threshold
        int right = -1;
        Label label = Label::random_failure;
    };
    using Tree = std::vector<Node>;

private:
    RandomForestConfig config_;
    std::size_t feature_count_ = 0;
    std::vector<Tree> trees_;
};

enum class ClassifierKind { naive_bayes, random_forest };
std::unique_ptr<Classifier> make_classifier(ClassifierKind kind, const RandomForestConfig& rf = {});
std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Evaluation

/// p(H0|H0) p0 + p(H1|H1) p1.
double aidp(double p_h0_given_h0, double p_h1_given_h1, double p0 = 0.5, double p1 = 0.5);

struct FoldResult {
    int tp = 0, tn = 0, fp = 0, fn = 0;
    double accuracy() const { return static_cast<double>(tp + tn) / std::max(1, tp + tn + fp + fn); }
};

struct CrossValidationReport {
    double aidp = 0.0;     ///< mean fold accuracy
    double std = 0.0;      ///< sample std of fold accuracies
    std::vector<FoldResult> folds;
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>(int fold)>;

/// Stratified k-fold cross-validation. Each class is shuffled with `seed` and
/// dealt evenly over the folds. Throws ValidationError if a class has fewer
/// than k samples.
CrossValidationReport kfold_aidp(const LabeledDataset& data, int k, const ClassifierFactory& factory,
                                 std::uint64_t seed);

/// Fold assignment used by kfold_aidp: fold index per sample.
std::vector<int> stratified_folds(std::span<const Label> labels, int k, std::uint64_t seed);

}  // namespace gspi
