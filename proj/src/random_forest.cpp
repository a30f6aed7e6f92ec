#include "gspi/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gspi/error.hpp"
#include "gspi/parallel.hpp"
#include "gspi/rng.hpp"

namespace gspi {

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
};

Label majority(const LabeledDataset& data, std::span<const std::size_t> idx)
{
    std::size_t epi = 0;
    for (auto i : idx)
        epi += data.labels[i] == Label::epidemic;
    return 2 * epi > idx.size() ? Label::epidemic : Label::random_failure;
}

bool pure(const LabeledDataset& data, std::span<const std::size_t> idx)
{
    for (auto i : idx)
        if (data.labels[i] != data.labels[idx[0]])
            return false;
    return true;
}

// weighted Gini of the best threshold on one feature; feature < 0 if constant
Split best_threshold(const LabeledDataset& data, std::span<const std::size_t> idx, int feature)
{
    std::vector<std::pair<double, int>> v;
    v.reserve(idx.size());
    int total_epi = 0;
    for (auto i : idx) {
        const int y = data.labels[i] == Label::epidemic;
        v.emplace_back(data.features[i][static_cast<std::size_t>(feature)], y);
        total_epi += y;
    }
    std::sort(v.begin(), v.end());
    Split best;
    const double n = static_cast<double>(v.size());
    int left_epi = 0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        left_epi += v[k].second;
        if (v[k].first == v[k + 1].first)
            continue;
        const double nl = static_cast<double>(k + 1), nr = n - nl;
        const double pl = left_epi / nl, pr = (total_epi - left_epi) / nr;
        const double g = nl * 2.0 * pl * (1.0 - pl) + nr * 2.0 * pr * (1.0 - pr);
        if (best.feature < 0 || g < best.impurity) {
            double t = 0.5 * (v[k].first + v[k + 1].first);
            if (!(t < v[k + 1].first))
                t = v[k].first;
            best = {feature, t, g};
        }
    }
    return best;
}

RandomForest::Tree grow_tree(const LabeledDataset& data, std::vector<std::size_t> sample, int per_split, Rng& rng)
{
    const int f = static_cast<int>(data.feature_count());
    RandomForest::Tree tree;
    struct Pending {
        int node;
        std::vector<std::size_t> idx;
    };
    std::vector<Pending> stack;
    tree.emplace_back();
    stack.push_back({0, std::move(sample)});
    std::vector<int> order(static_cast<std::size_t>(f));

    while (!stack.empty()) {
        auto [node, idx] = std::move(stack.back());
        stack.pop_back();
        tree[node].label = majority(data, idx);
        if (idx.size() < 2 || pure(data, idx))
            continue;

        // sample features without replacement; constant ones do not count
        // towards per_split, so a split is found whenever one exists
        std::iota(order.begin(), order.end(), 0);
        Split best;
        int tried = 0;
        for (int k = 0; k < f && tried < per_split; ++k) {
            const auto pick = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(f - k)));
            std::swap(order[k], order[pick]);
            const auto s = best_threshold(data, idx, order[k]);
            if (s.feature < 0)
                continue;
            ++tried;
            if (best.feature < 0 || s.impurity < best.impurity)
                best = s;
        }
        if (best.feature < 0)
            continue;

        std::vector<std::size_t> left, right;
        for (auto i : idx)
            (data.features[i][static_cast<std::size_t>(best.feature)] <= best.threshold ? left : right).push_back(i);
        const int l = static_cast<int>(tree.size());
        tree.emplace_back();
        tree.emplace_back();
        tree[node].feature = best.feature;
        tree[node].threshold = best.threshold;
        tree[node].left = l;
        tree[node].right = l + 1;
        stack.push_back({l + 1, std::move(right)});
        stack.push_back({l, std::move(left)});
    }
    return tree;
}

Label tree_predict(const RandomForest::Tree& tree, std::span<const double> x)
{
    int k = 0;
    while (tree[k].feature >= 0)
        k = x[static_cast<std::size_t>(tree[k].feature)] <= tree[k].threshold ? tree[k].left : tree[k].right;
    return tree[k].label;
}

nlohmann::json node_to_json(const RandomForest::Tree& tree, int k)
{
    const auto& n = tree[k];
    if (n.feature < 0)
        return {{"label", to_string(n.label)}};
    return {{"feature", n.feature},
            {"threshold", n.threshold},
            {"label", to_string(n.label)},
            {"left", node_to_json(tree, n.left)},
            {"right", node_to_json(tree, n.right)}};
}

int node_from_json(const nlohmann::json& j, RandomForest::Tree& tree, std::size_t feature_count)
{
    const int k = static_cast<int>(tree.size());
    tree.emplace_back();
    tree[k].label = label_from_string(j.at("label").get<std::string>());
    if (j.contains("feature")) {
        const int f = j.at("feature").get<int>();
        if (f < 0 || static_cast<std::size_t>(f) >= feature_count)
            throw ValidationError("tree node feature out of range");
        tree[k].feature = f;
        tree[k].threshold = j.at("threshold").get<double>();
        const int l = node_from_json(j.at("left"), tree, feature_count);
        const int r = node_from_json(j.at("right"), tree, feature_count);
        tree[k].left = l;
        tree[k].right = r;
    }
    return k;
}

}  // namespace

void RandomForest::fit(const LabeledDataset& data)
{
    data.validate();
    if (data.count(Label::epidemic) == 0 || data.count(Label::random_failure) == 0)
        throw ValidationError("training data must contain both classes");
    if (config_.n_tree < 1)
        throw ValidationError("n_tree must be >= 1");
    const int f = static_cast<int>(data.feature_count());
    if (f == 0)
        throw ValidationError("training data has no features");
    int per_split = config_.features_per_split;
    if (per_split == 0)
        per_split = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(f)))));
    if (per_split < 1 || per_split > f)
        throw ValidationError("features per split must lie in [1, f]");

    feature_count_ = data.feature_count();
    trees_.assign(static_cast<std::size_t>(config_.n_tree), {});
    parallel_for(trees_.size(), [&](std::size_t t) {
        Rng rng(derive_seed(config_.seed, {t}));
        std::vector<std::size_t> sample(data.size());
        if (config_.bootstrap)
            for (auto& s : sample)
                s = static_cast<std::size_t>(rng.below(data.size()));
        else
            std::iota(sample.begin(), sample.end(), std::size_t{0});
        trees_[t] = grow_tree(data, std::move(sample), per_split, rng);
    });
}

int RandomForest::epidemic_votes(std::span<const double> x) const
{
    if (trees_.empty())
        throw ValidationError("random forest is not trained");
    if (x.size() != feature_count_)
        throw ValidationError("feature length " + std::to_string(x.size()) + " does not match model ("
                              + std::to_string(feature_count_) + ")");
    int votes = 0;
    for (const auto& t : trees_)
        votes += tree_predict(t, x) == Label::epidemic;
    return votes;
}

Label RandomForest::predict(std::span<const double> x) const
{
    return 2 * epidemic_votes(x) > tree_count() ? Label::epidemic : Label::random_failure;
}

nlohmann::json RandomForest::to_json() const
{
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : trees_)
        trees.push_back(node_to_json(t, 0));
    return {{"type", "rf"},
            {"n_tree", config_.n_tree},
            {"features_per_split", config_.features_per_split},
            {"bootstrap", config_.bootstrap},
            {"seed", config_.seed},
            {"feature_count", feature_count_},
            {"trees", trees}};
}

RandomForest RandomForest::from_json(const nlohmann::json& j)
{
    if (j.at("type") != "rf")
        throw ValidationError("not a random forest model");
    RandomForestConfig c;
    c.n_tree = j.at("n_tree").get<int>();
    c.features_per_split = j.at("features_per_split").get<int>();
    c.bootstrap = j.at("bootstrap").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    RandomForest rf(c);
    rf.feature_count_ = j.at("feature_count").get<std::size_t>();
    for (const auto& t : j.at("trees")) {
        Tree tree;
        node_from_json(t, tree, rf.feature_count_);
        rf.trees_.push_back(std::move(tree));
    }
    if (rf.trees_.empty() || static_cast<int>(rf.trees_.size()) != c.n_tree)
        throw ValidationError("random forest tree count does not match n_tree");
    return rf;
}

std::unique_ptr<Classifier> make_classifier(ClassifierKind kind, const RandomForestConfig& rf)
{
    if (kind == ClassifierKind::naive_bayes)
        return std::make_unique<NaiveBayes>();
    return std::make_unique<RandomForest>(rf);
}

std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j)
{
    const auto type = j.at("type").get<std::string>();
    if (type == "nb")
        return std::make_unique<NaiveBayes>(NaiveBayes::from_json(j));
    if (type == "rf")
        return std::make_unique<RandomForest>(RandomForest::from_json(j));
    throw ValidationError("unknown classifier type '" + type + "'");
}

}  // namespace gspi
