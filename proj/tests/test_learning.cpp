#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gspi/learning.hpp"
#include "util.hpp"

using namespace gspi;

namespace {

// two Gaussian blobs in `dims` dimensions, centers `gap` apart on every axis
LabeledDataset blobs(Rng& rng, int per_class, int dims, double gap)
{
    LabeledDataset d;
    auto normal = [&rng] {
        const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
        return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
    };
    for (int i = 0; i < per_class; ++i)
        for (int c = 0; c < 2; ++c) {
            std::vector<double> x(static_cast<std::size_t>(dims));
            for (auto& v : x)
                v = c * gap + normal();
            d.add(std::move(x), static_cast<Label>(c));
        }
    return d;
}

double accuracy(const Classifier& clf, const LabeledDataset& d)
{
    int ok = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        ok += clf.predict(d.features[i]) == d.labels[i];
    return static_cast<double>(ok) / static_cast<double>(d.size());
}

}  // namespace

TEST_SUITE("learning") {

TEST_CASE("fast features")
{
    const auto f = fast_features(std::vector<double>{1, 2, 3, 4});
    REQUIRE(f.size() == 3);
    CHECK(f[0] == doctest::Approx(2.5));
    CHECK(f[1] == doctest::Approx(5.0 / 3));
    CHECK(f[2] == doctest::Approx(1.5));

    const auto c = fast_features(std::vector<double>(9, -2.0));
    CHECK(c == std::vector<double>{-2.0, 0.0, 0.0});

    std::vector<double> v{5, -1, 7, 3, 3, 0, 11};
    const auto a = fast_features(v);
    std::reverse(v.begin(), v.end());
    std::swap(v[1], v[4]);
    const auto b = fast_features(v);
    for (int i = 0; i < 3; ++i)
        CHECK(a[i] == doctest::Approx(b[i]));
    CHECK_THROWS_AS(fast_features(std::vector<double>{1, 2, 3}), ValidationError);
}

TEST_CASE("feature extractor")
{
    Rng rng(12);
    const auto g = testutil::random_connected(rng, 30, 0.1);
    const auto basis = eigendecompose(g);
    const FeatureExtractor fx(g, &basis);
    std::vector<double> s(30);
    for (auto& x : s)
        x = rng.bernoulli(0.3) ? 1000.0 : -1000.0;

    for (auto src : {FeatureSource::gft, FeatureSource::dbgw, FeatureSource::sgw}) {
        const auto primary = fx.primary(s, src);
        CHECK(primary.size() == 30);
        const auto direct = fx.extract(s, src, FeatureMode::direct);
        CHECK(direct.values == primary);
        CHECK(direct.source == src);
        const auto fast = fx.extract(s, src, FeatureMode::fast);
        CHECK(fast.values == fast_features(primary));
        const std::vector<int> slice{29, 0, 5};
        CHECK(fx.extract(s, src, FeatureMode::direct, slice).values ==
              std::vector<double>{primary[29], primary[0], primary[5]});
    }
    CHECK(fx.primary(s, FeatureSource::gft) == gft(basis, s));
    CHECK(fx.primary(s, FeatureSource::dbgw) == dbgw_all_coeffs(g, s, DbgwConfig{}));

    const FeatureExtractor no_basis(g, nullptr);
    CHECK_NOTHROW(no_basis.primary(s, FeatureSource::dbgw));
    CHECK_THROWS_AS(no_basis.primary(s, FeatureSource::gft), ValidationError);
    CHECK_THROWS_AS(fx.primary(std::vector<double>(4, 1.0), FeatureSource::dbgw), ValidationError);

    CHECK(feature_source_from_string("dbgw") == FeatureSource::dbgw);
    CHECK(to_string(FeatureMode::fast) == "fast");
    CHECK_THROWS_AS(feature_source_from_string("wavelet"), ValidationError);
}

TEST_CASE("labeled dataset")
{
    LabeledDataset d;
    d.add({1, 2}, Label::epidemic);
    d.add({3, 4}, Label::random_failure);
    d.add({5, 6}, Label::epidemic);
    CHECK(d.count(Label::epidemic) == 2);
    CHECK_NOTHROW(d.validate());
    const std::vector<std::size_t> idx{2, 1};
    const auto s = d.subset(idx);
    CHECK(s.features[0] == std::vector<double>{5, 6});
    CHECK(s.labels[1] == Label::random_failure);
    d.features.push_back({1});
    d.labels.push_back(Label::epidemic);
    CHECK_THROWS_AS(d.validate(), ValidationError);
}

TEST_CASE("naive Bayes")
{
    SUBCASE("separable 1-D data")
    {
        LabeledDataset d;
        d.add({0.0}, Label::random_failure);
        d.add({0.1}, Label::random_failure);
        d.add({10.0}, Label::epidemic);
        d.add({10.1}, Label::epidemic);
        NaiveBayes nb;
        nb.fit(d);
        CHECK(nb.predict(std::vector<double>{0.05}) == Label::random_failure);
        CHECK(nb.predict(std::vector<double>{9.0}) == Label::epidemic);
    }
    SUBCASE("one sample per class relies on the variance floor")
    {
        LabeledDataset d;
        d.add({1.0, 5.0}, Label::random_failure);
        d.add({2.0, 5.0}, Label::epidemic);
        NaiveBayes nb;
        nb.fit(d);
        CHECK(nb.predict(std::vector<double>{1.1, 5.0}) == Label::random_failure);
        CHECK(nb.predict(std::vector<double>{1.9, 5.0}) == Label::epidemic);
    }
    SUBCASE("posterior matches a hand-rolled oracle")
    {
        Rng rng(3);
        const auto d = blobs(rng, 40, 3, 1.0);
        NaiveBayes nb;
        nb.fit(d);
        // oracle: population moments, floor 1e-9 times the largest pooled variance
        double max_var = 0.0;
        for (int j = 0; j < 3; ++j) {
            double m = 0, v = 0;
            for (const auto& x : d.features)
                m += x[j] / 80.0;
            for (const auto& x : d.features)
                v += (x[j] - m) * (x[j] - m) / 80.0;
            max_var = std::max(max_var, v);
        }
        const std::vector<double> q{0.3, 0.7, -0.2};
        for (int c = 0; c < 2; ++c) {
            double lj = std::log(0.5);
            for (int j = 0; j < 3; ++j) {
                double m = 0, v = 0;
                for (std::size_t i = 0; i < d.size(); ++i)
                    if (static_cast<int>(d.labels[i]) == c)
                        m += d.features[i][j] / 40.0;
                for (std::size_t i = 0; i < d.size(); ++i)
                    if (static_cast<int>(d.labels[i]) == c)
                        v += (d.features[i][j] - m) * (d.features[i][j] - m) / 40.0;
                v += 1e-9 * max_var;
                lj += -0.5 * std::log(2 * std::numbers::pi * v) - (q[j] - m) * (q[j] - m) / (2 * v);
            }
            CHECK(nb.log_joint(q)[c] == doctest::Approx(lj).epsilon(1e-12));
        }
    }
    SUBCASE("ties go to random failure")
    {
        LabeledDataset d;
        d.add({-1.0}, Label::random_failure);
        d.add({1.0}, Label::random_failure);
        d.add({-1.0}, Label::epidemic);
        d.add({1.0}, Label::epidemic);
        NaiveBayes nb;
        nb.fit(d);
        CHECK(nb.predict(std::vector<double>{0.3}) == Label::random_failure);
    }
    SUBCASE("errors")
    {
        NaiveBayes nb;
        CHECK_THROWS_AS(nb.predict(std::vector<double>{1.0}), ValidationError);
        LabeledDataset one;
        one.add({1.0}, Label::epidemic);
        one.add({2.0}, Label::epidemic);
        CHECK_THROWS_AS(nb.fit(one), ValidationError);
        one.add({3.0}, Label::random_failure);
        nb.fit(one);
        CHECK_THROWS_AS(nb.predict(std::vector<double>{1.0, 2.0}), ValidationError);
    }
}

TEST_CASE("random forest")
{
    SUBCASE("separable data is fit exactly")
    {
        LabeledDataset d;
        Rng rng(4);
        for (int i = 0; i < 60; ++i) {
            const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
            d.add({x, y}, x + y > 0.05 ? Label::epidemic : Label::random_failure);
        }
        RandomForest rf({50, 0, true, 9});
        rf.fit(d);
        CHECK(rf.tree_count() == 50);
        CHECK(accuracy(rf, d) == 1.0);
    }
    SUBCASE("identical features fall back to the majority")
    {
        LabeledDataset d;
        for (int i = 0; i < 7; ++i)
            d.add({1.0, 1.0}, Label::epidemic);
        for (int i = 0; i < 3; ++i)
            d.add({1.0, 1.0}, Label::random_failure);
        RandomForest rf({15, 0, false, 1});
        rf.fit(d);
        CHECK(rf.predict(std::vector<double>{1.0, 1.0}) == Label::epidemic);
        CHECK(rf.epidemic_votes(std::vector<double>{3.0, -3.0}) == 15);
    }
    SUBCASE("competitive with naive Bayes on a Gaussian mixture")
    {
        Rng rng(5);
        const auto train = blobs(rng, 150, 4, 1.0);
        const auto test = blobs(rng, 500, 4, 1.0);
        RandomForest rf({100, 0, true, 3});
        rf.fit(train);
        NaiveBayes nb;
        nb.fit(train);
        CHECK(accuracy(rf, test) >= accuracy(nb, test) - 0.05);
        CHECK(accuracy(rf, test) > 0.75);
    }
    SUBCASE("deterministic for a fixed seed")
    {
        Rng rng(6);
        const auto d = blobs(rng, 50, 3, 0.8);
        RandomForest a({30, 2, true, 77}), b({30, 2, true, 77}), c({30, 2, true, 78});
        a.fit(d);
        b.fit(d);
        c.fit(d);
        CHECK(a.to_json() == b.to_json());
        CHECK(a.to_json() != c.to_json());
    }
    SUBCASE("errors")
    {
        Rng rng(6);
        const auto d = blobs(rng, 10, 3, 1.0);
        RandomForest bad({10, 4, true, 1});
        CHECK_THROWS_AS(bad.fit(d), ValidationError);
        RandomForest zero({0, 0, true, 1});
        CHECK_THROWS_AS(zero.fit(d), ValidationError);
        RandomForest untrained;
        CHECK_THROWS_AS(untrained.predict(std::vector<double>{1, 2, 3}), ValidationError);
    }
}

TEST_CASE("duplicating the training set changes nothing")
{
    Rng rng(7);
    const auto d = blobs(rng, 40, 3, 0.7);
    auto dup = d;
    for (std::size_t i = 0; i < d.size(); ++i)
        dup.add(d.features[i], d.labels[i]);
    const auto queries = blobs(rng, 100, 3, 0.7);

    NaiveBayes n1, n2;
    n1.fit(d);
    n2.fit(dup);
    RandomForest r1({25, 0, false, 5}), r2({25, 0, false, 5});
    r1.fit(d);
    r2.fit(dup);
    for (const auto& q : queries.features) {
        CHECK(n1.predict(q) == n2.predict(q));
        CHECK(r1.predict(q) == r2.predict(q));
    }
}

TEST_CASE("model JSON round trips")
{
    Rng rng(8);
    const auto d = blobs(rng, 30, 3, 1.0);
    const auto queries = blobs(rng, 50, 3, 1.0);

    NaiveBayes nb;
    nb.fit(d);
    const auto nb_back = NaiveBayes::from_json(nb.to_json());
    CHECK(nb.to_json().at("type") == "nb");

    RandomForest rf({20, 0, true, 2});
    rf.fit(d);
    const auto rf_back = RandomForest::from_json(rf.to_json());
    CHECK(rf_back.to_json() == rf.to_json());

    const auto generic = classifier_from_json(rf.to_json());
    CHECK(generic->name() == "rf");
    for (const auto& q : queries.features) {
        CHECK(nb_back.predict(q) == nb.predict(q));
        CHECK(nb_back.log_joint(q) == nb.log_joint(q));
        CHECK(rf_back.epidemic_votes(q) == rf.epidemic_votes(q));
        CHECK(generic->predict(q) == rf.predict(q));
    }
    CHECK_THROWS_AS(classifier_from_json(nlohmann::json{{"type", "svm"}}), ValidationError);
}

TEST_CASE("AIDP and cross-validation")
{
    CHECK(aidp(0.8, 0.9) == doctest::Approx(0.85));
    CHECK(aidp(1.0, 1.0) == 1.0);
    CHECK(aidp(1.0, 0.0) == 0.5);

    Rng rng(10);
    const auto d = blobs(rng, 50, 2, 6.0);

    const auto folds = stratified_folds(d.labels, 10, 3);
    for (int f = 0; f < 10; ++f) {
        int e = 0, r = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (folds[i] == f)
                (d.labels[i] == Label::epidemic ? e : r)++;
        CHECK(e == 5);
        CHECK(r == 5);
    }
    CHECK(stratified_folds(d.labels, 10, 3) == folds);

    const auto good = kfold_aidp(d, 10, [](int) { return std::make_unique<NaiveBayes>(); }, 3);
    CHECK(good.folds.size() == 10);
    CHECK(good.aidp > 0.95);

    // a classifier that always answers random failure
    struct Constant final : Classifier {
        void fit(const LabeledDataset&) override {}
        Label predict(std::span<const double>) const override { return Label::random_failure; }
        nlohmann::json to_json() const override { return {}; }
        std::string name() const override { return "constant"; }
    };
    const auto flat = kfold_aidp(d, 5, [](int) { return std::make_unique<Constant>(); }, 3);
    CHECK(flat.aidp == doctest::Approx(0.5));
    CHECK(flat.std == doctest::Approx(0.0));

    CHECK_THROWS_AS(stratified_folds(d.labels, 51, 1), ValidationError);
    CHECK_THROWS_AS(stratified_folds(d.labels, 1, 1), ValidationError);
}

}  // TEST_SUITE
