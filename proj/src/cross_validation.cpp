#include "gspi/learning.hpp"


#include "gspi/error.hpp"
#include "gspi/rng.hpp"
#include "gspi/stats.hpp"

namespace gspi {

double aidp(double p_h0_given_h0, double p_h1_given_h1, double p0, double p1)
{
    return p_h0_given_h0 * p0 + p_h1_given_h1 * p1;
}

std::vector<int> stratified_folds(std::span<const Label> labels, int k, std::uint64_t seed)
{
    if (k < 2)
        throw ValidationError("k must be >= 2");
    std::vector<int> fold(labels.size(), -1);
    for (int c = 0; c < 2; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == static_cast<Label>(c))
                members.push_back(i);
        if (members.size() < static_cast<std::size_t>(k))
            throw ValidationError("class " + to_string(static_cast<Label>(c)) + " has fewer than " + std::to_string(k)
                                  + " samples; cannot stratify");
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(c)}));
        for (std::size_t i = members.size(); i > 1; --i)
            std::swap(members[i - 1], members[rng.below(i)]);
        for (std::size_t i = 0; i < members.size(); ++i)
            fold[members[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return fold;
}

CrossValidationReport kfold_aidp(const LabeledDataset& data, int k, const ClassifierFactory& factory,
                                 std::uint64_t seed)
{
    data.validate();
    const auto fold = stratified_folds(data.labels, k, seed);
    CrossValidationReport report;
    report.folds.resize(static_cast<std::size_t>(k));
    // folds run one after another; classifiers parallelize internally
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < data.size(); ++i)
            (fold[i] == f ? test : train).push_back(i);
        auto clf = factory(f);
        clf->fit(data.subset(train));
        auto& r = report.folds[static_cast<std::size_t>(f)];
        for (auto i : test) {
            const bool truth = data.labels[i] == Label::epidemic;
            const bool said = clf->predict(data.features[i]) == Label::epidemic;
            if (truth)
                (said ? r.tp : r.fn)++;
            else
                (said ? r.fp : r.tn)++;
        }
    }
    std::vector<double> acc;
    for (const auto& r : report.folds)
        acc.push_back(r.accuracy());
    report.aidp = mean(acc);
    report.std = sample_stddev(acc);
    return report;
}

}  // namespace gspi
