#include "gspi/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gspi/error.hpp"

namespace gspi {

namespace {

void require_both_classes(const LabeledDataset& data)
{
    data.validate();
    if (data.count(Label::epidemic) == 0 || data.count(Label::random_failure) == 0)
        throw ValidationError("training data must contain both classes");
    if (data.feature_count() == 0)
        throw ValidationError("training data has no features");
}

}  // namespace

void NaiveBayes::fit(const LabeledDataset& data)
{
    require_both_classes(data);
    const std::size_t f = data.feature_count();
    const double n = static_cast<double>(data.size());

    // floor relative to the largest pooled feature variance
    double max_var = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
        double m = 0.0, m2 = 0.0;
        for (const auto& x : data.features)
            m += x[j];
        m /= n;
        for (const auto& x : data.features)
            m2 += (x[j] - m) * (x[j] - m);
        max_var = std::max(max_var, m2 / n);
    }
    const double floor = max_var > 0.0 ? 1e-9 * max_var : 1e-12;

    for (int c = 0; c < 2; ++c) {
        const auto label = static_cast<Label>(c);
        const double nc = static_cast<double>(data.count(label));
        log_prior_[c] = std::log(nc / n);
        means_[c].assign(f, 0.0);
        variances_[c].assign(f, 0.0);
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.labels[i] == label)
                for (std::size_t j = 0; j < f; ++j)
                    means_[c][j] += data.features[i][j];
        for (auto& m : means_[c])
            m /= nc;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.labels[i] == label)
                for (std::size_t j = 0; j < f; ++j) {
                    const double d = data.features[i][j] - means_[c][j];
                    variances_[c][j] += d * d;
                }
        for (auto& v : variances_[c])
            v = v / nc + floor;
    }
}

std::array<double, 2> NaiveBayes::log_joint(std::span<const double> x) const
{
    if (means_[0].empty())
        throw ValidationError("naive Bayes model is not trained");
    if (x.size() != means_[0].size())
        throw ValidationError("feature length " + std::to_string(x.size()) + " does not match model ("
                              + std::to_string(means_[0].size()) + ")");
    std::array<double, 2> out{};
    for (int c = 0; c < 2; ++c) {
        double s = log_prior_[c];
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double v = variances_[c][j];
            const double d = x[j] - means_[c][j];
            s += -0.5 * std::log(2.0 * std::numbers::pi * v) - d * d / (2.0 * v);
        }
        out[c] = s;
    }
    return out;
}

Label NaiveBayes::predict(std::span<const double> x) const
{
    const auto lj = log_joint(x);
    return lj[1] > lj[0] ? Label::epidemic : Label::random_failure;
}

nlohmann::json NaiveBayes::to_json() const
{
    nlohmann::json classes = nlohmann::json::object();
    for (int c = 0; c < 2; ++c)
        classes[to_string(static_cast<Label>(c))] = {
            {"log_prior", log_prior_[c]}, {"means", means_[c]}, {"variances", variances_[c]}};
    return {{"type", "nb"}, {"classes", classes}};
}

NaiveBayes NaiveBayes::from_json(const nlohmann::json& j)
{
    if (j.at("type") != "nb")
        throw ValidationError("not a naive Bayes model");
    NaiveBayes nb;
    for (int c = 0; c < 2; ++c) {
        const auto& k = j.at("classes").at(to_string(static_cast<Label>(c)));
        nb.log_prior_[c] = k.at("log_prior").get<double>();
        nb.means_[c] = k.at("means").get<std::vector<double>>();
        nb.variances_[c] = k.at("variances").get<std::vector<double>>();
        if (nb.means_[c].size() != nb.variances_[c].size())
            throw ValidationError("naive Bayes model has mismatched means and variances");
        for (double v : nb.variances_[c])
            if (!(v > 0.0))
                throw ValidationError("naive Bayes variances must be positive");
    }
    if (nb.means_[0].size() != nb.means_[1].size())
        throw ValidationError("naive Bayes classes have different feature counts");
    return nb;
}

}  // namespace gspi
