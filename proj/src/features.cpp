#include "gspi/learning.hpp"

#include <algorithm>

#include "gspi/error.hpp"
#include "gspi/stats.hpp"

namespace gspi {

std::string to_string(FeatureSource s)
{
    switch (s) {
    case FeatureSource::gft: return "gft";
    case FeatureSource::dbgw: return "dbgw";
    case FeatureSource::sgw: return "sgw";
    }
    return "?";
}

std::string to_string(FeatureMode m) { return m == FeatureMode::direct ? "direct" : "fast"; }

FeatureSource feature_source_from_string(std::string_view s)
{
    if (s == "gft")
        return FeatureSource::gft;
    if (s == "dbgw")
        return FeatureSource::dbgw;
    if (s == "sgw")
        return FeatureSource::sgw;
    throw ValidationError("unknown feature source '" + std::string(s) + "'");
}

FeatureMode feature_mode_from_string(std::string_view s)
{
    if (s == "direct")
        return FeatureMode::direct;
    if (s == "fast")
        return FeatureMode::fast;
    throw ValidationError("unknown feature mode '" + std::string(s) + "'");
}

std::vector<double> fast_features(std::span<const double> primary)
{
    if (primary.size() < 4)
        throw ValidationError("fast features need at least 4 values");
    std::vector<double> sorted(primary.begin(), primary.end());
    std::sort(sorted.begin(), sorted.end());
    return {mean(primary), sample_variance(primary), percentile_sorted(sorted, 75.0) - percentile_sorted(sorted, 25.0)};
}

FeatureExtractor::FeatureExtractor(const WeightedGraph& g, const SpectralBasis* basis, DbgwConfig dbgw, SgwKernel sgw)
    : graph_(&g), basis_(basis), dbgw_config_(std::move(dbgw)), sgw_kernel_(std::move(sgw))
{
    if (basis_ && basis_->size() != g.node_count())
        throw ValidationError("spectral basis does not match graph");
}

std::vector<double> FeatureExtractor::primary(std::span<const double> signal, FeatureSource source) const
{
    if (static_cast<int>(signal.size()) != graph_->node_count())
        throw ValidationError("signal length does not match graph");
    switch (source) {
    case FeatureSource::gft:
        if (!basis_)
            throw ValidationError("GFT features need a spectral basis");
        return gft(*basis_, signal);
    case FeatureSource::sgw:
        if (!basis_)
            throw ValidationError("SGW features need a spectral basis");
        if (!sgw_)
            sgw_ = std::make_unique<SgwTransform>(*basis_, sgw_kernel_);
        return sgw_->apply(signal);
    case FeatureSource::dbgw:
        if (!dbgw_)
            dbgw_ = std::make_unique<DbgwTransform>(*graph_, dbgw_config_);
        return dbgw_->apply(signal);
    }
    return {};
}

FeatureVector FeatureExtractor::extract(std::span<const double> signal, FeatureSource source, FeatureMode mode,
                                        std::span<const int> slice) const
{
    FeatureVector fv;
    fv.source = source;
    fv.mode = mode;
    auto p = primary(signal, source);
    if (mode == FeatureMode::fast)
        fv.values = fast_features(p);
    else if (!slice.empty())
        fv.values = spectrum_slice(p, slice);
    else
        fv.values = std::move(p);
    return fv;
}

FeatureVector extract_features(const WeightedGraph& g, const SpectralBasis* basis, std::span<const double> signal,
                               FeatureSource source, FeatureMode mode, const DbgwConfig& dbgw, const SgwKernel& sgw)
{
    return FeatureExtractor(g, basis, dbgw, sgw).extract(signal, source, mode);
}

void LabeledDataset::add(std::vector<double> x, Label y)
{
    features.push_back(std::move(x));
    labels.push_back(y);
}

void LabeledDataset::validate() const
{
    if (features.size() != labels.size())
        throw ValidationError("feature and label counts differ");
    for (const auto& x : features)
        if (x.size() != feature_count())
            throw ValidationError("inconsistent feature vector lengths");
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const
{
    LabeledDataset out;
    for (auto i : indices)
        out.add(features.at(i), labels.at(i));
    return out;
}

std::size_t LabeledDataset::count(Label y) const { return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), y)); }

}  // namespace gspi
