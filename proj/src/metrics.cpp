#include "gspi/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gspi/error.hpp"
#include "gspi/stats.hpp"

namespace gspi {

double energy(std::span<const double> spectrum)
{
    double e = 0.0;
    for (double x : spectrum)
        e += std::abs(x);
    return e;
}

int high_band_start(int n, double alpha)
{
    if (!(alpha >= 1.0 / n - 1e-12 && alpha <= 1.0))
        throw ValidationError("alpha must lie in [1/N, 1]");
    return std::max(0, static_cast<int>(std::floor(n * (1.0 - alpha) + 1e-9)));
}

int low_band_end(int n, double gamma)
{
    if (!(gamma >= 1.0 / n - 1e-12 && gamma <= 1.0))
        throw ValidationError("gamma must lie in [1/N, 1]");
    return std::min(n, static_cast<int>(std::ceil(gamma * n - 1e-9)));
}

namespace {

double band_share(std::span<const double> spectrum, int begin, int end)
{
    const double e = energy(spectrum);
    if (!(e > 0.0))
        throw ValidationError("spectrum has zero energy");
    double s = 0.0;
    for (int i = begin; i < end; ++i)
        s += std::abs(spectrum[static_cast<std::size_t>(i)]);
    return s / e;
}

}  // namespace

double hecr(std::span<const double> spectrum, double alpha)
{
    const int n = static_cast<int>(spectrum.size());
    return band_share(spectrum, high_band_start(n, alpha), n);
}

double lecr(std::span<const double> spectrum, double gamma)
{
    const int n = static_cast<int>(spectrum.size());
    return band_share(spectrum, 0, low_band_end(n, gamma));
}

double smoothness(const WeightedGraph& g, std::span<const double> signal, SmoothnessWeighting weighting)
{
    if (static_cast<int>(signal.size()) != g.node_count())
        throw ValidationError("signal length does not match graph");
    double total = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double inner = 0.0;
        for (const auto& nb : g.neighbors(i)) {
            const double d = signal[nb.node] - signal[i];
            inner += (weighting == SmoothnessWeighting::distance ? nb.distance : nb.weight) * d * d;
        }
        total += std::sqrt(inner);
    }
    return total;
}

PredictionInterval fit_interval(std::span<const double> values, double epsilon, std::string metric)
{
    if (values.size() < 100)
        throw ValidationError("prediction interval needs at least 100 training values");
    if (!(epsilon > 50.0 && epsilon < 100.0))
        throw ValidationError("epsilon must lie in (50, 100)");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double tail = (100.0 - epsilon) / 2.0;
    return {std::move(metric), percentile_sorted(sorted, tail), percentile_sorted(sorted, 100.0 - tail), epsilon,
            static_cast<int>(values.size())};
}

Label metric_detect(double value, const PredictionInterval& interval)
{
    return interval.contains(value) ? Label::random_failure : Label::epidemic;
}

Label energy_concentration_detect(Label hecr_verdict, Label lecr_verdict)
{
    return (hecr_verdict == Label::epidemic && lecr_verdict == Label::epidemic) ? Label::epidemic
                                                                                : Label::random_failure;
}

nlohmann::json to_json(const PredictionInterval& p)
{
    return {{"metric", p.metric}, {"cs", p.cs}, {"ce", p.ce}, {"epsilon", p.epsilon}, {"n_train", p.n_train}};
}

PredictionInterval interval_from_json(const nlohmann::json& j)
{
    PredictionInterval p;
    p.metric = j.at("metric").get<std::string>();
    p.cs = j.at("cs").get<double>();
    p.ce = j.at("ce").get<double>();
    p.epsilon = j.at("epsilon").get<double>();
    p.n_train = j.at("n_train").get<int>();
    if (p.cs > p.ce)
        throw ValidationError("interval has cs > ce");
    return p;
}

BoundInputs hecr_bound_inputs(const SpectralBasis& basis, std::span<const double> initial_signal,
                              double noisy_energy, double amplitude, double alpha, const PredictionInterval& interval)
{
    const auto spec = gft(basis, initial_signal);
    BoundInputs in;
    in.amplitude = amplitude;
    in.node_count = basis.size();
    in.alpha = alpha;
    in.cs = interval.cs;
    in.ce = interval.ce;
    in.ci = hecr(spec, alpha);
    in.noisy_energy = noisy_energy;
    for (int j = high_band_start(in.node_count, alpha); j < in.node_count; ++j) {
        in.high_abs_sum += std::abs(spec[j]);
        in.high_signed_sum += spec[j];
        in.max_high_inf_norm = std::max(in.max_high_inf_norm, inf_norm(basis, j));
    }
    return in;
}

double hecr_nf_bound(const BoundInputs& in, IntervalSide side, HighSumSign sign)
{
    if (!(in.amplitude > 0.0) || in.node_count < 1 || !(in.max_high_inf_norm > 0.0))
        throw ValidationError("bound inputs need A > 0, N >= 1 and a nonzero eigenvector norm");
    // normalized (tilde) quantities: everything spectral divided by A
    const double a = in.amplitude;
    const double band = 1.0 + std::floor(in.node_count * in.alpha + 1e-9);
    const double denom = 2.0 * band * in.max_high_inf_norm;
    double numer = 0.0;
    if (side == IntervalSide::below_interval) {
        if (!(in.ci < in.cs))
            throw ValidationError("below-interval bound needs ci < cs");
        numer = in.cs * in.noisy_energy / a - in.high_abs_sum / a;
    } else {
        if (!(in.ci > in.ce))
            throw ValidationError("above-interval bound needs ci > ce");
        if (sign == HighSumSign::negative)
            numer = -in.high_signed_sum / a - in.ce * in.noisy_energy / a;
        else
            numer = in.high_signed_sum / a - in.ce * in.noisy_energy / a;
    }
    return std::max(0.0, numer / denom);
}

double smoothness_nf_bound(double ci, double cs, double ce, double amplitude, int max_degree, double max_distance)
{
    if (!(amplitude > 0.0) || max_degree < 1 || !(max_distance > 0.0))
        throw ValidationError("smoothness bound needs A, D, Delta > 0");
    const double d = max_degree;
    const double denom = 2.0 * amplitude * std::pow(d, 1.5) * std::sqrt(max_distance)
        + 2.0 * amplitude * std::sqrt(max_distance * d);
    if (ci > ce)
        return std::max(0.0, (ci - ce) / denom);
    if (ci < cs)
        return std::max(0.0, (cs - ci) / denom);
    return 0.0;
}

}  // namespace gspi
