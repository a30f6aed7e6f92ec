#include "gspi/stats.hpp"

#include <algorithm>
#include <cmath>

#include "gspi/error.hpp"

namespace gspi {

double percentile_sorted(std::span<const double> sorted, double pct)
{
    if (sorted.empty())
        throw ValidationError("percentile of empty data");
    if (!(pct >= 0.0 && pct <= 100.0))
        throw ValidationError("percentile must lie in [0, 100]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * pct / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percentile(std::span<const double> values, double pct)
{
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    return percentile_sorted(v, pct);
}

double mean(std::span<const double> values)
{
    if (values.empty())
        return 0.0;
    double s = 0.0;
    for (double x : values)
        s += x;
    return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values)
{
    if (values.size() < 2)
        return 0.0;
    const double m = mean(values);
    double s = 0.0;
    for (double x : values)
        s += (x - m) * (x - m);
    return s / static_cast<double>(values.size() - 1);
}

double sample_stddev(std::span<const double> values) { return std::sqrt(sample_variance(values)); }

}  // namespace gspi
