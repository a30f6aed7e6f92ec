#pragma once

#include <span>
#include <vector>

namespace gspi {

/// Percentile with linear interpolation between closest ranks
/// (rank h = (n-1) p/100). The one percentile rule used across the library.
double percentile(std::span<const double> values, double pct);

/// Same, on data already sorted ascending.
double percentile_sorted(std::span<const double> sorted, double pct);

double mean(std::span<const double> values);

/// Unbiased (n-1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> values);

double sample_stddev(std::span<const double> values);

}  // namespace gspi
