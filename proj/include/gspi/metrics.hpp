#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gspi/dynamics.hpp"
#include "gspi/graph.hpp"
#include "gspi/spectral.hpp"

namespace gspi {

/// L1 norm of a GFT spectrum.
double energy(std::span<const double> spectrum);

/// Share of spectral energy in indices floor(N(1-alpha))..N-1.
/// alpha in [1/N, 1]; throws on zero energy.
double hecr(std::span<const double> spectrum, double alpha);

/// Share of spectral energy in indices 0..ceil(gamma N)-1.
double lecr(std::span<const double> spectrum, double gamma);

/// First index of the HECR high band.
int high_band_start(int n, double alpha);
/// One past the last index of the LECR low band.
int low_band_end(int n, double gamma);

enum class SmoothnessWeighting {
    distance,  ///< a_ij, the default
    weight,    ///< w(i,j) = beta / a_ij
};

/// sum_i sqrt( sum_{j ~ i} c_ij (S(j) - S(i))^2 ), c_ij per `weighting`.
double smoothness(const WeightedGraph& g, std::span<const double> signal,
                  SmoothnessWeighting weighting = SmoothnessWeighting::distance);

/// Two-sided equal-tail epsilon% interval of a metric under random failures.
struct PredictionInterval {
    std::string metric;
    double cs = 0.0;
    double ce = 0.0;
    double epsilon = 95.0;
    int n_train = 0;

    bool contains(double value) const { return value >= cs && value <= ce; }
};

/// cs / ce are the (100-eps)/2 and 100-(100-eps)/2 percentiles. Needs >= 100 values.
PredictionInterval fit_interval(std::span<const double> values, double epsilon, std::string metric = "");

/// Epidemic iff the value falls outside [cs, ce] (boundaries count as inside).
Label metric_detect(double value, const PredictionInterval& interval);

/// Epidemic only when both the HECR and the LECR detectors say so.
Label energy_concentration_detect(Label hecr_verdict, Label lecr_verdict);

nlohmann::json to_json(const PredictionInterval& p);
PredictionInterval interval_from_json(const nlohmann::json& j);

/// Inputs of the noise-robustness bounds. Spectral sums refer to the
/// noiseless ("initial") signal except `noisy_energy`.
struct BoundInputs {
    double amplitude = 1000.0;
    int node_count = 0;
    double alpha = 0.1;
    double cs = 0.0;
    double ce = 0.0;
    double ci = 0.0;                   ///< metric of the noiseless signal
    double high_abs_sum = 0.0;         ///< sum over the high band of |S_hat_i|
    double high_signed_sum = 0.0;      ///< sum over the high band of S_hat_i
    double noisy_energy = 0.0;         ///< Eng of the noisy spectrum
    double max_high_inf_norm = 0.0;    ///< max over the high band of ||u_j||_inf
    int max_degree = 1;                ///< D
    double max_distance = 1.0;         ///< Delta
};

/// Collects BoundInputs for an HECR detector from the noiseless signal and
/// the noisy spectrum energy.
BoundInputs hecr_bound_inputs(const SpectralBasis& basis, std::span<const double> initial_signal,
                              double noisy_energy, double amplitude, double alpha, const PredictionInterval& interval);

enum class IntervalSide { below_interval, above_interval };
enum class HighSumSign { nonnegative, negative };

/// Strict upper bound on the number of faulty reports n_f that keeps an HECR
/// detection correct. below_interval needs ci < cs; above_interval needs
/// ci > ce and the sign of the high-band sum of the noisy spectrum.
double hecr_nf_bound(const BoundInputs& in, IntervalSide side, HighSumSign sign = HighSumSign::nonnegative);

/// Strict upper bound on n_f for the smoothness detector; 0 when ci lies
/// inside [cs, ce].
double smoothness_nf_bound(double ci, double cs, double ce, double amplitude, int max_degree, double max_distance);

}  // namespace gspi
