#ifndef MONGE_EXPERIMENTS_HPP
#define MONGE_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monge/convmap.hpp"
#include "monge/result.hpp"

namespace monge {

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::vector<long> dims = {2, 10, 50};
  std::vector<long> n_grid = {100, 316, 1000, 3162, 10000};
  std::vector<long> n_l_grid = {100, 316, 1000, 3162, 10000};
  int trials = 10;
  long n_eval = 100000;
  double alpha = 0.0;
  /// Worker threads used across trials; results do not depend on it.
  unsigned threads = 1;
  /// Domain adaptation: replace the estimated map by the true one.
  bool use_true_map = false;
  /// Convolutional experiment.
  Shape image_shape{28, 28};
  int blur_length = 5;
  double blur_angle_deg = 45.0;

  /// Throws InvalidArgument unless counts are >= 1 and grids are non-empty
  /// and strictly increasing.
  void validate() const;
};

/// Mapping error d(T, T_hat) versus n for random Gaussian pairs. Per-trial
/// rows carry metric "divergence"; aggregates over trials are emitted as
/// "divergence_mean", "divergence_median", "divergence_p10", "divergence_p90".
std::vector<ResultRow> run_mapping_convergence(const ExperimentConfig& cfg);

/// Domain adaptation error of lda o T_hat^{-1} on target samples, swept over
/// n (n_l at its maximum; metric "target_error_vs_n") and over n_l (n at its
/// maximum; metric "target_error_vs_nl"), plus baselines "bayes_error",
/// "no_adaptation_error" and "true_map_error".
std::vector<ResultRow> run_da_convergence(const ExperimentConfig& cfg);

/// Linear versus convolutional map estimation between a stationary image
/// law (or the supplied images) and its motion-blurred copy. Metrics:
/// "conv_divergence", "linear_divergence", "filter_rms_error",
/// "filter_correlation", "kernel_correlation".
std::vector<ResultRow> run_conv_experiment(const ExperimentConfig& cfg,
                                           const std::optional<SignalStack>& images = std::nullopt);

/// OLS slope of log(err) against log(n). Throws NonPositive for any
/// non-positive coordinate.
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// Smooth, even power spectrum used for synthetic images:
/// 1 / (1 + |f|^2 / 0.01) with f the signed frequency in cycles per pixel.
Vector default_image_spectrum(const Shape& shape);

/// Linear-interpolated percentile, q in [0, 1].
double percentile(std::vector<double> values, double q);

/// (n, value) pairs of one metric at dimension d, sorted by n. `trial` rows
/// are skipped; use the aggregate metric names.
std::vector<std::pair<double, double>> metric_series(const std::vector<ResultRow>& rows,
                                                     const std::string& experiment, long d,
                                                     const std::string& metric);

/// Per-trial values of a metric at one (d, n).
std::vector<double> trial_values(const std::vector<ResultRow>& rows, const std::string& experiment,
                                 long d, long n, const std::string& metric);

}  // namespace monge

#endif  // MONGE_EXPERIMENTS_HPP
