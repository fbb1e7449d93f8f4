#include "monge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

#include "monge/classify.hpp"
#include "monge/error.hpp"
#include "monge/mapping.hpp"
#include "monge/metrics.hpp"
#include "monge/sampler.hpp"

namespace monge {
namespace {

constexpr double kSpectrumBandwidthSq = 0.01;

void check_grid(const std::vector<long>& grid, const char* name) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, std::string(name) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw Error(ErrorCode::InvalidArgument, std::string(name) + " has a count < 1");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, std::string(name) + " is not strictly increasing");
    }
  }
}

std::uint64_t stream_index(long d, int trial) {
  return (static_cast<std::uint64_t>(d) << 32) | static_cast<std::uint64_t>(trial);
}

// Runs body(job) for job in [0, jobs) on up to `threads` workers. Output is
// stored per job, so scheduling never affects the result. The first failing
// job (lowest index) is rethrown.
template <class Body>
std::vector<ResultRow> run_jobs(int jobs, unsigned threads, Body body) {
  std::vector<std::vector<ResultRow>> out(static_cast<std::size_t>(jobs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  auto work = [&](int job) {
    try {
      out[static_cast<std::size_t>(job)] = body(job);
    } catch (...) {
      errors[static_cast<std::size_t>(job)] = std::current_exception();
    }
  };
  const unsigned workers = std::max(1u, std::min(threads, static_cast<unsigned>(jobs)));
  if (workers == 1) {
    for (int job = 0; job < jobs; ++job) work(job);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int job = static_cast<int>(w); job < jobs; job += static_cast<int>(workers)) work(job);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<ResultRow> rows;
  for (auto& part : out) rows.insert(rows.end(), part.begin(), part.end());
  return rows;
}

template <class Fn>
auto with_context(const std::string& context, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), context + ": " + e.what());
  }
}

// Appends mean / median / p10 / p90 over trials for every per-trial metric,
// then sorts into emission order.
std::vector<ResultRow> finalize(std::vector<ResultRow> rows) {
  using Key = std::tuple<std::string, long, long, std::optional<long>, std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const ResultRow& r : rows) {
    if (!std::isfinite(r.value)) {
      throw Error(ErrorCode::NonFinite, r.experiment + " produced a non-finite " + r.metric);
    }
    if (r.trial) groups[Key{r.experiment, r.d, r.n, r.n_l, r.metric}].push_back(r.value);
  }
  for (const auto& [key, values] : groups) {
    const auto& [experiment, d, n, n_l, metric] = key;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    const std::pair<const char*, double> stats[] = {{"_mean", mean},
                                                    {"_median", percentile(values, 0.5)},
                                                    {"_p10", percentile(values, 0.1)},
                                                    {"_p90", percentile(values, 0.9)}};
    for (const auto& [suffix, value] : stats) {
      rows.push_back(ResultRow{experiment, d, n, n_l, std::nullopt, metric + suffix, value});
    }
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

double correlation(const Vector& a, const Vector& b) {
  const double denom = a.norm() * b.norm();
  return denom > 0.0 ? a.dot(b) / denom : 0.0;
}

// Places the kernel centre at grid index (rows/2, cols/2), matching
// spatial_filter's display convention.
Vector centered_kernel(const Matrix& kernel, const Shape& shape) {
  Vector out = Vector::Zero(shape.size());
  const Index cr = kernel.rows() / 2;
  const Index cc = kernel.cols() / 2;
  for (Index a = 0; a < kernel.rows(); ++a) {
    for (Index b = 0; b < kernel.cols(); ++b) {
      const Index r = ((shape.rows / 2 + a - cr) % shape.rows + shape.rows) % shape.rows;
      const Index c = ((shape.cols / 2 + b - cc) % shape.cols + shape.cols) % shape.cols;
      out(r * shape.cols + c) += kernel(a, b);
    }
  }
  return out;
}

// Draws `count` distinct indices from [0, pool) by a partial Fisher-Yates
// shuffle.
std::vector<Index> draw_indices(Rng& rng, Index pool, Index count) {
  std::vector<Index> idx(static_cast<std::size_t>(pool));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    const Index span = pool - i;
    const Index j = i + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(span));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(count));
  return idx;
}

Matrix gather_rows(const Matrix& data, const std::vector<Index>& idx, std::size_t begin,
                   std::size_t count) {
  Matrix out(static_cast<Index>(count), data.cols());
  for (std::size_t i = 0; i < count; ++i) out.row(static_cast<Index>(i)) = data.row(idx[begin + i]);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dims.empty()) throw Error(ErrorCode::InvalidArgument, "dims is empty");
  for (long d : dims) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimensions must be >= 1");
  }
  check_grid(n_grid, "n_grid");
  check_grid(n_l_grid, "n_l_grid");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (n_eval < 1) throw Error(ErrorCode::InvalidArgument, "n_eval must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1]");
  }
  if (image_shape.rows < 1 || image_shape.cols < 1) {
    throw Error(ErrorCode::InvalidArgument, "image shape must be positive");
  }
  if (blur_length < 1) throw Error(ErrorCode::InvalidArgument, "blur length must be >= 1");
}

std::vector<ResultRow> run_mapping_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  const Rng base(cfg.seed);
  const int per_dim = cfg.trials;
  const int jobs = static_cast<int>(cfg.dims.size()) * per_dim;
  auto rows = run_jobs(jobs, cfg.threads, [&](int job) {
    const long d = cfg.dims[static_cast<std::size_t>(job / per_dim)];
    const int trial = job % per_dim;
    Rng rng = base.substream(stream_index(d, trial));
    const std::string context = "mapping d=" + std::to_string(d) + " trial=" + std::to_string(trial);
    return with_context(context, [&] {
      const GaussianPair pair = make_gaussian_pair(rng, d);
      const LinearMongeMap truth = fit_exact(pair.m1, pair.s1, pair.m2, pair.s2);
      const SampleSet eval = gaussian(rng, pair.m1, pair.s1, cfg.n_eval);
      std::vector<ResultRow> out;
      for (long n : cfg.n_grid) {
        const SampleSet xs = gaussian(rng, pair.m1, pair.s1, n);
        const SampleSet xt = gaussian(rng, pair.m2, pair.s2, n);
        const LinearMongeMap hat = fit_empirical(xs, xt, cfg.alpha);
        const DivergenceEstimate div = mapping_divergence(truth, hat, eval);
        out.push_back(ResultRow{"mapping", d, n, std::nullopt, trial, "divergence", div.value});
        out.push_back(
            ResultRow{"mapping", d, n, std::nullopt, trial, "divergence_stderr", div.std_error});
      }
      return out;
    });
  });
  return finalize(std::move(rows));
}

std::vector<ResultRow> run_da_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  for (long d : cfg.dims) {
    if (d < 2) throw Error(ErrorCode::InvalidArgument, "domain adaptation needs d >= 2");
  }
  const Rng base(cfg.seed);
  const long n_max = cfg.n_grid.back();
  const long nl_max = cfg.n_l_grid.back();
  const int per_dim = cfg.trials;
  const int jobs = static_cast<int>(cfg.dims.size()) * per_dim;
  auto rows = run_jobs(jobs, cfg.threads, [&](int job) {
    const long d = cfg.dims[static_cast<std::size_t>(job / per_dim)];
    const int trial = job % per_dim;
    Rng rng = base.substream(stream_index(d, trial));
    const std::string context = "da d=" + std::to_string(d) + " trial=" + std::to_string(trial);
    return with_context(context, [&] {
      const DaProblem problem = make_da_problem(rng, d, nl_max, n_max);
      const LabeledDataset eval = draw_da_target(rng, problem, cfg.n_eval);
      const LinearMongeMap truth = problem.truth();
      auto adapted_error = [&](const LdaModel& model, const LinearMongeMap& map) {
        const SampleSet pulled = transform(inverse(map), eval.x);
        return error_rate(predict(model, pulled), eval.y);
      };
      auto estimate_map = [&](long n) {
        if (cfg.use_true_map) return truth;
        return fit_empirical(problem.source_unlab.head(n), problem.target_unlab.head(n), cfg.alpha);
      };

      std::vector<ResultRow> out;
      auto emit = [&](long n, long n_l, const char* metric, double value) {
        out.push_back(ResultRow{"da", d, n, n_l, trial, metric, value});
      };
      const LdaModel full = lda_fit(problem.source, cfg.alpha);
      for (long n : cfg.n_grid) {
        emit(n, nl_max, "target_error_vs_n", adapted_error(full, estimate_map(n)));
      }
      const LinearMongeMap best = estimate_map(n_max);
      for (long n_l : cfg.n_l_grid) {
        const LabeledDataset labeled(problem.source.x.head(n_l),
                                     std::vector<int>(problem.source.y.begin(),
                                                      problem.source.y.begin() + n_l));
        emit(n_max, n_l, "target_error_vs_nl", adapted_error(lda_fit(labeled, cfg.alpha), best));
      }
      emit(n_max, nl_max, "bayes_error",
           bayes_error_two_gaussians(problem.sigma0, Vector::Ones(d)));
      emit(n_max, nl_max, "no_adaptation_error", error_rate(predict(full, eval.x), eval.y));
      const LabeledDataset mapped(transform(truth, problem.source.x), problem.source.y);
      emit(n_max, nl_max, "true_map_error",
           error_rate(predict(lda_fit(mapped, cfg.alpha), eval.x), eval.y));
      return out;
    });
  });
  return finalize(std::move(rows));
}

std::vector<ResultRow> run_conv_experiment(const ExperimentConfig& cfg,
                                           const std::optional<SignalStack>& images) {
  cfg.validate();
  const Shape shape = images ? images->shape() : cfg.image_shape;
  const long d = static_cast<long>(shape.size());
  const long n_max = cfg.n_grid.back();
  const Matrix kernel = motion_blur_kernel(cfg.blur_length, cfg.blur_angle_deg);
  const Vector kernel_grid = centered_kernel(kernel, shape);
  const Vector source_spectrum = default_image_spectrum(shape);

  std::optional<SpectralMongeMap> reference;
  if (images) {
    if (images->n() < 2 * n_max + 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "need at least 2 * max(n) + 1 images, got " + std::to_string(images->n()));
    }
    // Best available stand-in for the population map on real data.
    reference = fit_conv(*images, blur_stack(*images, kernel), cfg.alpha);
  } else {
    const Vector gain = kernel_transfer(kernel, shape).cwiseAbs2();
    const Vector target_spectrum = gain.cwiseProduct(source_spectrum);
    reference = spectral_map_from_spectra(shape, Vector::Zero(d), source_spectrum,
                                          Vector::Zero(d), target_spectrum);
  }
  const Vector reference_filter = spatial_filter(*reference);

  const Rng base(cfg.seed);
  auto rows = run_jobs(cfg.trials, cfg.threads, [&](int trial) {
    Rng rng = base.substream(stream_index(d, trial));
    const std::string context = "conv trial=" + std::to_string(trial);
    return with_context(context, [&] {
      std::optional<SignalStack> eval;
      std::vector<Index> order;
      if (images) {
        const Index pool = images->n();
        const Index held_out = std::min<Index>(cfg.n_eval, pool - 2 * n_max);
        order = draw_indices(rng, pool, 2 * n_max + held_out);
        eval = SignalStack(shape, gather_rows(images->data(), order, 2 * static_cast<std::size_t>(n_max),
                                              static_cast<std::size_t>(held_out)));
      } else {
        eval = stationary_image_stack(rng, shape, source_spectrum, cfg.n_eval);
      }
      std::vector<ResultRow> out;
      auto emit = [&](long n, const char* metric, double value) {
        out.push_back(ResultRow{"conv", d, n, std::nullopt, trial, metric, value});
      };
      for (long n : cfg.n_grid) {
        std::optional<SignalStack> xs;
        std::optional<SignalStack> clean_target;
        if (images) {
          xs = SignalStack(shape, gather_rows(images->data(), order, 0, static_cast<std::size_t>(n)));
          clean_target = SignalStack(
              shape, gather_rows(images->data(), order, static_cast<std::size_t>(n_max),
                                 static_cast<std::size_t>(n)));
        } else {
          xs = stationary_image_stack(rng, shape, source_spectrum, n);
          clean_target = stationary_image_stack(rng, shape, source_spectrum, n);
        }
        const SignalStack xt = blur_stack(*clean_target, kernel);
        const SpectralMongeMap conv = fit_conv(*xs, xt, cfg.alpha);
        const LinearMongeMap linear = fit_empirical(xs->as_samples(), xt.as_samples(), cfg.alpha);
        const SampleSet eval_set = eval->as_samples();
        emit(n, "conv_divergence", mapping_divergence(*reference, conv, eval_set).value);
        emit(n, "linear_divergence", mapping_divergence(*reference, linear, eval_set).value);
        const double rms = std::sqrt((conv.response() - reference->response()).squaredNorm() /
                                     static_cast<double>(d));
        emit(n, "filter_rms_error", rms);
        const Vector filter = spatial_filter(conv);
        emit(n, "filter_correlation", correlation(filter, reference_filter));
        emit(n, "kernel_correlation", correlation(filter, kernel_grid));
      }
      return out;
    });
  });
  return finalize(std::move(rows));
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw Error(ErrorCode::InvalidArgument, "slope needs at least 2 points");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [n, err] : points) {
    if (!(n > 0.0) || !(err > 0.0)) {
      throw Error(ErrorCode::NonPositive, "log-log slope needs positive coordinates");
    }
    sx += std::log(n);
    sy += std::log(err);
  }
  const double k = static_cast<double>(points.size());
  const double mx = sx / k;
  const double my = sy / k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [n, err] : points) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(err) - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "slope needs distinct n values");
  return sxy / sxx;
}

Vector default_image_spectrum(const Shape& shape) {
  Vector out(shape.size());
  for (Index r = 0; r < shape.rows; ++r) {
    const double fr = static_cast<double>(std::min(r, shape.rows - r)) / static_cast<double>(shape.rows);
    for (Index c = 0; c < shape.cols; ++c) {
      const double fc =
          static_cast<double>(std::min(c, shape.cols - c)) / static_cast<double>(shape.cols);
      out(r * shape.cols + c) = 1.0 / (1.0 + (fr * fr + fc * fc) / kSpectrumBandwidthSq);
    }
  }
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "percentile of no values");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<std::pair<double, double>> metric_series(const std::vector<ResultRow>& rows,
                                                     const std::string& experiment, long d,
                                                     const std::string& metric) {
  std::vector<std::pair<double, double>> out;
  for (const ResultRow& r : rows) {
    if (r.experiment == experiment && r.d == d && r.metric == metric && !r.trial) {
      out.emplace_back(static_cast<double>(r.n), r.value);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> trial_values(const std::vector<ResultRow>& rows, const std::string& experiment,
                                 long d, long n, const std::string& metric) {
  std::vector<double> out;
  for (const ResultRow& r : rows) {
    if (r.experiment == experiment && r.d == d && r.n == n && r.metric == metric && r.trial) {
      out.push_back(r.value);
    }
  }
  return out;
}

}  // namespace monge
