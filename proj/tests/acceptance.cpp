// Acceptance checks; prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "monge/classify.hpp"
#include "monge/convmap.hpp"
#include "monge/dataio.hpp"
#include "monge/error.hpp"
#include "monge/experiments.hpp"
#include "monge/mapping.hpp"
#include "monge/metrics.hpp"
#include "monge/sampler.hpp"
#include "test_support.hpp"

using namespace monge;
using monge::testing::circulant_from_spectrum;
using monge::testing::random_spd;
using monge::testing::spectral_norm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double median(std::vector<double> v) { return percentile(std::move(v), 0.5); }

Outcome monge_rate() {
  ExperimentConfig cfg;
  cfg.seed = 20240601;
  cfg.dims = {2, 10};
  cfg.n_grid = {100, 316, 1000, 3162, 10000};
  cfg.trials = 10;
  cfg.n_eval = 100000;
  const std::vector<ResultRow> rows = run_mapping_convergence(cfg);
  bool pass = true;
  std::string detail;
  for (long d : {10L, 2L}) {
    const double slope = fit_loglog_slope(metric_series(rows, "mapping", d, "divergence_median"));
    pass = pass && slope >= -0.65 && slope <= -0.35;
    detail += fmt("d=%ld slope=%.4f ", d, slope);
  }
  return {pass, detail + "(target [-0.65, -0.35])"};
}

Outcome exact_pushforward() {
  double worst_cov = 0.0;
  double worst_bw = 0.0;
  for (Index d : {2, 5, 10, 20, 50}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Rng rng(seed * 1000 + static_cast<std::uint64_t>(d));
      const GaussianPair p = make_gaussian_pair(rng, d);
      const LinearMongeMap map = fit_exact(p.m1, p.s1, p.m2, p.s2);
      const Matrix& a = map.a().matrix();
      const Matrix pushed = a * p.s1.matrix() * a;
      worst_cov = std::max(worst_cov, spectral_norm(pushed - p.s2.matrix()) / spectral_norm(p.s2.matrix()));
      const Vector pushed_mean = p.m2 + a * (p.m1 - map.m1());
      const Matrix pushed_sym = 0.5 * (pushed + pushed.transpose());
      worst_bw = std::max(worst_bw, std::abs(bures_wasserstein_sq(pushed_mean, pushed_sym, p.m2,
                                                                   p.s2.matrix())));
    }
  }
  return {worst_cov <= 1e-8 && worst_bw <= 1e-8,
          fmt("max ||A S1 A - S2||/||S2|| = %.3e, max BW^2 = %.3e over 100 pairs (tol 1e-8)", worst_cov,
              worst_bw)};
}

Outcome geometric_mean_algebra() {
  double worst = 0.0;
  for (Index d : {2, 5, 20}) {
    Rng rng(77 + static_cast<std::uint64_t>(d));
    for (int i = 0; i < 100; ++i) {
      const SpdMatrix b = random_spd(rng, d);
      const SpdMatrix c = random_spd(rng, d);
      const Matrix bc = geometric_mean(b, c).matrix();
      const Matrix cb = geometric_mean(c, b).matrix();
      const Matrix inv = geometric_mean(b.inverse(), c.inverse()).matrix();
      const double scale = spectral_norm(bc);
      worst = std::max(worst, spectral_norm(bc - cb) / scale);
      worst = std::max(worst, spectral_norm(bc * inv - Matrix::Identity(d, d)));
      worst = std::max(worst, spectral_norm(bc * b.inverse().matrix() * bc - c.matrix()) /
                                  spectral_norm(c.matrix()));
    }
  }
  return {worst <= 1e-8, fmt("max relative defect %.3e over 300 pairs (tol 1e-8)", worst)};
}

Outcome circulant_equivalence() {
  const Index d = 16;
  const Shape shape{1, d};
  Vector d1(d);
  Vector d2(d);
  for (Index k = 0; k < d; ++k) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d);
    d1(k) = 1.0 + 0.5 * std::cos(w);
    d2(k) = 1.5 + 0.8 * std::cos(2.0 * w) + 0.3 * std::cos(w);
  }
  const SpdMatrix s1 = SpdMatrix::from(circulant_from_spectrum(d1));
  const SpdMatrix s2 = SpdMatrix::from(circulant_from_spectrum(d2));
  const Vector zero = Vector::Zero(d);
  const Matrix dense = fit_exact(zero, s1, zero, s2).a().matrix();
  const SpectralMongeMap spectral = spectral_map_from_spectra(shape, zero, d1, zero, d2);
  const Matrix from_response = circulant_from_spectrum(spectral.response());
  const double exact_gap = spectral_norm(dense - from_response) / spectral_norm(dense);

  Rng rng(404);
  const Index n = 10000;
  const SampleSet xs = gaussian(rng, zero, s1, n);
  const SampleSet xt = gaussian(rng, zero, s2, n);
  const Matrix dense_hat = fit_empirical(xs, xt, 0.0).a().matrix();
  const SpectralMongeMap conv_hat = fit_conv(SignalStack(shape, xs.rows()), SignalStack(shape, xt.rows()), 0.0);
  const Matrix conv_dense = circulant_from_spectrum(conv_hat.response());
  const double empirical_gap = spectral_norm(dense_hat - conv_dense) / spectral_norm(conv_dense);
  const double dense_err = spectral_norm(dense_hat - dense) / spectral_norm(dense);
  const double conv_err = spectral_norm(conv_dense - dense) / spectral_norm(dense);
  return {exact_gap <= 1e-6 && empirical_gap <= 0.05,
          fmt("exact gap %.3e (tol 1e-6); empirical gap %.4f at n=1e4 (tol 0.05); "
              "errors vs truth dense %.4f conv %.4f",
              exact_gap, empirical_gap, dense_err, conv_err)};
}

Outcome da_convergence() {
  ExperimentConfig cfg;
  cfg.seed = 31337;
  cfg.dims = {10};
  cfg.n_grid = {10000};
  cfg.n_l_grid = {10000};
  cfg.trials = 10;
  cfg.n_eval = 100000;
  const std::vector<ResultRow> rows = run_da_convergence(cfg);
  const auto err = trial_values(rows, "da", 10, 10000, "target_error_vs_n");
  const auto bayes = trial_values(rows, "da", 10, 10000, "bayes_error");
  const auto none = trial_values(rows, "da", 10, 10000, "no_adaptation_error");
  std::vector<double> gaps;
  for (std::size_t t = 0; t < err.size(); ++t) gaps.push_back(std::abs(err[t] - bayes[t]));
  const double gap = median(gaps);
  const double median_gap = std::abs(median(err) - median(bayes));
  const double none_min = *std::min_element(none.begin(), none.end());
  const double none_median = median(none);
  return {gap <= 0.02 && median_gap <= 0.02 && none_median >= 0.4,
          fmt("median |err - bayes| = %.4f, |median err - median bayes| = %.4f (tol 0.02); "
              "median err %.4f, median bayes %.4f; no-adaptation error median %.4f (>= 0.4), min %.4f",
              gap, median_gap, median(err), median(bayes), none_median, none_min)};
}

Outcome bound_audit() {
  int held = 0;
  double worst_margin = -1e300;
  const Rng base(99);
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = base.substream(static_cast<std::uint64_t>(trial));
    const DaProblem problem = make_da_problem(rng, 10, 1000, 1000);
    const LinearMongeMap hat = fit_empirical(problem.source_unlab, problem.target_unlab, 0.0);
    const LdaModel lda = lda_fit(problem.source);
    const LabeledDataset fresh = draw_da_source(rng, problem, 10000);
    const BoundAudit audit =
        da_bound_audit(LinearScorer{lda.w, lda.b}, SurrogateLoss::Hinge, problem.truth(), hat, fresh.x, fresh.y);
    const double margin = audit.lhs - (audit.rhs + 2.0 * audit.lhs_stderr);
    worst_margin = std::max(worst_margin, margin);
    if (margin <= 0.0) ++held;
  }
  return {held == 20, fmt("%d/20 trials satisfy lhs <= rhs + 2 stderr; worst lhs - bound = %.4e", held,
                          worst_margin)};
}

Outcome conv_recovery() {
  ExperimentConfig cfg;
  cfg.seed = 4242;
  cfg.image_shape = Shape{28, 28};
  cfg.blur_length = 5;
  cfg.blur_angle_deg = 45.0;
  cfg.n_grid = {100, 316, 1000};
  cfg.trials = 10;
  cfg.n_eval = 1000;
  cfg.alpha = 1e-3;
  const std::vector<ResultRow> rows = run_conv_experiment(cfg);
  const auto corr = trial_values(rows, "conv", 784, 1000, "filter_correlation");
  const auto raw = trial_values(rows, "conv", 784, 1000, "kernel_correlation");
  const double corr_min = *std::min_element(corr.begin(), corr.end());
  bool ordered = true;
  std::string detail = fmt("min filter correlation at n=1000 %.4f (>= 0.9), median raw-kernel %.4f; ",
                           corr_min, median(raw));
  for (long n : cfg.n_grid) {
    if (n >= 784) continue;
    const auto conv = trial_values(rows, "conv", 784, n, "conv_divergence");
    const auto linear = trial_values(rows, "conv", 784, n, "linear_divergence");
    for (std::size_t t = 0; t < conv.size(); ++t) ordered = ordered && conv[t] < linear[t];
    detail += fmt("n=%ld conv %.4f linear %.4f; ", n, median(conv), median(linear));
  }
  return {corr_min >= 0.9 && ordered, detail};
}

Outcome determinism() {
  ExperimentConfig cfg;
  cfg.seed = 8;
  cfg.dims = {2, 5};
  cfg.n_grid = {50, 100};
  cfg.n_l_grid = {50, 100};
  cfg.trials = 6;
  cfg.n_eval = 2000;
  ExperimentConfig conv_cfg = cfg;
  conv_cfg.image_shape = Shape{8, 8};
  conv_cfg.n_grid = {20, 80};
  conv_cfg.n_eval = 200;
  conv_cfg.alpha = 1e-3;
  auto all = [&](unsigned threads) {
    cfg.threads = threads;
    conv_cfg.threads = threads;
    return std::vector<std::string>{to_csv(run_mapping_convergence(cfg)), to_csv(run_da_convergence(cfg)),
                                    to_csv(run_conv_experiment(conv_cfg))};
  };
  const auto first = all(1);
  const auto second = all(1);
  const auto parallel = all(8);
  return {first == second && first == parallel,
          fmt("mapping/da/conv CSV identical across repeat runs and threads 1 vs 8: %s",
              first == second && first == parallel ? "yes" : "no")};
}

Outcome idx_conformance() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "monge_acceptance";
  fs::create_directories(dir);
  auto write = [&](const std::string& name, std::vector<unsigned char> bytes) {
    std::ofstream(dir / name, std::ios::binary)
        .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    return dir / name;
  };
  const std::vector<unsigned char> example = {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0x00, 0x40, 0x80, 0xFF};
  const ImageStack img = read_idx_images(write("ok.idx", example));
  const bool parsed = img.n() == 1 && img.shape() == Shape{2, 2} && img.data()(0, 0) == 0.0 &&
                      img.data()(0, 1) == 64.0 / 255.0 && img.data()(0, 2) == 128.0 / 255.0 &&
                      img.data()(0, 3) == 1.0;
  auto code = [](const fs::path& p) {
    try {
      read_idx_images(p);
    } catch (const Error& e) {
      return std::string(to_string(e.code()));
    }
    return std::string("none");
  };
  std::vector<unsigned char> bad = example;
  bad[3] = 0x01;
  std::vector<unsigned char> truncated = example;
  truncated[7] = 2;
  const std::string magic_code = code(write("magic.idx", bad));
  const std::string trunc_code = code(write("trunc.idx", truncated));
  return {parsed && magic_code == "BadMagic" && trunc_code == "TruncatedFile",
          fmt("example parsed %s; label magic -> %s; short payload -> %s", parsed ? "exactly" : "WRONG",
              magic_code.c_str(), trunc_code.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 monge rate", monge_rate},
      {"2 exact pushforward", exact_pushforward},
      {"3 geometric mean algebra", geometric_mean_algebra},
      {"4 circulant equivalence", circulant_equivalence},
      {"5 domain adaptation", da_convergence},
      {"6 bound audit", bound_audit},
      {"7 convolutional recovery", conv_recovery},
      {"8 determinism", determinism},
      {"9 idx conformance", idx_conformance},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s [%s] %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), outcome.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
