#include "monge/classify.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "monge/error.hpp"

namespace monge {
namespace {

constexpr double kSingularTol = 1e-14;

}  // namespace

LdaModel lda_fit(const LabeledDataset& data, double shrink_alpha) {
  if (!(shrink_alpha >= 0.0 && shrink_alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "shrink_alpha must lie in [0, 1]");
  }
  const Matrix& x = data.x.rows();
  const Index d = x.cols();
  Index counts[2] = {0, 0};
  Vector sums[2] = {Vector::Zero(d), Vector::Zero(d)};
  for (Index i = 0; i < x.rows(); ++i) {
    const int label = data.y[static_cast<std::size_t>(i)];
    ++counts[label];
    sums[label] += x.row(i).transpose();
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw Error(ErrorCode::MissingClass, "both classes must be present to fit LDA");
  }
  const Vector mean0 = sums[0] / static_cast<double>(counts[0]);
  const Vector mean1 = sums[1] / static_cast<double>(counts[1]);

  // Sum of within-class scatter over n equals the prior-weighted average of
  // the per-class covariances.
  Matrix centered(x.rows(), d);
  for (Index i = 0; i < x.rows(); ++i) {
    const Vector& mu = data.y[static_cast<std::size_t>(i)] == 1 ? mean1 : mean0;
    centered.row(i) = x.row(i) - mu.transpose();
  }
  Matrix pooled = centered.transpose() * centered / static_cast<double>(x.rows());
  pooled = 0.5 * (pooled + pooled.transpose());

  if (shrink_alpha == 0.0) {
    const SymEig e = sym_eig(pooled);
    if (!(e.values(d - 1) > kSingularTol * e.values(0))) {
      throw Error(ErrorCode::SingularPooled, "pooled covariance is singular; use shrinkage");
    }
  }
  SpdMatrix pooled_cov = shrink(pooled, shrink_alpha);

  const double n = static_cast<double>(x.rows());
  const double p0 = static_cast<double>(counts[0]) / n;
  const double p1 = static_cast<double>(counts[1]) / n;
  const Vector w = pooled_cov.matrix().ldlt().solve(mean1 - mean0);
  const double b = -w.dot(mean0 + mean1) / 2.0 + std::log(p1 / p0);
  return LdaModel{mean0, mean1, w, b, std::move(pooled_cov), p0, p1};
}

Vector decision_scores(const LdaModel& model, const SampleSet& x) {
  if (x.d() != model.dim()) {
    throw Error(ErrorCode::DimMismatch, "sample dimension does not match the model");
  }
  return (x.rows() * model.w).array() + model.b;
}

std::vector<int> predict(const LdaModel& model, const SampleSet& x) {
  const Vector scores = decision_scores(model, x);
  std::vector<int> labels(static_cast<std::size_t>(scores.size()));
  for (Index i = 0; i < scores.size(); ++i) labels[static_cast<std::size_t>(i)] = scores(i) >= 0.0 ? 1 : 0;
  return labels;
}

double error_rate(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::DimMismatch, "prediction and truth lengths differ");
  }
  if (truth.empty()) throw Error(ErrorCode::InvalidArgument, "empty label vectors");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

// erfc from <cmath> is accurate to a few ulps, well inside 1e-7.
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bayes_error_two_gaussians(const SpdMatrix& sigma0, const Vector& delta) {
  if (delta.size() != sigma0.dim()) {
    throw Error(ErrorCode::DimMismatch, "delta and covariance sizes differ");
  }
  const double mahalanobis_sq = delta.dot(sigma0.matrix().ldlt().solve(delta));
  return normal_cdf(-0.5 * std::sqrt(std::max(mahalanobis_sq, 0.0)));
}

}  // namespace monge
