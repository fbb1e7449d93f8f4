#ifndef MONGE_CLASSIFY_HPP
#define MONGE_CLASSIFY_HPP

#include <vector>

#include "monge/sampler.hpp"

namespace monge {

/// Two-class linear discriminant with shared covariance. Decision score is
/// s(x) = w.x + b; predicts label 1 when s(x) >= 0.
struct LdaModel {
  Vector mean0;
  Vector mean1;
  Vector w;
  double b = 0.0;
  SpdMatrix pooled_cov;
  double p0 = 0.5;
  double p1 = 0.5;

  Index dim() const { return w.size(); }
  double score(const Vector& x) const { return w.dot(x) + b; }
};

/// Class means, prior-weighted pooled covariance (divisor n) shrunk by
/// `shrink_alpha`, w = pooled^{-1} (mean1 - mean0),
/// b = -w.(mean0 + mean1)/2 + log(p1/p0).
LdaModel lda_fit(const LabeledDataset& data, double shrink_alpha = 0.0);

std::vector<int> predict(const LdaModel& model, const SampleSet& x);
Vector decision_scores(const LdaModel& model, const SampleSet& x);

double error_rate(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Standard normal CDF.
double normal_cdf(double x);

/// Bayes error Phi(-Delta/2) for equal-prior classes N(mu, sigma0) and
/// N(mu + delta, sigma0), Delta = sqrt(delta^T sigma0^{-1} delta).
double bayes_error_two_gaussians(const SpdMatrix& sigma0, const Vector& delta);

}  // namespace monge

#endif  // MONGE_CLASSIFY_HPP
