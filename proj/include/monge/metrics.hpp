#ifndef MONGE_METRICS_HPP
#define MONGE_METRICS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "monge/convmap.hpp"
#include "monge/error.hpp"
#include "monge/mapping.hpp"

namespace monge {

struct DivergenceEstimate {
  double value = 0.0;
  Index n_eval = 0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of E ||T(x) - T'(x)|| from the rows of `x`, with the
/// standard error of the mean (population std / sqrt(n)).
template <class MapA, class MapB>
DivergenceEstimate mapping_divergence(const MapA& t, const MapB& t_prime, const SampleSet& x) {
  if (t.dim() != x.d() || t_prime.dim() != x.d()) {
    throw Error(ErrorCode::DimMismatch, "maps and samples disagree in dimension");
  }
  const Matrix gap = map_rows(t, x.rows()) - map_rows(t_prime, x.rows());
  const Vector norms = gap.rowwise().norm();
  DivergenceEstimate out;
  out.n_eval = x.n();
  out.value = norms.mean();
  const double var = (norms.array() - out.value).square().mean();
  out.std_error = std::sqrt(var / static_cast<double>(x.n()));
  return out;
}

/// Squared 2-Wasserstein distance between N(m1, s1) and N(m2, s2):
/// ||m1 - m2||^2 + tr(s1 + s2 - 2 (s1^{1/2} s2 s1^{1/2})^{1/2}).
double bures_wasserstein_sq(const Vector& m1, const Matrix& s1, const Vector& m2,
                            const Matrix& s2);

/// Linear score s(x) = w.x + b.
struct LinearScorer {
  Vector w;
  double b = 0.0;
};

enum class SurrogateLoss { Hinge, Absolute };

/// Labels are {0, 1}; losses use the signed label 2y - 1. Both are
/// 1-Lipschitz in the score.
double surrogate_loss(SurrogateLoss loss, double score, int label);

struct BoundAudit {
  double lhs = 0.0;          // risk of f o T_hat^{-1} on (T(x_i), y_i)
  double rhs = 0.0;          // source risk + M_f M_L ||A_hat^{-1}|| d(T, T_hat)
  double source_risk = 0.0;  // empirical risk of f on (x_i, y_i)
  double lipschitz = 0.0;    // M_f M_L ||A_hat^{-1}||
  DivergenceEstimate divergence;
  double lhs_stderr = 0.0;
};

/// Evaluates both sides of the transport domain-adaptation bound on a labeled
/// source sample. The divergence is estimated on the same rows.
BoundAudit da_bound_audit(const LinearScorer& f, SurrogateLoss loss, const LinearMongeMap& map_true,
                          const LinearMongeMap& map_hat, const SampleSet& x,
                          const std::vector<int>& y);

}  // namespace monge

#endif  // MONGE_METRICS_HPP
