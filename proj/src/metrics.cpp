#include "monge/metrics.hpp"

#include <algorithm>

namespace monge {

double bures_wasserstein_sq(const Vector& m1, const Matrix& s1, const Vector& m2,
                            const Matrix& s2) {
  if (m1.size() != m2.size() || s1.rows() != m1.size() || s2.rows() != m2.size() ||
      s1.cols() != s1.rows() || s2.cols() != s2.rows()) {
    throw Error(ErrorCode::DimMismatch, "Gaussian parameters disagree in dimension");
  }
  // tr((s1^1/2 s2 s1^1/2)^1/2) is the nuclear norm of s2^1/2 s1^1/2, so the
  // trace term equals min over orthogonal U of ||s1^1/2 - s2^1/2 U||_F^2,
  // attained at the polar factor. Evaluating the residual directly avoids
  // cancellation when the covariances are close.
  const Matrix root1 = psd_sqrt(s1);
  const Matrix root2 = psd_sqrt(s2);
  const Eigen::JacobiSVD<Matrix> svd(root2.transpose() * root1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix polar = svd.matrixU() * svd.matrixV().transpose();
  const double trace_term = (root1 - root2 * polar).squaredNorm();
  return (m1 - m2).squaredNorm() + trace_term;
}

double surrogate_loss(SurrogateLoss loss, double score, int label) {
  const double sign = label == 1 ? 1.0 : -1.0;
  switch (loss) {
    case SurrogateLoss::Hinge: return std::max(0.0, 1.0 - sign * score);
    case SurrogateLoss::Absolute: return std::abs(sign - score);
  }
  return 0.0;
}

BoundAudit da_bound_audit(const LinearScorer& f, SurrogateLoss loss, const LinearMongeMap& map_true,
                          const LinearMongeMap& map_hat, const SampleSet& x,
                          const std::vector<int>& y) {
  if (f.w.size() != x.d() || map_true.dim() != x.d() || map_hat.dim() != x.d()) {
    throw Error(ErrorCode::DimMismatch, "scorer, maps and samples disagree in dimension");
  }
  if (static_cast<Index>(y.size()) != x.n()) {
    throw Error(ErrorCode::DimMismatch, "label count does not match sample count");
  }
  const LinearMongeMap hat_inv = inverse(map_hat);
  const Matrix pulled_back = map_rows(hat_inv, map_rows(map_true, x.rows()));
  const Vector source_scores = (x.rows() * f.w).array() + f.b;
  const Vector target_scores = (pulled_back * f.w).array() + f.b;

  Vector target_losses(x.n());
  double source_sum = 0.0;
  for (Index i = 0; i < x.n(); ++i) {
    source_sum += surrogate_loss(loss, source_scores(i), y[i]);
    target_losses(i) = surrogate_loss(loss, target_scores(i), y[i]);
  }
  BoundAudit out;
  out.source_risk = source_sum / static_cast<double>(x.n());
  out.lhs = target_losses.mean();
  out.lhs_stderr = std::sqrt((target_losses.array() - out.lhs).square().mean() /
                             static_cast<double>(x.n()));
  out.divergence = mapping_divergence(map_true, map_hat, x);
  const double loss_lipschitz = 1.0;
  out.lipschitz = f.w.norm() * loss_lipschitz * operator_norm(hat_inv);
  out.rhs = out.source_risk + out.lipschitz * out.divergence.value;
  return out;
}

}  // namespace monge
