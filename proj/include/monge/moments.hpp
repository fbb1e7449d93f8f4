#ifndef MONGE_MOMENTS_HPP
#define MONGE_MOMENTS_HPP

#include "monge/symmat.hpp"

namespace monge {

/// n samples of dimension d, one sample per row. Never empty, always finite.
class SampleSet {
 public:
  explicit SampleSet(Matrix rows);

  const Matrix& rows() const noexcept { return rows_; }
  Index n() const noexcept { return rows_.rows(); }
  Index d() const noexcept { return rows_.cols(); }

  /// First `count` rows, used for nested sample-size sweeps.
  SampleSet head(Index count) const;

 private:
  Matrix rows_;
};

struct MomentEstimate {
  Vector mean;
  Matrix cov;
  Index n = 0;
};

/// Two-pass mean and covariance with divisor n.
MomentEstimate estimate_moments(const SampleSet& x);

/// tr(S) / lambda_max(S). Throws ZeroMatrix for an all-zero input.
double effective_rank(const Matrix& s);

/// lambda_max / lambda_min.
double condition_number(const SpdMatrix& s);

}  // namespace monge

#endif  // MONGE_MOMENTS_HPP
