#ifndef MONGE_MAPPING_HPP
#define MONGE_MAPPING_HPP

#include "monge/moments.hpp"
#include "monge/symmat.hpp"

namespace monge {

/// Affine transport map x -> m2 + A (x - m1) with A symmetric positive
/// definite. `alpha` records the covariance shrinkage used at fit time.
class LinearMongeMap {
 public:
  LinearMongeMap(Vector m1, Vector m2, SpdMatrix a, double alpha = 0.0);

  const Vector& m1() const noexcept { return m1_; }
  const Vector& m2() const noexcept { return m2_; }
  const SpdMatrix& a() const noexcept { return a_; }
  double alpha() const noexcept { return alpha_; }
  Index dim() const noexcept { return a_.dim(); }

  static LinearMongeMap identity(Index dim);

 private:
  Vector m1_;
  Vector m2_;
  SpdMatrix a_;
  double alpha_;
};

/// Closed-form map between N(m1, s1) and N(m2, s2):
/// A = s1^{-1/2} (s1^{1/2} s2 s1^{1/2})^{1/2} s1^{-1/2}.
LinearMongeMap fit_exact(const Vector& m1, const SpdMatrix& s1, const Vector& m2,
                         const SpdMatrix& s2);

/// Plug-in estimator: empirical moments of both sets, both covariances shrunk
/// by `alpha`, then fit_exact. With alpha = 0 the source covariance must be
/// non-singular (in particular xs.n() >= d), otherwise SingularSource.
LinearMongeMap fit_empirical(const SampleSet& xs, const SampleSet& xt, double alpha);

/// Applies the map row by row.
Matrix map_rows(const LinearMongeMap& map, const Matrix& rows);
SampleSet transform(const LinearMongeMap& map, const SampleSet& x);

/// y -> m1 + A^{-1} (y - m2).
LinearMongeMap inverse(const LinearMongeMap& map);

/// Spectral norm of A, i.e. lambda_max(A).
double operator_norm(const LinearMongeMap& map);

}  // namespace monge

#endif  // MONGE_MAPPING_HPP
