#include "monge/mapping.hpp"

#include <cmath>
#include <string>

#include "monge/error.hpp"

namespace monge {
namespace {

constexpr double kSingularTol = 1e-10;
constexpr double kIllConditionedRatio = 1e-14;

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

}  // namespace

LinearMongeMap::LinearMongeMap(Vector m1, Vector m2, SpdMatrix a, double alpha)
    : m1_(std::move(m1)), m2_(std::move(m2)), a_(std::move(a)), alpha_(alpha) {
  if (m1_.size() != a_.dim() || m2_.size() != a_.dim()) {
    throw Error(ErrorCode::DimMismatch, "means and matrix of a map disagree in dimension");
  }
  if (!m1_.allFinite() || !m2_.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite mean");
  check_alpha(alpha_);
}

LinearMongeMap LinearMongeMap::identity(Index dim) {
  return LinearMongeMap(Vector::Zero(dim), Vector::Zero(dim), SpdMatrix::identity(dim));
}

LinearMongeMap fit_exact(const Vector& m1, const SpdMatrix& s1, const Vector& m2,
                         const SpdMatrix& s2) {
  if (s1.dim() != s2.dim() || m1.size() != s1.dim() || m2.size() != s2.dim()) {
    throw Error(ErrorCode::DimMismatch, "source and target moments disagree in dimension");
  }
  const SymEig e = s1.eig();
  const double ratio = e.values(e.values.size() - 1) / e.values(0);
  if (ratio < kIllConditionedRatio) {
    throw Error(ErrorCode::IllConditioned,
                "source covariance has lambda_min/lambda_max = " + std::to_string(ratio));
  }
  const Vector root = e.values.cwiseSqrt();
  const Matrix half = e.vectors * root.asDiagonal() * e.vectors.transpose();
  const Matrix inv_half = e.vectors * root.cwiseInverse().asDiagonal() * e.vectors.transpose();
  Matrix inner = half * s2.matrix() * half;
  inner = 0.5 * (inner + inner.transpose());
  const Matrix mid = psd_sqrt(inner);
  Matrix a = inv_half * mid * inv_half;
  a = 0.5 * (a + a.transpose());
  return LinearMongeMap(m1, m2, SpdMatrix::from(a));
}

LinearMongeMap fit_empirical(const SampleSet& xs, const SampleSet& xt, double alpha) {
  if (xs.d() != xt.d()) {
    throw Error(ErrorCode::DimMismatch, "source and target samples disagree in dimension");
  }
  check_alpha(alpha);
  if (alpha == 0.0 && xs.n() < xs.d()) {
    throw Error(ErrorCode::SingularSource,
                "need at least d = " + std::to_string(xs.d()) + " source samples without shrinkage");
  }
  const MomentEstimate source = estimate_moments(xs);
  const MomentEstimate target = estimate_moments(xt);
  if (alpha == 0.0) {
    const SymEig e = sym_eig(source.cov);
    if (!(e.values(e.values.size() - 1) > kSingularTol * e.values(0))) {
      throw Error(ErrorCode::SingularSource, "empirical source covariance is singular");
    }
  }
  const SpdMatrix s1 = shrink(source.cov, alpha);
  const SpdMatrix s2 = shrink(target.cov, alpha);
  const LinearMongeMap exact = fit_exact(source.mean, s1, target.mean, s2);
  return LinearMongeMap(exact.m1(), exact.m2(), exact.a(), alpha);
}

Matrix map_rows(const LinearMongeMap& map, const Matrix& rows) {
  if (rows.cols() != map.dim()) {
    throw Error(ErrorCode::DimMismatch, "sample dimension " + std::to_string(rows.cols()) +
                                            " does not match map dimension " +
                                            std::to_string(map.dim()));
  }
  Matrix out = (rows.rowwise() - map.m1().transpose()) * map.a().matrix();
  out.rowwise() += map.m2().transpose();
  return out;
}

SampleSet transform(const LinearMongeMap& map, const SampleSet& x) {
  return SampleSet(map_rows(map, x.rows()));
}

LinearMongeMap inverse(const LinearMongeMap& map) {
  return LinearMongeMap(map.m2(), map.m1(), map.a().inverse(), map.alpha());
}

double operator_norm(const LinearMongeMap& map) { return map.a().eig().values(0); }

}  // namespace monge
