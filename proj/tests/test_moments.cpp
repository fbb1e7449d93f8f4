#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "monge/error.hpp"
#include "monge/moments.hpp"
#include "monge/sampler.hpp"

using namespace monge;

TEST_CASE("single sample has zero covariance") {
  const MomentEstimate m = estimate_moments(SampleSet(Matrix::Zero(1, 2)));
  CHECK(m.n == 1);
  CHECK(m.mean.norm() == 0.0);
  CHECK(m.cov.norm() == 0.0);
}

TEST_CASE("two symmetric samples use divisor n") {
  Matrix x(2, 2);
  x << 1, 0, -1, 0;
  const MomentEstimate m = estimate_moments(SampleSet(x));
  CHECK(m.mean.norm() == 0.0);
  CHECK(m.cov(0, 0) == doctest::Approx(1.0));
  CHECK(m.cov(0, 1) == 0.0);
  CHECK(m.cov(1, 1) == 0.0);
}

TEST_CASE("large Gaussian sample recovers its covariance") {
  Rng rng(42);
  Vector diag(2);
  diag << 4, 1;
  const SampleSet x = gaussian(rng, Vector::Zero(2), SpdMatrix::diagonal(diag), 100000);
  const MomentEstimate m = estimate_moments(x);
  const Matrix want = diag.asDiagonal();
  CHECK((m.cov - want).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("sample sets reject empty or non-finite data") {
  CHECK_THROWS_AS(SampleSet(Matrix(0, 3)), Error);
  Matrix bad = Matrix::Zero(2, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(SampleSet{bad}, Error);
}

TEST_CASE("moments are permutation invariant and covariance is shift invariant") {
  Rng rng(9);
  const Matrix x = standard_normal(rng, 200, 4);
  const MomentEstimate base = estimate_moments(SampleSet(x));

  std::vector<Index> order(200);
  std::iota(order.begin(), order.end(), Index{0});
  std::reverse(order.begin(), order.end());
  std::swap(order[3], order[150]);
  Matrix permuted(200, 4);
  for (Index i = 0; i < 200; ++i) permuted.row(i) = x.row(order[static_cast<std::size_t>(i)]);
  const MomentEstimate p = estimate_moments(SampleSet(permuted));
  CHECK((p.mean - base.mean).norm() < 1e-13);
  CHECK((p.cov - base.cov).norm() < 1e-13);

  Vector shift(4);
  shift << 3.0, -7.5, 100.0, 0.25;
  const MomentEstimate s = estimate_moments(SampleSet(x.rowwise() + shift.transpose()));
  CHECK((s.cov - base.cov).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((s.mean - base.mean - shift).norm() < 1e-12);
}

TEST_CASE("covariance matches a streaming Welford accumulation") {
  Rng rng(31);
  const Matrix x = standard_normal(rng, 500, 3) * 5.0;
  Vector mean = Vector::Zero(3);
  Matrix m2 = Matrix::Zero(3, 3);
  for (Index i = 0; i < x.rows(); ++i) {
    const Vector row = x.row(i).transpose();
    const Vector delta = row - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (row - mean).transpose();
  }
  const MomentEstimate m = estimate_moments(SampleSet(x));
  CHECK((m.cov - m2 / 500.0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("effective rank") {
  CHECK(effective_rank(Matrix::Identity(5, 5)) == doctest::Approx(5.0));
  Vector d(3);
  d << 1, 0, 0;
  CHECK(effective_rank(d.asDiagonal().toDenseMatrix()) == doctest::Approx(1.0));
  d << 4, 2, 2;
  CHECK(effective_rank(d.asDiagonal().toDenseMatrix()) == doctest::Approx(2.0));
  CHECK(effective_rank(7.5 * d.asDiagonal().toDenseMatrix()) == doctest::Approx(2.0));
  try {
    effective_rank(Matrix::Zero(3, 3));
    FAIL("zero matrix accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroMatrix);
  }
}

TEST_CASE("condition number") {
  CHECK(condition_number(SpdMatrix::identity(3)) == doctest::Approx(1.0));
  Vector d(2);
  d << 10, 2;
  CHECK(condition_number(SpdMatrix::diagonal(d)) == doctest::Approx(5.0));
  d << 1, 1e-6;
  CHECK(condition_number(SpdMatrix::diagonal(d)) == doctest::Approx(1e6));
}
