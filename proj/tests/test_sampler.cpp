#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "monge/classify.hpp"
#include "monge/error.hpp"
#include "monge/moments.hpp"
#include "monge/sampler.hpp"

using namespace monge;

TEST_CASE("rng is deterministic and substreams differ") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  // mt19937_64 with the default seed produces this value at step 10000 (C++ standard).
  std::mt19937_64 reference;
  reference.discard(9999);
  Rng std_seeded(5489u);
  for (int i = 0; i < 9999; ++i) std_seeded.next_u64();
  CHECK(std_seeded.next_u64() == 9981545732273789042ULL);
  CHECK(reference() == 9981545732273789042ULL);

  const Rng base(7);
  Rng s0 = base.substream(0);
  Rng s1 = base.substream(1);
  CHECK(s0.next_u64() != s1.next_u64());
  CHECK(base.substream(3).seed() == base.substream(3).seed());
}

TEST_CASE("uniform and normal variates have the right moments") {
  Rng rng(1);
  double sum = 0.0;
  double sum_sq = 0.0;
  double umin = 1.0;
  double umax = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(umin >= 0.0);
  CHECK(umax < 1.0);
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("gaussian sampler") {
  Rng rng(2);
  const SampleSet x = gaussian(rng, Vector::Zero(3), SpdMatrix::identity(3), 100000);
  CHECK(estimate_moments(x).mean.cwiseAbs().maxCoeff() < 0.02);

  const SampleSet one = gaussian(rng, Vector::Ones(2), SpdMatrix::identity(2), 1);
  CHECK(one.n() == 1);
  CHECK(one.rows().allFinite());

  Rng a(99);
  Rng b(99);
  const SpdMatrix s = wishart_identity(a, 4);
  const SpdMatrix s_again = wishart_identity(b, 4);
  CHECK(s.matrix() == s_again.matrix());
  CHECK(gaussian(a, Vector::Zero(4), s, 10).rows() == gaussian(b, Vector::Zero(4), s_again, 10).rows());
}

TEST_CASE("gaussian empirical covariance converges") {
  for (std::uint64_t seed : {10u, 11u, 12u}) {
    Rng rng(seed);
    const SpdMatrix s = wishart_identity(rng, 5);
    const MomentEstimate m = estimate_moments(gaussian(rng, Vector::Zero(5), s, 100000));
    CHECK((m.cov - s.matrix()).norm() < 0.05 * s.matrix().norm());
  }
}

TEST_CASE("wishart draws") {
  Rng rng(3);
  const SpdMatrix one = wishart_identity(rng, 1);
  CHECK(one.matrix()(0, 0) > 0.0);

  Matrix total = Matrix::Zero(3, 3);
  for (int i = 0; i < 10000; ++i) total += wishart_identity(rng, 3).matrix();
  total /= 10000.0;
  CHECK((total - 3.0 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 0.05 * 3.0);
}

TEST_CASE("gaussian pair draws") {
  Rng a(4);
  Rng b(4);
  const GaussianPair p = make_gaussian_pair(a, 3);
  const GaussianPair q = make_gaussian_pair(b, 3);
  CHECK(p.m1 == q.m1);
  CHECK(p.s2.matrix() == q.s2.matrix());

  Rng rng(5);
  Vector sum_sq = Vector::Zero(4);
  for (int i = 0; i < 1000; ++i) sum_sq += make_gaussian_pair(rng, 4).m1.cwiseAbs2();
  sum_sq /= 1000.0;
  for (Index j = 0; j < 4; ++j) CHECK(std::abs(sum_sq(j) - 10.0) <= 1.5);
}

TEST_CASE("domain adaptation problem structure") {
  Rng rng(6);
  const Index d = 5;
  const DaProblem p = make_da_problem(rng, d, 10000, 20000);
  CHECK(p.c.head(3) == Vector::Constant(3, 10.0));
  CHECK(p.c.tail(2) == Vector::Zero(2));
  CHECK(p.source.x.n() == 10000);
  CHECK(p.source_unlab.n() == 20000);
  CHECK(p.target_unlab.n() == 20000);

  Vector sums[2] = {Vector::Zero(d), Vector::Zero(d)};
  Index counts[2] = {0, 0};
  for (Index i = 0; i < p.source.x.n(); ++i) {
    const int y = p.source.y[static_cast<std::size_t>(i)];
    sums[y] += p.source.x.rows().row(i).transpose();
    ++counts[y];
  }
  CHECK((sums[0] / counts[0]).cwiseAbs().maxCoeff() < 0.1 * std::sqrt(p.sigma0.matrix().diagonal().maxCoeff()));
  CHECK((sums[1] / counts[1] - Vector::Ones(d)).cwiseAbs().maxCoeff() <
        0.1 * std::sqrt(p.sigma0.matrix().diagonal().maxCoeff()));
  CHECK(std::abs(static_cast<double>(counts[1]) / 10000.0 - 0.5) < 0.02);

  // Target moments: affine image of the two-component mixture.
  const Vector mix_mean = 0.5 * Vector::Ones(d);
  const Matrix mix_cov = p.sigma0.matrix() + 0.25 * Matrix::Ones(d, d);
  const MomentEstimate t = estimate_moments(p.target_unlab);
  const Matrix want_cov = p.b.matrix() * mix_cov * p.b.matrix();
  CHECK((t.mean - (p.b.matrix() * mix_mean + p.c)).norm() < 0.05 * (p.b.matrix() * mix_mean + p.c).norm());
  CHECK((t.cov - want_cov).norm() < 0.05 * want_cov.norm());

  Rng again(6);
  const DaProblem q = make_da_problem(again, d, 10000, 20000);
  CHECK(q.target_unlab.rows() == p.target_unlab.rows());
  CHECK(q.source.y == p.source.y);
}

TEST_CASE("training on raw source fails on the target") {
  // Accuracy pooled over 10 problem draws; single draws range widely.
  double total = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng(200 + static_cast<std::uint64_t>(seed));
    const DaProblem p = make_da_problem(rng, 10, 5000, 10);
    const LdaModel lda = lda_fit(p.source);
    const LabeledDataset target = draw_da_target(rng, p, 20000);
    total += error_rate(predict(lda, target.x), target.y);
  }
  CHECK(1.0 - total / 10.0 <= 0.6);
}

TEST_CASE("motion blur kernels") {
  const Matrix delta = motion_blur_kernel(1, 30.0);
  CHECK(delta.rows() == 1);
  CHECK(delta(0, 0) == 1.0);

  const Matrix row = motion_blur_kernel(3, 0.0);
  CHECK(row.rows() == 3);
  CHECK(row.cols() == 3);
  for (Index c = 0; c < 3; ++c) CHECK(row(1, c) == doctest::Approx(1.0 / 3.0));
  CHECK(row.row(0).sum() == 0.0);
  CHECK(row.row(2).sum() == 0.0);

  const Matrix vertical = motion_blur_kernel(3, 90.0);
  for (Index r = 0; r < 3; ++r) CHECK(vertical(r, 1) == doctest::Approx(1.0 / 3.0));

  for (int length : {1, 2, 5, 9, 15}) {
    for (double angle : {0.0, 17.0, 45.0, 90.0, 133.0}) {
      const Matrix k = motion_blur_kernel(length, angle);
      CHECK(std::abs(k.sum() - 1.0) <= 1e-12);
      CHECK(k.minCoeff() >= 0.0);
      CHECK(k.rows() % 2 == 1);
    }
  }
  CHECK_THROWS_AS(motion_blur_kernel(0, 0.0), Error);
}

TEST_CASE("blur_stack") {
  Rng rng(7);
  const Shape shape{6, 7};
  const SignalStack x(shape, standard_normal(rng, 3, shape.size()));
  CHECK((blur_stack(x, motion_blur_kernel(1, 0.0)).data() - x.data()).norm() < 1e-12);

  const SignalStack flat(shape, Matrix::Constant(2, shape.size(), 0.7));
  CHECK((blur_stack(flat, motion_blur_kernel(5, 45.0)).data() - flat.data()).cwiseAbs().maxCoeff() < 1e-12);

  // Direct circular convolution oracle.
  const Matrix k = motion_blur_kernel(5, 30.0);
  const SignalStack blurred = blur_stack(x, k);
  const Index cr = k.rows() / 2;
  const Index cc = k.cols() / 2;
  for (Index i = 0; i < x.n(); ++i) {
    for (Index r = 0; r < shape.rows; ++r) {
      for (Index c = 0; c < shape.cols; ++c) {
        double acc = 0.0;
        for (Index a = 0; a < k.rows(); ++a) {
          for (Index b = 0; b < k.cols(); ++b) {
            const Index rr = ((r - (a - cr)) % shape.rows + shape.rows) % shape.rows;
            const Index ccol = ((c - (b - cc)) % shape.cols + shape.cols) % shape.cols;
            acc += k(a, b) * x.data()(i, rr * shape.cols + ccol);
          }
        }
        CHECK(std::abs(blurred.data()(i, r * shape.cols + c) - acc) < 1e-12);
      }
    }
  }

  // Convolution theorem.
  const ComplexVector transfer = kernel_transfer(k, shape);
  const ComplexVector lhs = dft(Vector(blurred.data().row(0).transpose()), shape);
  const ComplexVector rhs = transfer.cwiseProduct(dft(Vector(x.data().row(0).transpose()), shape));
  CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());

  CHECK_THROWS_AS(blur_stack(SignalStack(Shape{2, 2}, Matrix::Zero(1, 4)), k), Error);
}

TEST_CASE("stationary image stacks") {
  Rng rng(8);
  const Shape shape{4, 4};
  CHECK(stationary_image_stack(rng, shape, Vector::Zero(16), 5).data().norm() == 0.0);

  const SignalStack flat = stationary_image_stack(rng, shape, Vector::Constant(16, 2.5), 10000);
  const Vector est = estimate_power_spectrum(flat, Vector::Zero(16));
  for (Index k = 0; k < 16; ++k) CHECK(std::abs(est(k) - 2.5) <= 0.25);
  const double pixel_var = flat.data().array().square().mean();
  CHECK(std::abs(pixel_var - 2.5) <= 0.25);

  Rng a(9);
  Rng b(9);
  const Vector spec = Vector::LinSpaced(16, 1.0, 1.0);
  CHECK(stationary_image_stack(a, shape, spec, 3).data() == stationary_image_stack(b, shape, spec, 3).data());

  Vector uneven = Vector::Ones(16);
  uneven(1) = 5.0;
  CHECK_THROWS_AS(stationary_image_stack(rng, shape, uneven, 2), Error);
}
