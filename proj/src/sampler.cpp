#include "monge/sampler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "monge/error.hpp"

namespace monge {
namespace {

constexpr double kWishartRedrawRatio = 1e-12;
constexpr double kMeanVariance = 10.0;
constexpr double kDriftValue = 10.0;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

Rng Rng::substream(std::uint64_t index) const { return Rng(seed_ ^ splitmix64(index)); }

Matrix standard_normal(Rng& rng, Index n, Index d) {
  Matrix z(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) z(i, j) = rng.normal();
  }
  return z;
}

LabeledDataset::LabeledDataset(SampleSet x_, std::vector<int> y_)
    : x(std::move(x_)), y(std::move(y_)) {
  if (static_cast<Index>(y.size()) != x.n()) {
    throw Error(ErrorCode::DimMismatch, "label vector length differs from sample count");
  }
  for (int label : y) {
    if (label != 0 && label != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
  }
}

SampleSet gaussian(Rng& rng, const Vector& m, const SpdMatrix& s, Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  if (m.size() != s.dim()) throw Error(ErrorCode::DimMismatch, "mean and covariance sizes differ");
  const Matrix root = spd_sqrt(s).matrix();
  Matrix rows = standard_normal(rng, n, s.dim()) * root;
  rows.rowwise() += m.transpose();
  return SampleSet(std::move(rows));
}

SpdMatrix wishart_identity(Rng& rng, Index d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  for (;;) {
    const Matrix g = standard_normal(rng, d, d);
    const Matrix w = g * g.transpose();
    const SymEig e = sym_eig(w);
    if (e.values(d - 1) > kWishartRedrawRatio * e.values(0)) return SpdMatrix::from(w);
  }
}

GaussianPair make_gaussian_pair(Rng& rng, Index d) {
  const double scale = std::sqrt(kMeanVariance);
  Vector m1 = scale * standard_normal(rng, d, 1).col(0);
  SpdMatrix s1 = wishart_identity(rng, d);
  Vector m2 = scale * standard_normal(rng, d, 1).col(0);
  SpdMatrix s2 = wishart_identity(rng, d);
  return GaussianPair{std::move(m1), std::move(s1), std::move(m2), std::move(s2)};
}

Vector DaProblem::class_mean(int label) const {
  return label == 1 ? Vector::Ones(dim()) : Vector::Zero(dim());
}

LinearMongeMap DaProblem::truth() const {
  const Vector mixture = 0.5 * Vector::Ones(dim());
  return LinearMongeMap(mixture, b.matrix() * mixture + c, b);
}

namespace {

LabeledDataset draw_source_law(Rng& rng, const Index d, const Matrix& root, Index n) {
  std::vector<int> y(static_cast<std::size_t>(n));
  Matrix x(n, d);
  for (Index i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
    Vector z(d);
    for (Index j = 0; j < d; ++j) z(j) = rng.normal();
    x.row(i) = (root * z).transpose();
    if (y[static_cast<std::size_t>(i)] == 1) x.row(i).array() += 1.0;
  }
  return LabeledDataset(SampleSet(std::move(x)), std::move(y));
}

Matrix push_to_target(const DaProblem& p, const Matrix& x) {
  Matrix out = x * p.b.matrix();
  out.rowwise() += p.c.transpose();
  return out;
}

}  // namespace

DaProblem make_da_problem(Rng& rng, Index d, Index n_labeled, Index n_unsup) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "domain adaptation problem needs d >= 2");
  if (n_labeled < 1 || n_unsup < 1) throw Error(ErrorCode::InvalidArgument, "counts must be >= 1");
  SpdMatrix sigma0 = wishart_identity(rng, d);
  SpdMatrix b = wishart_identity(rng, d);
  Vector c = Vector::Zero(d);
  c.head((d + 1) / 2).setConstant(kDriftValue);
  Matrix root = spd_sqrt(sigma0).matrix();

  LabeledDataset source = draw_source_law(rng, d, root, n_labeled);
  SampleSet source_unlab = draw_source_law(rng, d, root, n_unsup).x;
  const SampleSet fresh = draw_source_law(rng, d, root, n_unsup).x;
  DaProblem p{std::move(sigma0), std::move(b), std::move(c), std::move(root),
              std::move(source), std::move(source_unlab), fresh};
  p.target_unlab = SampleSet(push_to_target(p, fresh.rows()));
  return p;
}

LabeledDataset draw_da_source(Rng& rng, const DaProblem& problem, Index n) {
  return draw_source_law(rng, problem.dim(), problem.sigma0_root, n);
}

LabeledDataset draw_da_target(Rng& rng, const DaProblem& problem, Index n) {
  LabeledDataset src = draw_source_law(rng, problem.dim(), problem.sigma0_root, n);
  return LabeledDataset(SampleSet(push_to_target(problem, src.x.rows())), std::move(src.y));
}

Matrix motion_blur_kernel(int length_px, double angle_deg) {
  if (length_px < 1) throw Error(ErrorCode::InvalidArgument, "blur length must be >= 1");
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double dx = std::cos(theta);
  const double dy = std::sin(theta);
  std::vector<std::pair<long, long>> pixels;
  long radius = 0;
  for (int i = 0; i < length_px; ++i) {
    const double t = static_cast<double>(i) - 0.5 * static_cast<double>(length_px - 1);
    // Image rows grow downwards, so a positive angle moves up.
    const long row = std::lround(-t * dy);
    const long col = std::lround(t * dx);
    radius = std::max({radius, std::abs(row), std::abs(col)});
    pixels.emplace_back(row, col);
  }
  const Index size = 2 * radius + 1;
  Matrix kernel = Matrix::Zero(size, size);
  for (const auto& [row, col] : pixels) kernel(row + radius, col + radius) += 1.0;
  kernel /= kernel.sum();
  return kernel;
}

ComplexVector kernel_transfer(const Matrix& kernel, const Shape& shape) {
  if (kernel.rows() % 2 == 0 || kernel.cols() % 2 == 0) {
    throw Error(ErrorCode::ShapeMismatch, "kernel must have odd side lengths");
  }
  if (kernel.rows() > shape.rows || kernel.cols() > shape.cols) {
    throw Error(ErrorCode::ShapeMismatch, "kernel does not fit in the image");
  }
  const Index cr = kernel.rows() / 2;
  const Index cc = kernel.cols() / 2;
  Vector padded = Vector::Zero(shape.size());
  for (Index a = 0; a < kernel.rows(); ++a) {
    for (Index b = 0; b < kernel.cols(); ++b) {
      const Index r = ((a - cr) % shape.rows + shape.rows) % shape.rows;
      const Index c = ((b - cc) % shape.cols + shape.cols) % shape.cols;
      padded(r * shape.cols + c) += kernel(a, b);
    }
  }
  return dft(padded, shape);
}

SignalStack blur_stack(const SignalStack& x, const Matrix& kernel) {
  const Shape& shape = x.shape();
  const ComplexVector transfer = kernel_transfer(kernel, shape);
  Matrix out(x.n(), shape.size());
  for (Index i = 0; i < x.n(); ++i) {
    const ComplexVector spectrum = dft(Vector(x.data().row(i).transpose()), shape);
    out.row(i) = idft(spectrum.cwiseProduct(transfer), shape).real().transpose();
  }
  return SignalStack(shape, std::move(out));
}

SignalStack stationary_image_stack(Rng& rng, Shape shape, const Vector& spectrum, Index n) {
  if (spectrum.size() != shape.size()) {
    throw Error(ErrorCode::ShapeMismatch, "spectrum does not match the image shape");
  }
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one image");
  if (!spectrum.allFinite() || spectrum.minCoeff() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "spectrum must be finite and nonnegative");
  }
  for (Index k = 0; k < shape.size(); ++k) {
    const double a = spectrum(k);
    const double b = spectrum(mirror_index(k, shape));
    if (std::abs(a - b) > 1e-12 * std::max({1.0, a, b})) {
      throw Error(ErrorCode::InvalidArgument, "spectrum must be even for real images");
    }
  }
  const ComplexVector gain = spectrum.cwiseSqrt().cast<std::complex<double>>();
  Matrix out(n, shape.size());
  for (Index i = 0; i < n; ++i) {
    Vector noise(shape.size());
    for (Index k = 0; k < shape.size(); ++k) noise(k) = rng.normal();
    out.row(i) = idft(dft(noise, shape).cwiseProduct(gain), shape).real().transpose();
  }
  return SignalStack(shape, std::move(out));
}

}  // namespace monge
