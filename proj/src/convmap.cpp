#include "monge/convmap.hpp"

#include <cmath>
#include <string>

#include "monge/error.hpp"

namespace monge {
namespace {

constexpr double kFilterImagTol = 1e-9;
constexpr double kApplyImagTol = 1e-8;
constexpr double kZeroSpectrumTol = 1e-14;

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

void check_length(const Vector& v, const Shape& shape, const char* what) {
  if (v.size() != shape.size()) {
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + " has " + std::to_string(v.size()) +
                                              " entries, shape needs " +
                                              std::to_string(shape.size()));
  }
}

}  // namespace

SignalStack::SignalStack(Shape shape, Matrix data) : shape_(shape), data_(std::move(data)) {
  if (shape_.rows < 1 || shape_.cols < 1) throw Error(ErrorCode::ShapeMismatch, "empty shape");
  if (data_.rows() < 1) throw Error(ErrorCode::InvalidArgument, "empty stack");
  if (data_.cols() != shape_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "stack rows do not match the sample shape");
  }
  if (!data_.allFinite()) throw Error(ErrorCode::NonFinite, "stack has non-finite entries");
}

SignalStack SignalStack::head(Index count) const {
  if (count < 1 || count > n()) throw Error(ErrorCode::InvalidArgument, "head count out of range");
  return SignalStack(shape_, data_.topRows(count));
}

SpectralMongeMap::SpectralMongeMap(Shape shape, Vector response, Vector mean1, Vector mean2,
                                   double alpha)
    : shape_(shape),
      response_(std::move(response)),
      mean1_(std::move(mean1)),
      mean2_(std::move(mean2)),
      alpha_(alpha) {
  check_length(response_, shape_, "response");
  check_length(mean1_, shape_, "source mean");
  check_length(mean2_, shape_, "target mean");
  check_alpha(alpha_);
  if (!response_.allFinite() || !mean1_.allFinite() || !mean2_.allFinite()) {
    throw Error(ErrorCode::NonFinite, "spectral map has non-finite entries");
  }
  if (response_.minCoeff() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "frequency response must be nonnegative");
  }
  // A real, even response induces a real spatial filter.
  const ComplexVector filter = idft(response_.cast<std::complex<double>>(), shape_);
  const double residue = filter.imag().cwiseAbs().maxCoeff();
  if (residue > kFilterImagTol * std::max(1.0, response_.maxCoeff())) {
    throw Error(ErrorCode::InvalidArgument,
                "frequency response is not symmetric; spatial filter would be complex");
  }
}

SpectralMongeMap SpectralMongeMap::identity(Shape shape) {
  return SpectralMongeMap(shape, Vector::Ones(shape.size()), Vector::Zero(shape.size()),
                          Vector::Zero(shape.size()));
}

Vector estimate_power_spectrum(const SignalStack& x, const Vector& mean) {
  check_length(mean, x.shape(), "mean");
  const Shape& shape = x.shape();
  Vector power = Vector::Zero(shape.size());
  for (Index i = 0; i < x.n(); ++i) {
    const Vector centered = x.data().row(i).transpose() - mean;
    power += dft(centered, shape).cwiseAbs2();
  }
  power /= static_cast<double>(x.n()) * static_cast<double>(shape.size());
  return power;
}

SpectralMongeMap spectral_map_from_spectra(Shape shape, const Vector& mean1,
                                           const Vector& spectrum1, const Vector& mean2,
                                           const Vector& spectrum2) {
  check_length(spectrum1, shape, "source spectrum");
  check_length(spectrum2, shape, "target spectrum");
  const double peak = spectrum1.maxCoeff();
  if (!(peak > 0.0) || spectrum1.minCoeff() <= kZeroSpectrumTol * peak) {
    throw Error(ErrorCode::ZeroSourceSpectrum, "source spectrum vanishes at some frequency");
  }
  if (spectrum2.minCoeff() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "target spectrum must be nonnegative");
  }
  Vector response = (spectrum2.array() / spectrum1.array()).sqrt().matrix();
  return SpectralMongeMap(shape, std::move(response), mean1, mean2);
}

SpectralMongeMap fit_conv(const SignalStack& xs, const SignalStack& xt, double alpha) {
  if (!(xs.shape() == xt.shape())) {
    throw Error(ErrorCode::ShapeMismatch, "source and target stacks have different shapes");
  }
  check_alpha(alpha);
  const Vector mean1 = xs.data().colwise().mean().transpose();
  const Vector mean2 = xt.data().colwise().mean().transpose();
  Vector d1 = estimate_power_spectrum(xs, mean1);
  Vector d2 = estimate_power_spectrum(xt, mean2);
  d1 = ((1.0 - alpha) * d1.array() + alpha).matrix();
  d2 = ((1.0 - alpha) * d2.array() + alpha).matrix();
  const SpectralMongeMap map = spectral_map_from_spectra(xs.shape(), mean1, d1, mean2, d2);
  return SpectralMongeMap(map.shape(), map.response(), map.mean1(), map.mean2(), alpha);
}

Vector apply_conv(const SpectralMongeMap& map, const Vector& x) {
  check_length(x, map.shape(), "input");
  const ComplexVector spectrum = dft(Vector(x - map.mean1()), map.shape());
  const ComplexVector filtered =
      idft(spectrum.cwiseProduct(map.response().cast<std::complex<double>>()), map.shape());
  const double residue = filtered.imag().cwiseAbs().maxCoeff();
  if (residue > kApplyImagTol * std::max(x.norm(), 1e-300)) {
    throw Error(ErrorCode::InvalidArgument, "convolution produced a complex output");
  }
  return map.mean2() + filtered.real();
}

Matrix map_rows(const SpectralMongeMap& map, const Matrix& rows) {
  if (rows.cols() != map.dim()) {
    throw Error(ErrorCode::DimMismatch, "sample dimension does not match the spectral map");
  }
  Matrix out(rows.rows(), rows.cols());
  for (Index i = 0; i < rows.rows(); ++i) {
    out.row(i) = apply_conv(map, Vector(rows.row(i).transpose())).transpose();
  }
  return out;
}

SignalStack apply_conv(const SpectralMongeMap& map, const SignalStack& x) {
  if (!(x.shape() == map.shape())) {
    throw Error(ErrorCode::ShapeMismatch, "stack shape does not match the spectral map");
  }
  return SignalStack(x.shape(), map_rows(map, x.data()));
}

Vector spatial_filter(const SpectralMongeMap& map) {
  const Shape& shape = map.shape();
  const ComplexVector filter = idft(map.response().cast<std::complex<double>>(), shape);
  Vector centered(shape.size());
  for (Index r = 0; r < shape.rows; ++r) {
    for (Index c = 0; c < shape.cols; ++c) {
      const Index rr = (r + shape.rows / 2) % shape.rows;
      const Index cc = (c + shape.cols / 2) % shape.cols;
      centered(rr * shape.cols + cc) = filter(r * shape.cols + c).real();
    }
  }
  return centered;
}

}  // namespace monge
