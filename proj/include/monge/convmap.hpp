#ifndef MONGE_CONVMAP_HPP
#define MONGE_CONVMAP_HPP

#include "monge/fft.hpp"
#include "monge/moments.hpp"

namespace monge {

/// A stack of n equally shaped signals or images; row i of `data` is sample
/// i flattened in row-major order.
class SignalStack {
 public:
  SignalStack(Shape shape, Matrix data);

  const Shape& shape() const noexcept { return shape_; }
  const Matrix& data() const noexcept { return data_; }
  Index n() const noexcept { return data_.rows(); }

  SignalStack head(Index count) const;
  SampleSet as_samples() const { return SampleSet(data_); }

 private:
  Shape shape_;
  Matrix data_;
};

/// Convolutional transport map x -> mean2 + F diag(response) F^* (x - mean1)
/// under circular boundary conditions.
class SpectralMongeMap {
 public:
  SpectralMongeMap(Shape shape, Vector response, Vector mean1, Vector mean2, double alpha = 0.0);

  const Shape& shape() const noexcept { return shape_; }
  const Vector& response() const noexcept { return response_; }
  const Vector& mean1() const noexcept { return mean1_; }
  const Vector& mean2() const noexcept { return mean2_; }
  double alpha() const noexcept { return alpha_; }
  Index dim() const noexcept { return shape_.size(); }

  static SpectralMongeMap identity(Shape shape);

 private:
  Shape shape_;
  Vector response_;
  Vector mean1_;
  Vector mean2_;
  double alpha_;
};

/// Averaged periodogram (1 / (n d)) sum_i |DFT(x_i - mean)|^2.
Vector estimate_power_spectrum(const SignalStack& x, const Vector& mean);

/// Map between stationary laws with known means and power spectra:
/// response = sqrt(spectrum2 / spectrum1).
SpectralMongeMap spectral_map_from_spectra(Shape shape, const Vector& mean1,
                                           const Vector& spectrum1, const Vector& mean2,
                                           const Vector& spectrum2);

/// Estimates means and spectra of both stacks, shrinks each spectrum as
/// (1 - alpha) D + alpha, and returns the per-frequency ratio of roots.
SpectralMongeMap fit_conv(const SignalStack& xs, const SignalStack& xt, double alpha);

Vector apply_conv(const SpectralMongeMap& map, const Vector& x);
Matrix map_rows(const SpectralMongeMap& map, const Matrix& rows);
SignalStack apply_conv(const SpectralMongeMap& map, const SignalStack& x);

/// Real-space impulse response with the zero offset moved to the grid
/// centre (index rows/2, cols/2), for display.
Vector spatial_filter(const SpectralMongeMap& map);

}  // namespace monge

#endif  // MONGE_CONVMAP_HPP
