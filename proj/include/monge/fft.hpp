#ifndef MONGE_FFT_HPP
#define MONGE_FFT_HPP

#include <complex>
#include <vector>

#include "monge/symmat.hpp"

namespace monge {

/// Grid shape of a signal (rows == 1) or an image. Samples are stored
/// flattened in row-major order.
struct Shape {
  Index rows = 1;
  Index cols = 1;

  Index size() const noexcept { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

using ComplexVector = Eigen::VectorXcd;

/// Unnormalized forward 2D DFT: X[k] = sum_x x[n] exp(-2 pi i k.n / N).
ComplexVector dft(const ComplexVector& x, const Shape& shape);
ComplexVector dft(const Vector& x, const Shape& shape);

/// Inverse of dft (carries the 1/N factor).
ComplexVector idft(const ComplexVector& x, const Shape& shape);

/// Flat index of the frequency -k, i.e. ((-r) mod rows, (-c) mod cols).
Index mirror_index(Index flat, const Shape& shape);

}  // namespace monge

#endif  // MONGE_FFT_HPP
