#include "monge/fft.hpp"

#include <unsupported/Eigen/FFT>

#include "monge/error.hpp"

namespace monge {
namespace {

using Complex = std::complex<double>;

// Applies a 1D transform along every row, then along every column.
ComplexVector transform_2d(const ComplexVector& x, const Shape& shape, bool forward) {
  if (x.size() != shape.size()) {
    throw Error(ErrorCode::ShapeMismatch, "signal length does not match its shape");
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  ComplexVector out = x;
  std::vector<Complex> in_buf;
  std::vector<Complex> out_buf;

  if (shape.cols > 1) {
    in_buf.resize(shape.cols);
    for (Index r = 0; r < shape.rows; ++r) {
      for (Index c = 0; c < shape.cols; ++c) in_buf[c] = out(r * shape.cols + c);
      if (forward) {
        fft.fwd(out_buf, in_buf);
      } else {
        fft.inv(out_buf, in_buf);
      }
      for (Index c = 0; c < shape.cols; ++c) out(r * shape.cols + c) = out_buf[c];
    }
  }
  if (shape.rows > 1) {
    in_buf.resize(shape.rows);
    for (Index c = 0; c < shape.cols; ++c) {
      for (Index r = 0; r < shape.rows; ++r) in_buf[r] = out(r * shape.cols + c);
      if (forward) {
        fft.fwd(out_buf, in_buf);
      } else {
        fft.inv(out_buf, in_buf);
      }
      for (Index r = 0; r < shape.rows; ++r) out(r * shape.cols + c) = out_buf[r];
    }
  }
  return out;
}

}  // namespace

ComplexVector dft(const ComplexVector& x, const Shape& shape) {
  return transform_2d(x, shape, true);
}

ComplexVector dft(const Vector& x, const Shape& shape) {
  return transform_2d(x.cast<Complex>(), shape, true);
}

ComplexVector idft(const ComplexVector& x, const Shape& shape) {
  ComplexVector out = transform_2d(x, shape, false);
  out /= static_cast<double>(shape.size());
  return out;
}

Index mirror_index(Index flat, const Shape& shape) {
  const Index r = flat / shape.cols;
  const Index c = flat % shape.cols;
  const Index mr = (shape.rows - r) % shape.rows;
  const Index mc = (shape.cols - c) % shape.cols;
  return mr * shape.cols + mc;
}

}  // namespace monge
