#ifndef MONGE_SYMMAT_HPP
#define MONGE_SYMMAT_HPP

#include <Eigen/Dense>

namespace monge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Eigendecomposition of a symmetric matrix, eigenvalues in descending order
/// and eigenvectors stored as orthonormal columns.
struct SymEig {
  Vector values;
  Matrix vectors;
};

/// A symmetric positive-definite matrix. Instances can only be obtained
/// through validating factories, so holding one is proof of the invariant.
class SpdMatrix {
 public:
  /// Validates symmetry (|a_ij - a_ji| <= 1e-10 (1 + |a_ij|)), finiteness and
  /// a strictly positive smallest eigenvalue. The stored matrix is the
  /// symmetrized (M + M^T) / 2.
  static SpdMatrix from(const Matrix& m);

  /// Builds V diag(values) V^T; every value must be finite and > 0.
  static SpdMatrix from_spectral(const Vector& values, const Matrix& vectors);

  static SpdMatrix identity(Index dim);
  static SpdMatrix diagonal(const Vector& values);

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

  /// Descending eigenpairs; computed on demand.
  SymEig eig() const;
  SpdMatrix inverse() const;

 private:
  explicit SpdMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Throws NonFinite / NonSymmetric (tolerance 1e-8 relative) before solving.
SymEig sym_eig(const Matrix& m);

SpdMatrix spd_sqrt(const SpdMatrix& m);

/// Throws IllConditioned when lambda_min / lambda_max < 1e-14.
SpdMatrix spd_inv_sqrt(const SpdMatrix& m);

/// Square root of a symmetric positive semi-definite matrix. Eigenvalues in
/// [-1e-10 lambda_max, 0) are clamped to zero; anything more negative throws
/// NotPositiveDefinite.
Matrix psd_sqrt(const Matrix& m);

/// B # C = B^{1/2} (B^{-1/2} C B^{-1/2})^{1/2} B^{1/2}.
SpdMatrix geometric_mean(const SpdMatrix& b, const SpdMatrix& c);

/// (1 - alpha) S + alpha I, validated as SPD.
SpdMatrix shrink(const Matrix& s, double alpha);

/// Largest absolute asymmetry scaled by 1 + |entry|; used by the validators.
double symmetry_defect(const Matrix& m);

}  // namespace monge

#endif  // MONGE_SYMMAT_HPP
