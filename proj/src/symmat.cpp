#include "monge/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monge/error.hpp"

namespace monge {
namespace {

constexpr double kSpdSymmetryTol = 1e-10;
constexpr double kEigSymmetryTol = 1e-8;
constexpr double kClampTol = 1e-10;
constexpr double kInvSqrtMinRatio = 1e-14;

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimMismatch,
                "expected a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_finite(const Matrix& m) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
}

// Eigen returns ascending eigenvalues; flip to descending.
SymEig solve_symmetric(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFinite, "eigen solver did not converge");
  }
  SymEig out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix reconstruct(const Vector& values, const Matrix& vectors) {
  Matrix out = vectors * values.asDiagonal() * vectors.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

double symmetry_defect(const Matrix& m) {
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i + 1; j < m.cols(); ++j) {
      const double gap = std::abs(m(i, j) - m(j, i));
      const double scale = 1.0 + std::max(std::abs(m(i, j)), std::abs(m(j, i)));
      worst = std::max(worst, gap / scale);
    }
  }
  return worst;
}

SymEig sym_eig(const Matrix& m) {
  require_square(m);
  require_finite(m);
  const double defect = symmetry_defect(m);
  if (defect > kEigSymmetryTol) {
    throw Error(ErrorCode::NonSymmetric,
                "asymmetry " + std::to_string(defect) + " exceeds tolerance");
  }
  return solve_symmetric(0.5 * (m + m.transpose()));
}

SpdMatrix SpdMatrix::from(const Matrix& m) {
  require_square(m);
  require_finite(m);
  if (symmetry_defect(m) > kSpdSymmetryTol) {
    throw Error(ErrorCode::NonSymmetric, "matrix is not symmetric");
  }
  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFinite, "eigen solver did not converge");
  }
  const double lambda_min = solver.eigenvalues()(0);
  if (!(lambda_min > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(lambda_min) + " is not positive");
  }
  return SpdMatrix(std::move(sym));
}

SpdMatrix SpdMatrix::from_spectral(const Vector& values, const Matrix& vectors) {
  if (vectors.rows() != vectors.cols() || vectors.cols() != values.size() || values.size() == 0) {
    throw Error(ErrorCode::DimMismatch, "eigenpairs have inconsistent sizes");
  }
  if (!values.allFinite() || !vectors.allFinite()) {
    throw Error(ErrorCode::NonFinite, "eigenpairs have non-finite entries");
  }
  if (!(values.minCoeff() > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "non-positive eigenvalue");
  }
  return SpdMatrix(reconstruct(values, vectors));
}

SpdMatrix SpdMatrix::identity(Index dim) {
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "dimension must be positive");
  return SpdMatrix(Matrix::Identity(dim, dim));
}

SpdMatrix SpdMatrix::diagonal(const Vector& values) {
  if (values.size() == 0) throw Error(ErrorCode::DimMismatch, "empty diagonal");
  if (!values.allFinite()) throw Error(ErrorCode::NonFinite, "non-finite diagonal");
  if (!(values.minCoeff() > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "non-positive diagonal entry");
  }
  return SpdMatrix(values.asDiagonal().toDenseMatrix());
}

SymEig SpdMatrix::eig() const { return solve_symmetric(m_); }

SpdMatrix SpdMatrix::inverse() const {
  const SymEig e = eig();
  return from_spectral(e.values.cwiseInverse(), e.vectors);
}

SpdMatrix spd_sqrt(const SpdMatrix& m) {
  const SymEig e = m.eig();
  return SpdMatrix::from_spectral(e.values.cwiseSqrt(), e.vectors);
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& m) {
  const SymEig e = m.eig();
  const double ratio = e.values(e.values.size() - 1) / e.values(0);
  if (ratio < kInvSqrtMinRatio) {
    throw Error(ErrorCode::IllConditioned,
                "lambda_min/lambda_max = " + std::to_string(ratio) + "; consider shrinkage");
  }
  return SpdMatrix::from_spectral(e.values.cwiseSqrt().cwiseInverse(), e.vectors);
}

Matrix psd_sqrt(const Matrix& m) {
  SymEig e = sym_eig(m);
  const double floor = kClampTol * std::max(e.values(0), 0.0);
  for (Index i = 0; i < e.values.size(); ++i) {
    double& v = e.values(i);
    if (v < -floor) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "eigenvalue " + std::to_string(v) + " is negative beyond tolerance");
    }
    v = std::max(v, 0.0);
  }
  return reconstruct(e.values.cwiseSqrt(), e.vectors);
}

SpdMatrix geometric_mean(const SpdMatrix& b, const SpdMatrix& c) {
  if (b.dim() != c.dim()) {
    throw Error(ErrorCode::DimMismatch, "geometric mean of matrices with different sizes");
  }
  // Evaluated in extended precision; the identities it must satisfy lose
  // roughly cond(B) digits in double.
  using WideMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using WideVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  auto wide_eig = [](const WideMatrix& m) {
    Eigen::SelfAdjointEigenSolver<WideMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NonFinite, "eigen solver did not converge");
    }
    return solver;
  };
  auto rebuild = [](const WideVector& values, const WideMatrix& vectors) {
    WideMatrix out = vectors * values.asDiagonal() * vectors.transpose();
    return WideMatrix(0.5L * (out + out.transpose()));
  };
  const auto be = wide_eig(b.matrix().cast<long double>());
  const WideVector root = be.eigenvalues().cwiseSqrt();
  const WideMatrix b_half = rebuild(root, be.eigenvectors());
  const WideMatrix b_inv_half = rebuild(root.cwiseInverse(), be.eigenvectors());
  WideMatrix inner = b_inv_half * c.matrix().cast<long double>() * b_inv_half;
  inner = 0.5L * (inner + inner.transpose());
  const auto ie = wide_eig(inner);
  WideVector inner_root = ie.eigenvalues();
  for (Index i = 0; i < inner_root.size(); ++i) inner_root(i) = std::sqrt(std::max(inner_root(i), 0.0L));
  const WideMatrix out = b_half * rebuild(inner_root, ie.eigenvectors()) * b_half;
  const Matrix narrow = (0.5L * (out + out.transpose())).cast<double>();
  return SpdMatrix::from(narrow);
}

SpdMatrix shrink(const Matrix& s, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  require_square(s);
  if (alpha == 1.0) return SpdMatrix::identity(s.rows());
  Matrix out = (1.0 - alpha) * s;
  out.diagonal().array() += alpha;
  return SpdMatrix::from(out);
}

}  // namespace monge
