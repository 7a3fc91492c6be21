#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

/// Dense kernels shared by the decomposition, quadrature and metric code.
///
/// All matrices are Eigen column-major dense storage. Every routine is a pure
/// function of its arguments.
namespace rod::linalg {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

/// Throws LinalgError naming `what` when `m` is empty or holds NaN/Inf.
template <class Derived>
void require_valid(const Eigen::DenseBase<Derived>& m, const std::string& what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw LinalgError(what + ": matrix must have at least one row and one column");
  }
  if (!m.allFinite()) {
    throw LinalgError(what + ": matrix contains non-finite entries");
  }
}

template <class MatrixType>
struct QrFactors {
  MatrixType Q;  // rows x cols, orthonormal columns
  MatrixType R;  // cols x cols, upper triangular, real nonnegative diagonal
  bool rank_deficient = false;
};

/// Householder QR of a tall matrix. The sign (phase) of each Q column is
/// fixed so that R has a real nonnegative diagonal. `rank_deficient` is set
/// when some |R(i,i)| falls below 1e-12 * ||A||_F.
QrFactors<Matrix> qr_factor(const Matrix& A);
QrFactors<CMatrix> qr_factor(const CMatrix& A);

struct SvdFactors {
  Matrix U;      // m x k
  Vector sigma;  // k, nonincreasing
  Matrix W;      // n x k
  Index rank_used = 0;
};

/// Economy SVD, A = U diag(sigma) W^T with k = min(rows, cols).
SvdFactors svd_economy(const Matrix& A);

struct EigenPairs {
  CVector values;
  CMatrix vectors;  // column i pairs with values(i), unit 2-norm
  double max_residual = 0.0;  // max_i ||S x_i - l_i x_i||_2
};

/// Eigen-decomposition of a real square matrix via Hessenberg reduction and
/// shifted QR. Values are ordered by decreasing modulus; conjugate pairs are
/// adjacent with the positive imaginary part first. Throws on
/// non-convergence within 100*n iterations.
EigenPairs eig_general(const Matrix& S);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthogonal
};

/// Symmetric tridiagonal eigenproblem (implicit-shift QL/QR).
SymmetricEigen eig_sym_tridiag(const Vector& diag, const Vector& offdiag);

template <class MatrixType>
struct LeastSquares {
  MatrixType X;
  double condition = 1.0;  // sigma_max / sigma_min of A, infinity when singular
  Index rank = 0;
  bool rank_deficient = false;
};

/// Minimum-norm least-squares solution of A X = B via the SVD pseudo-inverse.
/// Singular values at or below 1e-12 * sigma_max are treated as zero.
LeastSquares<Matrix> least_squares(const Matrix& A, const Matrix& B);
LeastSquares<CMatrix> least_squares(const CMatrix& A, const CMatrix& B);

}  // namespace rod::linalg
