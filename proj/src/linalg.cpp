#include "rod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rod::linalg {
namespace {

double phase_abs(double v) { return std::abs(v); }
double phase_abs(const Complex& v) { return std::abs(v); }

// Unit-modulus factor that rotates v onto the nonnegative real axis.
double unit_phase(double v) { return v < 0.0 ? -1.0 : 1.0; }
double conj_phase(double p) { return p; }
Complex conj_phase(const Complex& p) { return std::conj(p); }
Complex unit_phase(const Complex& v) {
  const double r = std::abs(v);
  return r == 0.0 ? Complex(1.0, 0.0) : v / r;
}

template <class MatrixType>
QrFactors<MatrixType> householder_qr(const MatrixType& A) {
  require_valid(A, "qr_factor");
  const Index m = A.rows();
  const Index n = A.cols();
  if (m < n) {
    throw LinalgError("qr_factor: requires rows >= cols");
  }
  Eigen::HouseholderQR<MatrixType> qr(A);
  QrFactors<MatrixType> out;
  out.Q = qr.householderQ() * MatrixType::Identity(m, n);
  out.R = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();

  const double scale = A.norm();
  for (Index i = 0; i < n; ++i) {
    const auto p = unit_phase(out.R(i, i));
    // R <- diag(conj p) R keeps Q R invariant when Q <- Q diag(p).
    out.R.row(i) *= conj_phase(p);
    out.Q.col(i) *= p;
    if (phase_abs(out.R(i, i)) <= 1e-12 * scale || scale == 0.0) {
      out.rank_deficient = true;
    }
  }
  return out;
}

template <class MatrixType>
LeastSquares<MatrixType> svd_solve(const MatrixType& A, const MatrixType& B) {
  require_valid(A, "least_squares (A)");
  require_valid(B, "least_squares (B)");
  if (A.rows() != B.rows()) {
    throw LinalgError("least_squares: A and B row counts differ");
  }
  Eigen::JacobiSVD<MatrixType> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cutoff = 1e-12 * smax;

  LeastSquares<MatrixType> out;
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  out.rank = rank;
  out.rank_deficient = rank < s.size();
  out.condition = (rank == s.size() && rank > 0 && s(rank - 1) > 0.0)
                      ? smax / s(rank - 1)
                      : std::numeric_limits<double>::infinity();

  const auto U = svd.matrixU().leftCols(rank);
  const auto V = svd.matrixV().leftCols(rank);
  MatrixType coeff = U.adjoint() * B;
  for (Index i = 0; i < rank; ++i) coeff.row(i) /= s(i);
  out.X = V * coeff;
  return out;
}

}  // namespace

QrFactors<Matrix> qr_factor(const Matrix& A) { return householder_qr(A); }
QrFactors<CMatrix> qr_factor(const CMatrix& A) { return householder_qr(A); }

SvdFactors svd_economy(const Matrix& A) {
  require_valid(A, "svd_economy");
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw LinalgError("svd_economy: Jacobi sweeps did not converge");
  }
  SvdFactors out;
  out.U = svd.matrixU();
  out.sigma = svd.singularValues();
  out.W = svd.matrixV();
  out.rank_used = out.sigma.size();
  return out;
}

EigenPairs eig_general(const Matrix& S) {
  require_valid(S, "eig_general");
  if (S.rows() != S.cols()) {
    throw LinalgError("eig_general: matrix is not square");
  }
  const Index n = S.rows();
  Eigen::EigenSolver<Matrix> solver;
  solver.setMaxIterations(static_cast<Index>(100) * n);
  solver.compute(S, true);
  if (solver.info() != Eigen::Success) {
    throw LinalgError("eig_general: shifted QR iteration did not converge within 100*n steps");
  }
  const CVector raw_values = solver.eigenvalues();
  const CMatrix raw_vectors = solver.eigenvectors();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Complex& la = raw_values(a);
    const Complex& lb = raw_values(b);
    if (std::abs(la) != std::abs(lb)) return std::abs(la) > std::abs(lb);
    if (la.real() != lb.real()) return la.real() > lb.real();
    return la.imag() > lb.imag();
  });

  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  const CMatrix Sc = S.cast<Complex>();
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = raw_values(src);
    CVector v = raw_vectors.col(src);
    const double nv = v.norm();
    if (nv > 0.0) v /= nv;
    out.vectors.col(j) = v;
    const double r = (Sc * v - out.values(j) * v).norm();
    out.max_residual = std::max(out.max_residual, r);
  }
  return out;
}

SymmetricEigen eig_sym_tridiag(const Vector& diag, const Vector& offdiag) {
  const Index n = diag.size();
  if (n < 1) {
    throw LinalgError("eig_sym_tridiag: empty diagonal");
  }
  if (offdiag.size() != n - 1) {
    throw LinalgError("eig_sym_tridiag: off-diagonal length must be diagonal length - 1");
  }
  if (!diag.allFinite() || !offdiag.allFinite()) {
    throw LinalgError("eig_sym_tridiag: non-finite entries");
  }
  SymmetricEigen out;
  if (n == 1) {
    out.values = diag;
    out.vectors = Matrix::Identity(1, 1);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw LinalgError("eig_sym_tridiag: implicit QL iteration did not converge");
  }
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

LeastSquares<Matrix> least_squares(const Matrix& A, const Matrix& B) { return svd_solve(A, B); }
LeastSquares<CMatrix> least_squares(const CMatrix& A, const CMatrix& B) {
  return svd_solve(A, B);
}

}  // namespace rod::linalg
