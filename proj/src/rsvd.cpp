#include "rod/rsvd.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rod/random.hpp"

namespace rod {

using linalg::Index;
using linalg::Matrix;

Matrix gaussian_test_matrix(Index n_rows, Index k, std::uint64_t seed) {
  if (k < 1 || n_rows < k) {
    throw std::invalid_argument("gaussian_test_matrix: requires n_rows >= k >= 1");
  }
  GaussianStream stream(seed);
  Matrix M(n_rows, k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < n_rows; ++i) M(i, j) = stream.next();
  }
  return M;
}

void validate_rsvd_options(const RsvdOptions& opts, Index rows, Index cols) {
  const Index bound = std::min(rows, cols);
  if (opts.target_rank < 1 || opts.target_rank > bound) {
    throw std::invalid_argument("rsvd: target rank " + std::to_string(opts.target_rank) +
                                " outside [1, " + std::to_string(bound) + "]");
  }
  if (opts.oversampling < 0 || opts.power_iterations < 0) {
    throw std::invalid_argument("rsvd: oversampling and power iterations must be nonnegative");
  }
  if (opts.target_rank + opts.oversampling > bound) {
    throw std::invalid_argument("rsvd: target rank + oversampling exceeds " +
                                std::to_string(bound));
  }
}

RsvdResult rsvd(const Matrix& V0, const RsvdOptions& opts) {
  linalg::require_valid(V0, "rsvd");
  validate_rsvd_options(opts, V0.rows(), V0.cols());

  const Index k = opts.target_rank;
  const Index width = k + opts.oversampling;
  RsvdResult out;

  const Matrix M = gaussian_test_matrix(V0.cols(), width, opts.seed);
  Matrix Q;
  if (V0.norm() == 0.0) {
    out.degenerate = true;
    Q = linalg::qr_factor(gaussian_test_matrix(V0.rows(), width, opts.seed)).Q;
  } else if (opts.orthonormalize_sample) {
    Q = linalg::qr_factor(Matrix(V0 * M)).Q;
    for (Index q = 0; q < opts.power_iterations; ++q) {
      const Matrix Z = linalg::qr_factor(Matrix(V0.transpose() * Q)).Q;
      Q = linalg::qr_factor(Matrix(V0 * Z)).Q;
    }
  } else {
    Q = V0 * M;
    for (Index q = 0; q < opts.power_iterations; ++q) {
      Q = V0 * (V0.transpose() * Q);
    }
  }

  const Matrix P = Q.transpose() * V0;
  const linalg::SvdFactors small = linalg::svd_economy(P);

  out.factors.U = (Q * small.U).leftCols(k);
  out.factors.sigma = small.sigma.head(k);
  out.factors.W = small.W.leftCols(k);
  out.factors.rank_used = k;
  return out;
}

}  // namespace rod
