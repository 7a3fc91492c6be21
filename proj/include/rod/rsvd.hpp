#pragma once

#include <cstdint>

#include "rod/linalg.hpp"

namespace rod {

struct RsvdOptions {
  linalg::Index target_rank = 1;
  std::uint64_t seed = 0;
  linalg::Index oversampling = 0;
  // Subspace iterations (V0 V0^T)^q applied to the sample before projection.
  linalg::Index power_iterations = 2;
  // QR of the sample before projecting. Off reproduces the bare five-step
  // recipe, whose U is generally not orthonormal.
  bool orthonormalize_sample = true;
};

struct RsvdResult {
  linalg::SvdFactors factors;
  bool degenerate = false;  // V0 was identically zero
};

/// n_rows x k matrix of i.i.d. N(0,1) entries drawn from GaussianStream(seed)
/// in column-major order, so the first j columns of a wider draw equal the
/// narrower draw with the same seed.
linalg::Matrix gaussian_test_matrix(linalg::Index n_rows, linalg::Index k, std::uint64_t seed);

/// Checks 1 <= k, k + oversampling <= min(rows, cols). Throws
/// std::invalid_argument describing the violated bound.
void validate_rsvd_options(const RsvdOptions& opts, linalg::Index rows, linalg::Index cols);

/// Rank-k randomized SVD of V0 (rows = space, cols = time):
///   M ~ N(0,1)^{cols x (k+p)},  Q = V0 M  [QR],  optional power iterations,
///   P = Q^T V0,  [T, S, W] = svd(P),  U = Q T,  truncate to k.
RsvdResult rsvd(const linalg::Matrix& V0, const RsvdOptions& opts);

}  // namespace rod
