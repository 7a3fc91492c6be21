#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rod/linalg.hpp"
#include "rod/rsvd.hpp"
#include "rod/snapshot.hpp"

/// Randomized Orthogonal Decomposition: a twin data model
///   u(x, t_i) ~ sum_j a_j(t_i) phi_j(x)
/// whose shape modes phi_j combine the randomized left singular vectors of the
/// lagged snapshot matrix with the eigenvectors of the reduced propagator.
namespace rod {

/// A pipeline failure tagged with the stage that raised it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RodModel {
  linalg::CMatrix modes;       // Nx x N_DTM, unit L2(D) norm columns
  linalg::CMatrix amplitudes;  // N_DTM x (Nt + 1)
  linalg::CVector eigenvalues; // N_DTM
  linalg::Index rank = 0;
  std::uint64_t seed = 0;
  Grid grid;
};

struct FitOptions {
  linalg::Index rank = 10;
  std::uint64_t seed = 0;
  linalg::Index oversampling = 0;
  linalg::Index power_iterations = 2;
  bool orthonormalize_sample = true;
  bool reorthonormalize_modes = false;
};

struct FitDiagnostics {
  linalg::Index requested_rank = 0;
  linalg::Index truncated_directions = 0;  // near-zero singular values dropped
  std::vector<linalg::Index> dropped_modes;
  bool degenerate_input = false;
  double eigen_residual = 0.0;       // max ||S x - l x||_2
  double propagator_norm = 0.0;      // ||S||_F
  double koopman_residual = 0.0;     // ||V1 - U S U^T V0||_F / ||V1||_F
  double amplitude_condition = 1.0;
  double amplitude_residual = 0.0;   // ||Phi A - V||_F / ||V||_F
  double gram_deviation = 0.0;
  double imaginary_residue = 0.0;
  std::vector<std::string> warnings;
};

struct FitResult {
  RodModel model;
  FitDiagnostics diagnostics;
};

/// V0 = columns 0..Nt-1 and V1 = columns 1..Nt.
std::pair<linalg::Matrix, linalg::Matrix> shift_split(const SnapshotMatrix& V);

struct Propagator {
  linalg::Matrix S;             // r x r
  linalg::Index retained = 0;   // r, leading directions with sigma > 1e-12 sigma_max
};

/// S = U^T V1 W Sigma^{-1}, restricted to the singular directions that can be
/// inverted safely.
Propagator propagator(const linalg::SvdFactors& svd, const linalg::Matrix& V1);

struct ModeSet {
  linalg::CMatrix modes;
  std::vector<linalg::Index> kept;     // eigen-pair indices behind each column
  std::vector<linalg::Index> dropped;  // zero-norm combinations
};

/// phi_i = U X_i / ||U X_i||_{L2(D)}.
ModeSet rod_modes(const linalg::SvdFactors& svd, const linalg::EigenPairs& eig,
                  const InnerProduct& ip);

struct AmplitudeFit {
  linalg::CMatrix amplitudes;
  double condition = 1.0;
  double relative_residual = 0.0;
  bool ill_conditioned = false;  // condition > 1e12, minimum-norm solution used
};

/// Least-squares coefficients A minimising ||Phi A - V||_{L2(D)} over every
/// snapshot column. For orthonormal Phi this is the projection <u, phi_j>.
AmplitudeFit amplitudes(const linalg::CMatrix& modes, const SnapshotMatrix& V,
                        const InnerProduct& ip);

/// max |G - I| with G_ij = <phi_j, phi_i>.
double gram_deviation(const linalg::CMatrix& modes, const InnerProduct& ip);

/// Full pipeline: shift_split, rsvd, propagator, eig_general, rod_modes,
/// amplitudes. Failures are rethrown as StageError.
FitResult fit(const SnapshotMatrix& V, const FitOptions& options);
RodModel fit(const SnapshotMatrix& V, linalg::Index rank, std::uint64_t seed);

struct Reconstruction {
  SnapshotMatrix data;
  double imaginary_residue = 0.0;  // max |Im(Phi A)|
  bool residue_exceeded = false;   // above 1e-6 * max |Re(Phi A)|
};

Reconstruction reconstruct_checked(const RodModel& model);

/// Re(Phi A) on the model grid.
SnapshotMatrix reconstruct(const RodModel& model);

}  // namespace rod
