#pragma once

#include <optional>

#include "rod/linalg.hpp"
#include "rod/snapshot.hpp"

/// Fourier empirical orthogonal decomposition (POD) baseline and the
/// projection-norm comparison between two mode bases.
namespace rod::empirical {

struct FourierModes {
  linalg::Matrix psi;           // Nx x min(Nx, Nt+1), unit L2(D) norm columns
  linalg::Vector sigma;         // singular values of V
  linalg::Matrix coefficients;  // a_i(t_j) = <u_j, psi_i>
  linalg::Index rank = 0;       // numerical rank of V
};

/// Economy SVD of V with modes rescaled to unit discrete L2(D) norm. All
/// min(Nx, Nt+1) columns are kept; columns past `rank` span directions the
/// data does not reach and contribute nothing to projections.
FourierModes fourier_decomposition(const SnapshotMatrix& V);

/// Sum_i a_i psi_i over the first `terms` modes (all when omitted).
linalg::Matrix fourier_reconstruct(const FourierModes& f,
                                   std::optional<linalg::Index> terms = std::nullopt);

/// P_u phi = (<phi, u> / <u, u>) u.
linalg::CVector project(const linalg::CVector& phi, const linalg::Vector& u,
                        const InnerProduct& ip);

/// (1 / divisor) sum_i sum_j ||P_{u_j} phi_i||^2 over mode columns i and data
/// columns j. The divisor defaults to the number of modes.
double mean_projection_norm(const linalg::CMatrix& modes, const linalg::Matrix& V0,
                            const InnerProduct& ip,
                            std::optional<linalg::Index> divisor = std::nullopt);

enum class ComparisonBasis {
  published,  // Fourier average taken over Nx modes
  same_rank,  // leading Fourier modes matching the ROD rank, averaged over that rank
};

struct ProjectionComparison {
  double rho_rod = 0.0;
  double rho_fourier = 0.0;
  bool dominates = false;  // rho_rod > rho_fourier
  double ratio() const { return rho_rod / rho_fourier; }
};

ProjectionComparison compare_projections(const linalg::CMatrix& rod_modes,
                                         const FourierModes& fourier, const linalg::Matrix& V0,
                                         const InnerProduct& ip,
                                         ComparisonBasis basis = ComparisonBasis::published);

}  // namespace rod::empirical
