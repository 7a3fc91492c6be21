#include "rod/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rod::empirical {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

FourierModes fourier_decomposition(const SnapshotMatrix& V) {
  const linalg::SvdFactors svd = linalg::svd_economy(V.values());
  const double root_dx = std::sqrt(V.dx());

  FourierModes out;
  out.sigma = svd.sigma;
  out.psi = svd.U / root_dx;
  out.coefficients = root_dx * (svd.U.transpose() * V.values());

  const double smax = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
  const double tol = static_cast<double>(std::max(V.rows(), V.cols())) *
                     std::numeric_limits<double>::epsilon() * smax;
  while (out.rank < svd.sigma.size() && svd.sigma(out.rank) > tol) ++out.rank;
  return out;
}

Matrix fourier_reconstruct(const FourierModes& f, std::optional<Index> terms) {
  const Index n = std::clamp<Index>(terms.value_or(f.psi.cols()), 0, f.psi.cols());
  return f.psi.leftCols(n) * f.coefficients.topRows(n);
}

CVector project(const CVector& phi, const Vector& u, const InnerProduct& ip) {
  if (phi.size() != u.size()) {
    throw std::invalid_argument("project: mode and data lengths differ");
  }
  const double uu = ip(u, u).real();
  if (!(uu > 0.0)) {
    throw std::invalid_argument("project: data column has zero norm");
  }
  return (ip(phi, u) / uu) * u.cast<Complex>();
}

double mean_projection_norm(const CMatrix& modes, const Matrix& V0, const InnerProduct& ip,
                            std::optional<Index> divisor) {
  if (modes.rows() != V0.rows()) {
    throw std::invalid_argument("mean_projection_norm: mode and data lengths differ");
  }
  const Index m = divisor.value_or(modes.cols());
  if (m < 1) {
    throw std::invalid_argument("mean_projection_norm: divisor must be positive");
  }
  // ||P_u phi||^2 = |<phi, u>|^2 / <u, u>.
  Vector uu(V0.cols());
  for (Index j = 0; j < V0.cols(); ++j) {
    uu(j) = ip.dx * V0.col(j).squaredNorm();
    if (!(uu(j) > 0.0)) {
      throw std::invalid_argument("mean_projection_norm: data column " + std::to_string(j) +
                                  " has zero norm");
    }
  }
  const CMatrix inner = ip.dx * (V0.transpose().cast<Complex>() * modes);  // <phi_i, u_j>
  double total = 0.0;
  for (Index i = 0; i < modes.cols(); ++i) {
    for (Index j = 0; j < V0.cols(); ++j) total += std::norm(inner(j, i)) / uu(j);
  }
  return total / static_cast<double>(m);
}

ProjectionComparison compare_projections(const CMatrix& rod_modes, const FourierModes& fourier,
                                         const Matrix& V0, const InnerProduct& ip,
                                         ComparisonBasis basis) {
  ProjectionComparison out;
  out.rho_rod = mean_projection_norm(rod_modes, V0, ip);
  if (basis == ComparisonBasis::published) {
    out.rho_fourier =
        mean_projection_norm(fourier.psi.cast<Complex>(), V0, ip, fourier.psi.rows());
  } else {
    const Index m = std::min(rod_modes.cols(), fourier.psi.cols());
    out.rho_fourier = mean_projection_norm(fourier.psi.leftCols(m).cast<Complex>(), V0, ip,
                                           rod_modes.cols());
  }
  out.dominates = out.rho_rod > out.rho_fourier;
  return out;
}

}  // namespace rod::empirical
