#pragma once

#include "rod/linalg.hpp"
#include "rod/snapshot.hpp"

/// Exact viscous Burgers benchmark
///   u_t + (u^2 / 2)_x = nu u_xx,   u(x, 0) = -sin(pi x),   u(0, t) = u(L, t) = 0,
/// solved through the Cole-Hopf substitution u = -2 nu phi_x / phi and
/// evaluated with Gauss-Hermite quadrature.
namespace rod::burgers {

struct QuadratureRule {
  int order = 0;
  linalg::Vector nodes;    // ascending roots of H_n
  linalg::Vector weights;  // positive, sum to sqrt(pi)
};

/// n-point rule for the weight exp(-z^2), built with Golub-Welsch: nodes are
/// the eigenvalues of the Jacobi matrix with off-diagonal sqrt(i/2) and
/// w_i = sqrt(pi) * v_i(0)^2. Valid for 1 <= n <= 500.
QuadratureRule gauss_hermite(int n);

/// Heat-equation initial datum exp(1/(2 nu pi)) exp(-cos(pi x)/(2 nu pi)).
double phi0(double x, double nu);

struct BurgersConfig {
  double length = 2.0;
  double final_time = 3.0;
  double nu = 1e-2;
  linalg::Index grid_points = 101;
  double dt = 0.01;
  int quad_order = 100;

  /// Throws std::invalid_argument naming the offending parameter.
  void validate() const;
  double dx() const { return length / static_cast<double>(grid_points - 1); }
  /// Nt + 1; final_time must be an integer multiple of dt.
  linalg::Index time_samples() const;
  Grid grid() const;
};

/// Below this time the initial condition is returned directly.
inline constexpr double kInitialTimeEpsilon = 1e-12;

/// Cole-Hopf solution at (x, t):
///   u = sum w_i 4 nu z_i g(z_i) / sum w_i sqrt(4 nu t) g(z_i),
///   g(z) = exp(-cos(pi (x - z sqrt(4 nu t))) / (2 nu pi)),
/// with the largest exponent factored out of both sums.
double exact_u(double x, double t, const BurgersConfig& cfg, const QuadratureRule& rule);

/// Nx x (Nt + 1) snapshots, column j = u(., j dt).
SnapshotMatrix generate_snapshots(const BurgersConfig& cfg);

}  // namespace rod::burgers
