#include "rod/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rod::burgers {

using linalg::Index;
using linalg::Vector;

namespace {

// Orthonormal Hermite functions h_k(x) = psi_k(x) exp(-x^2/2) for k = n-1, n
// and the sum of h_k^2 over k < n.
struct HermiteTail {
  double prev = 0.0;
  double last = 0.0;
  double sum_sq = 0.0;
};

HermiteTail hermite_functions(int n, double x) {
  HermiteTail h;
  double p0 = 0.0;
  double p1 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    h.sum_sq += p1 * p1;
    const double p2 = std::sqrt(2.0 / (k + 1)) * x * p1 - std::sqrt(k / (k + 1.0)) * p0;
    p0 = p1;
    p1 = p2;
  }
  h.prev = p0;
  h.last = p1;
  return h;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1 || n > 500) {
    throw std::invalid_argument("gauss_hermite: order " + std::to_string(n) +
                                " outside [1, 500]");
  }
  const Vector diag = Vector::Zero(n);
  Vector off(n - 1);
  for (int i = 1; i < n; ++i) off(i - 1) = std::sqrt(0.5 * i);

  const auto eig = linalg::eig_sym_tridiag(diag, off);
  QuadratureRule rule;
  rule.order = n;
  rule.nodes = eig.values;
  rule.weights.resize(n);

  // Eigenvector weights carry absolute, not relative, accuracy. Polish each
  // node with Newton steps on h_n and take w = 1 / sum_k psi_k(x)^2, which
  // keeps the small outer weights accurate.
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes(i);
    for (int it = 0; it < 3; ++it) {
      const HermiteTail h = hermite_functions(n, x);
      // h_n' = sqrt(2n) h_{n-1} - x h_n, and h_n(x) = 0 at a root
      const double slope = std::sqrt(2.0 * n) * h.prev - x * h.last;
      if (slope == 0.0) break;
      const double step = h.last / slope;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes(i) = x;
    const HermiteTail h = hermite_functions(n, x);
    rule.weights(i) = h.sum_sq > 0.0 ? std::exp(-x * x) / h.sum_sq : 0.0;
  }

  // The rule is symmetric; enforce it so odd moments vanish exactly.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes(j) - rule.nodes(i));
    const double w = 0.5 * (rule.weights(i) + rule.weights(j));
    rule.nodes(i) = -x;
    rule.nodes(j) = x;
    rule.weights(i) = w;
    rule.weights(j) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

double phi0(double x, double nu) {
  const double c = 1.0 / (2.0 * nu * std::numbers::pi);
  return std::exp(c - c * std::cos(std::numbers::pi * x));
}

void BurgersConfig::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("length must be positive");
  }
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw std::invalid_argument("t-final must be positive");
  }
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw std::invalid_argument("nu must be positive");
  }
  if (grid_points < 2) {
    throw std::invalid_argument("grid-points must be at least 2");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("dt must be positive");
  }
  if (quad_order < 1 || quad_order > 500) {
    throw std::invalid_argument("quad-order must lie in [1, 500]");
  }
  time_samples();
}

Index BurgersConfig::time_samples() const {
  const double steps = final_time / dt;
  const double rounded = std::round(steps);
  if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument("t-final must be a positive integer multiple of dt");
  }
  return static_cast<Index>(rounded) + 1;
}

Grid BurgersConfig::grid() const {
  Grid g;
  g.x_start = 0.0;
  g.x_end = length;
  g.nx = grid_points;
  g.t_start = 0.0;
  g.nt = time_samples();
  g.t_end = dt * static_cast<double>(g.nt - 1);
  return g;
}

double exact_u(double x, double t, const BurgersConfig& cfg, const QuadratureRule& rule) {
  if (t < 0.0) {
    throw std::invalid_argument("exact_u: negative time");
  }
  if (t < kInitialTimeEpsilon) {
    return -std::sin(std::numbers::pi * x);
  }
  const double nu = cfg.nu;
  const double spread = std::sqrt(4.0 * nu * t);
  const double scale = 1.0 / (2.0 * nu * std::numbers::pi);
  const Index n = rule.nodes.size();

  Vector exponent(n);
  for (Index i = 0; i < n; ++i) {
    exponent(i) = -scale * std::cos(std::numbers::pi * (x - rule.nodes(i) * spread));
  }
  const double shift = exponent.maxCoeff();
  double num = 0.0;
  double den = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double g = rule.weights(i) * std::exp(exponent(i) - shift);
    num += 4.0 * nu * rule.nodes(i) * g;
    den += spread * g;
  }
  if (!(den > 1e-300)) {
    throw std::runtime_error("exact_u: quadrature denominator underflow");
  }
  return num / den;
}

SnapshotMatrix generate_snapshots(const BurgersConfig& cfg) {
  cfg.validate();
  const QuadratureRule rule = gauss_hermite(cfg.quad_order);
  const Grid grid = cfg.grid();
  linalg::Matrix values(grid.nx, grid.nt);
  for (Index j = 0; j < grid.nt; ++j) {
    const double t = grid.t(j);
    for (Index i = 0; i < grid.nx; ++i) values(i, j) = exact_u(grid.x(i), t, cfg, rule);
  }
  return SnapshotMatrix(std::move(values), grid);
}

}  // namespace rod::burgers
