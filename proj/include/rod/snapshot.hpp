#pragma once

#include <cmath>
#include <complex>

#include "rod/linalg.hpp"

namespace rod {

/// Uniform space/time sampling. Coordinates are generated as
/// start + (end - start) * i / (count - 1) so that every consumer of a grid
/// reproduces the same doubles.
struct Grid {
  double x_start = 0.0;
  double x_end = 0.0;
  linalg::Index nx = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  linalg::Index nt = 0;  // number of samples, Nt + 1

  double x(linalg::Index i) const;
  double t(linalg::Index j) const;
  double dx() const;
  double dt() const;
  linalg::Vector x_grid() const;
  linalg::Vector t_grid() const;

  /// Same counts and endpoints within 1e-12 relative.
  bool matches(const Grid& other) const;
};

/// Field samples u(x_i, t_j), one column per time instant.
class SnapshotMatrix {
 public:
  SnapshotMatrix(linalg::Matrix values, const Grid& grid);

  /// Builds the grid from explicit coordinates, which must be strictly
  /// increasing and uniform to 1e-12 relative. A single time sample is allowed.
  static SnapshotMatrix from_coordinates(linalg::Matrix values, const linalg::Vector& x,
                                         const linalg::Vector& t);

  const linalg::Matrix& values() const { return values_; }
  const Grid& grid() const { return grid_; }
  linalg::Index rows() const { return values_.rows(); }
  linalg::Index cols() const { return values_.cols(); }
  double dx() const { return grid_.dx(); }
  double dt() const { return grid_.dt(); }

 private:
  linalg::Matrix values_;
  Grid grid_;
};

/// Rectangle-rule L2(D) inner product <f, g> = dx * sum f_i conj(g_i).
struct InnerProduct {
  double dx = 1.0;

  template <class A, class B>
  std::complex<double> operator()(const Eigen::MatrixBase<A>& f,
                                  const Eigen::MatrixBase<B>& g) const {
    // Eigen's dot conjugates its first argument.
    return dx * std::complex<double>(g.template cast<std::complex<double>>().dot(
                    f.template cast<std::complex<double>>()));
  }

  template <class A>
  double norm(const Eigen::MatrixBase<A>& f) const {
    return std::sqrt(dx) * f.norm();
  }
};

}  // namespace rod
