#include "rod/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rod {

using linalg::Index;
using linalg::Vector;

namespace {

double coordinate(double start, double end, Index n, Index i) {
  if (n <= 1) return start;
  return start + (end - start) * static_cast<double>(i) / static_cast<double>(n - 1);
}

bool close(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * std::max(scale, 1e-300);
}

void check_uniform(const Vector& c, const char* axis) {
  for (Index i = 1; i < c.size(); ++i) {
    if (!(c(i) > c(i - 1))) {
      throw std::invalid_argument(std::string(axis) + " grid is not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
  const Index n = c.size();
  const double scale = std::max({std::abs(c(0)), std::abs(c(n - 1)), c(n - 1) - c(0)});
  for (Index i = 0; i < n; ++i) {
    if (!close(c(i), coordinate(c(0), c(n - 1), n, i), scale)) {
      throw std::invalid_argument(std::string(axis) + " grid is not uniform at index " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

double Grid::x(Index i) const { return coordinate(x_start, x_end, nx, i); }
double Grid::t(Index j) const { return coordinate(t_start, t_end, nt, j); }
double Grid::dx() const { return nx > 1 ? (x_end - x_start) / static_cast<double>(nx - 1) : 0.0; }
double Grid::dt() const { return nt > 1 ? (t_end - t_start) / static_cast<double>(nt - 1) : 0.0; }

Vector Grid::x_grid() const {
  Vector v(nx);
  for (Index i = 0; i < nx; ++i) v(i) = x(i);
  return v;
}

Vector Grid::t_grid() const {
  Vector v(nt);
  for (Index j = 0; j < nt; ++j) v(j) = t(j);
  return v;
}

bool Grid::matches(const Grid& o) const {
  if (nx != o.nx || nt != o.nt) return false;
  const double xs = std::max({std::abs(x_start), std::abs(x_end), 1e-300});
  const double ts = std::max({std::abs(t_start), std::abs(t_end), 1e-300});
  return close(x_start, o.x_start, xs) && close(x_end, o.x_end, xs) &&
         close(t_start, o.t_start, ts) && close(t_end, o.t_end, ts);
}

SnapshotMatrix::SnapshotMatrix(linalg::Matrix values, const Grid& grid)
    : values_(std::move(values)), grid_(grid) {
  linalg::require_valid(values_, "snapshot matrix");
  if (grid_.nx != values_.rows() || grid_.nt != values_.cols()) {
    throw std::invalid_argument("snapshot matrix: grid is " + std::to_string(grid_.nx) + "x" +
                                std::to_string(grid_.nt) + " but values are " +
                                std::to_string(values_.rows()) + "x" +
                                std::to_string(values_.cols()));
  }
  if (grid_.nx < 2 || !(grid_.x_end > grid_.x_start)) {
    throw std::invalid_argument("snapshot matrix: need at least two increasing x coordinates");
  }
  if (grid_.nt > 1 && !(grid_.t_end > grid_.t_start)) {
    throw std::invalid_argument("snapshot matrix: time grid is not increasing");
  }
}

SnapshotMatrix SnapshotMatrix::from_coordinates(linalg::Matrix values, const Vector& x,
                                                const Vector& t) {
  if (x.size() < 2 || t.size() < 1) {
    throw std::invalid_argument("snapshot matrix: need >= 2 x coordinates and >= 1 time");
  }
  check_uniform(x, "x");
  if (t.size() > 1) check_uniform(t, "t");
  Grid g;
  g.x_start = x(0);
  g.x_end = x(x.size() - 1);
  g.nx = x.size();
  g.t_start = t(0);
  g.t_end = t(t.size() - 1);
  g.nt = t.size();
  return SnapshotMatrix(std::move(values), g);
}

}  // namespace rod
