#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rod/burgers.hpp"
#include "rod/metrics.hpp"
#include "rod/rod.hpp"

using namespace rod;
using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

namespace {

SnapshotMatrix snapshots(Matrix values, double length = 1.0) {
  Grid g;
  g.x_start = 0.0;
  g.x_end = length;
  g.nx = values.rows();
  g.t_start = 0.0;
  g.t_end = 0.1 * static_cast<double>(values.cols() - 1);
  g.nt = values.cols();
  return SnapshotMatrix(std::move(values), g);
}

// z_{k+1} = A z_k embedded in R^nx through an orthonormal B.
Matrix linear_dynamics(const Matrix& A, const Matrix& B, const Vector& z0, int steps) {
  Matrix out(B.rows(), steps + 1);
  Vector z = z0;
  for (int j = 0; j <= steps; ++j) {
    out.col(j) = B * z;
    z = A * z;
  }
  return out;
}

const SnapshotMatrix& burgers_data() {
  static const SnapshotMatrix V = burgers::generate_snapshots({});
  return V;
}

double l2_norm(const CVector& v, double dx) { return std::sqrt(dx) * v.norm(); }

}  // namespace

TEST_CASE("shift_split: overlapping windows") {
  Matrix v(2, 3);
  v << 1, 2, 3, 4, 5, 6;
  const auto [v0, v1] = shift_split(snapshots(v));
  CHECK(v0.cols() == 2);
  CHECK(v1.cols() == 2);
  CHECK(v0(0, 0) == 1);
  CHECK(v0(1, 1) == 5);
  CHECK(v1(0, 0) == 2);
  CHECK(v1(1, 1) == 6);
  CHECK((v1.col(0).array() == v0.col(1).array()).all());
  CHECK_THROWS_AS(shift_split(snapshots(Matrix::Ones(4, 1))), std::invalid_argument);
}

TEST_CASE("shift_split: Burgers windows are 101x300") {
  const auto [v0, v1] = shift_split(burgers_data());
  CHECK(v0.rows() == 101);
  CHECK(v0.cols() == 300);
  CHECK(v1.rows() == 101);
  CHECK(v1.cols() == 300);
}

TEST_CASE("propagator: steady and uniformly scaled dynamics") {
  std::mt19937_64 gen(3);
  const Matrix v0 = oracle::random_matrix(20, 4, gen) * oracle::random_matrix(4, 15, gen);
  const auto svd = linalg::svd_economy(v0);
  linalg::SvdFactors f = svd;
  f.U = svd.U.leftCols(4);
  f.W = svd.W.leftCols(4);
  f.sigma = svd.sigma.head(4);

  const auto steady = linalg::eig_general(propagator(f, v0).S);
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(steady.values(i) - 1.0) < 1e-10);

  const auto twice = linalg::eig_general(propagator(f, 2.0 * v0).S);
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(twice.values(i) - 2.0) < 1e-10);
}

TEST_CASE("propagator: near-zero directions are truncated") {
  std::mt19937_64 gen(4);
  const Matrix v0 = oracle::random_matrix(10, 2, gen) * oracle::random_matrix(2, 8, gen);
  const auto svd = linalg::svd_economy(v0);
  const auto p = propagator(svd, v0);
  CHECK(p.retained == 2);
  CHECK(p.S.rows() == 2);
}

TEST_CASE("fit: recovers the spectrum of a known 2x2 linear system") {
  Matrix A(2, 2);
  A << 0.9, -0.2, 0.1, 0.8;
  std::mt19937_64 gen(5);
  const Matrix B = oracle::orthonormal_columns(20, 2, gen);
  Vector z0(2);
  z0 << 1.0, 0.5;
  const auto V = snapshots(linear_dynamics(A, B, z0, 30));
  const FitResult r = fit(V, FitOptions{.rank = 2, .seed = 1});

  // det(zI - A) = z^2 - tr z + det
  const double tr = A.trace(), det = A.determinant();
  const Complex disc = std::sqrt(Complex(tr * tr - 4.0 * det));
  const Complex l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  const auto& ev = r.model.eigenvalues;
  REQUIRE(ev.size() == 2);
  CHECK(std::min(std::abs(ev(0) - l1), std::abs(ev(0) - l2)) < 1e-8);
  CHECK(std::min(std::abs(ev(1) - l1), std::abs(ev(1) - l2)) < 1e-8);
  CHECK(std::abs(ev(0) - std::conj(ev(1))) < 1e-10);
  CHECK(r.diagnostics.imaginary_residue <= 1e-6 * V.values().cwiseAbs().maxCoeff());
  CHECK((reconstruct(r.model).values() - V.values()).norm() <= 1e-9 * V.values().norm());
}

TEST_CASE("rod_modes: identity eigenvectors rescale U") {
  std::mt19937_64 gen(6);
  linalg::SvdFactors f;
  f.U = oracle::orthonormal_columns(12, 3, gen);
  f.sigma = Vector::Ones(3);
  f.W = oracle::orthonormal_columns(5, 3, gen);
  linalg::EigenPairs e;
  e.values = CVector::Ones(3);
  e.vectors = CMatrix::Identity(3, 3);
  const InnerProduct ip{0.25};
  const auto m = rod_modes(f, e, ip);
  REQUIRE(m.modes.cols() == 3);
  CHECK((m.modes - f.U.cast<Complex>() / std::sqrt(0.25)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(m.dropped.empty());
}

TEST_CASE("rod_modes: symmetric propagator gives an orthonormal mode set") {
  std::mt19937_64 gen(7);
  linalg::SvdFactors f;
  f.U = oracle::orthonormal_columns(30, 5, gen);
  f.sigma = Vector::Ones(5);
  f.W = oracle::orthonormal_columns(8, 5, gen);
  const Matrix a = oracle::random_matrix(5, 5, gen);
  const auto e = linalg::eig_general(a + a.transpose());
  const InnerProduct ip{0.1};
  const auto m = rod_modes(f, e, ip);
  CHECK(gram_deviation(m.modes, ip) < 1e-8);
}

TEST_CASE("rod_modes: zero combination is dropped") {
  linalg::SvdFactors f;
  f.U = Matrix::Identity(4, 2);
  f.sigma = Vector::Ones(2);
  f.W = Matrix::Identity(3, 2);
  linalg::EigenPairs e;
  e.values = CVector::Ones(2);
  e.vectors = CMatrix::Zero(2, 2);
  e.vectors(0, 0) = 1.0;
  const auto m = rod_modes(f, e, InnerProduct{1.0});
  CHECK(m.modes.cols() == 1);
  REQUIRE(m.dropped.size() == 1);
  CHECK(m.dropped[0] == 1);
}

TEST_CASE("amplitudes: basis column and projection oracle") {
  std::mt19937_64 gen(8);
  const double dx = 1.0 / 15.0;
  const InnerProduct ip{dx};
  const CMatrix phi = (oracle::orthonormal_columns(16, 3, gen) / std::sqrt(dx)).cast<Complex>();

  Matrix first = oracle::random_matrix(16, 3, gen);
  first.col(0) = phi.col(0).real();
  const auto a1 = amplitudes(phi, snapshots(first), ip);
  CHECK(std::abs(a1.amplitudes(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(a1.amplitudes(1, 0)) < 1e-12);
  CHECK(std::abs(a1.amplitudes(2, 0)) < 1e-12);

  const auto V = snapshots(oracle::random_matrix(16, 9, gen));
  const auto fitted = amplitudes(phi, V, ip);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 9; ++j) {
      const Complex direct = ip(V.values().col(j), phi.col(i));
      CHECK(std::abs(fitted.amplitudes(i, j) - direct) < 1e-10);
    }
  }
  CHECK(fitted.condition == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("amplitudes: ill-conditioned modes fall back to minimum norm") {
  CMatrix phi(4, 2);
  phi.col(0) << 1, 1, 1, 1;
  phi.col(1) = phi.col(0);
  const auto V = snapshots(Matrix::Ones(4, 3));
  const auto a = amplitudes(phi, V, InnerProduct{1.0});
  CHECK(a.ill_conditioned);
  CHECK(std::abs(a.amplitudes(0, 0) - a.amplitudes(1, 0)) < 1e-12);
  CHECK(std::abs(a.amplitudes(0, 0) - 0.5) < 1e-12);
}

TEST_CASE("fit: geometric rank-1 snapshots") {
  const int nx = 25;
  Vector u0(nx);
  for (int i = 0; i < nx; ++i) u0(i) = std::sin(0.3 * i) + 0.1 * i;
  const double c = 0.93;
  Matrix v(nx, 12);
  for (int j = 0; j < 12; ++j) v.col(j) = std::pow(c, j) * u0;
  const auto V = snapshots(v);
  const RodModel m = fit(V, 1, 0);
  REQUIRE(m.rank == 1);
  CHECK(std::abs(m.eigenvalues(0) - c) < 1e-12);
  const double dx = V.dx();
  CHECK(l2_norm(m.modes.col(0), dx) == doctest::Approx(1.0).epsilon(1e-12));
  // mode = phase * u0 / ||u0||
  const CVector target = u0.cast<Complex>() / (std::sqrt(dx) * u0.norm());
  Index row = 0;
  target.cwiseAbs().maxCoeff(&row);
  const Complex phase = m.modes(row, 0) / target(row);
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
  CHECK((m.modes.col(0) - phase * target).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((reconstruct(m).values() - v).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("fit: full-rank reproduction of noiseless low-rank data") {
  std::mt19937_64 gen(9);
  for (const int r : {3, 8, 20}) {
    Matrix A = oracle::random_matrix(r, r, gen);
    A /= 1.05 * std::sqrt(oracle::jacobi_eigenvalues(A.transpose() * A).maxCoeff());
    const Matrix B = oracle::orthonormal_columns(40, r, gen);
    const auto V = snapshots(linear_dynamics(A, B, oracle::random_matrix(r, 1, gen), 60));
    const RodModel m = fit(V, r, 3);
    CHECK((reconstruct(m).values() - V.values()).norm() <= 1e-6 * V.values().norm());
  }

  // rank = min(Nx, Nt)
  const Matrix A = 0.5 * oracle::orthonormal_columns(6, 6, gen);
  const auto V = snapshots(linear_dynamics(A + 0.4 * Matrix::Identity(6, 6),
                                           Matrix::Identity(6, 6),
                                           oracle::random_matrix(6, 1, gen), 14));
  const RodModel m = fit(V, 6, 0);
  CHECK((reconstruct(m).values() - V.values()).norm() <= 1e-6 * V.values().norm());
}

TEST_CASE("fit: Burgers rank 10 model invariants") {
  const auto& V = burgers_data();
  const FitResult r = fit(V, FitOptions{.rank = 10, .seed = 42});
  const RodModel& m = r.model;
  CHECK(m.rank == 10);
  CHECK(m.modes.rows() == 101);
  CHECK(m.amplitudes.cols() == 301);
  CHECK(m.seed == 42);
  CHECK(m.grid.matches(V.grid()));
  for (Index j = 0; j < m.rank; ++j) {
    CHECK(std::abs(l2_norm(m.modes.col(j), V.dx()) - 1.0) <= 1e-10);
  }
  CHECK(r.diagnostics.eigen_residual <= 1e-8 * r.diagnostics.propagator_norm);
  CHECK(r.diagnostics.imaginary_residue <= 1e-6);
  CHECK(r.diagnostics.gram_deviation > 0.0);
  CHECK(metrics::absolute_error(V, reconstruct(m)) <= 1e-5);
  CHECK(metrics::correlation(V, reconstruct(m)) >= 0.9999);
}

TEST_CASE("fit: error is monotone in rank on Burgers data") {
  const auto& V = burgers_data();
  for (const std::uint64_t seed : {0ULL, 42ULL}) {
    double previous = 1e300;
    for (Index k = 1; k <= 16; ++k) {
      const double e = metrics::absolute_error(V, reconstruct(fit(V, k, seed)));
      CHECK_MESSAGE(e <= previous + 1e-9, "rank " << k << " seed " << seed);
      previous = e;
    }
  }
}

TEST_CASE("fit: scaling equivariance") {
  const auto& V = burgers_data();
  const double c = 3.7;
  const RodModel m1 = fit(V, 6, 5);
  const RodModel m2 = fit(SnapshotMatrix(c * V.values(), V.grid()), 6, 5);
  REQUIRE(m1.rank == m2.rank);
  for (Index j = 0; j < m1.rank; ++j) {
    Index row = 0;
    m1.modes.col(j).cwiseAbs().maxCoeff(&row);
    const Complex phase = m2.modes(row, j) / m1.modes(row, j);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-8);
    CHECK((m2.modes.col(j) - phase * m1.modes.col(j)).cwiseAbs().maxCoeff() < 1e-8);
    const CMatrix scaled = c * m1.amplitudes.row(j) / phase;
    CHECK((m2.amplitudes.row(j) - scaled).cwiseAbs().maxCoeff() <=
          1e-8 * c * m1.amplitudes.row(j).cwiseAbs().maxCoeff());
  }
}

TEST_CASE("fit: refit of its own reconstruction is stable") {
  const auto& V = burgers_data();
  const auto rec = reconstruct(fit(V, 8, 1));
  const auto again = reconstruct(fit(rec, 8, 1));
  CHECK((again.values() - rec.values()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fit: reorthonormalized modes") {
  const auto& V = burgers_data();
  FitOptions o;
  o.rank = 10;
  o.reorthonormalize_modes = true;
  const FitResult r = fit(V, o);
  CHECK(r.diagnostics.gram_deviation < 1e-10);
  CHECK(metrics::absolute_error(V, reconstruct(r.model)) <= 1e-5);
}

TEST_CASE("fit: errors carry the stage") {
  const auto V = snapshots(Matrix::Ones(5, 4));
  try {
    fit(V, 9, 0);
    FAIL("expected a StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "fit");
  }
  try {
    fit(snapshots(Matrix::Ones(5, 1)), 1, 0);
    FAIL("expected a StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "shift_split");
  }
}

TEST_CASE("fit: zero data stops at the propagator") {
  const auto V = snapshots(Matrix::Zero(6, 5));
  try {
    fit(V, FitOptions{.rank = 2});
    FAIL("expected a StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "propagator");
    CHECK(std::string(e.what()) == "propagator: all singular values vanish");
  }
}

TEST_CASE("reconstruct: imaginary residue is checked") {
  RodModel m;
  m.grid = Grid{0.0, 1.0, 3, 0.0, 0.1, 2};
  m.modes = CMatrix::Constant(3, 1, Complex(0.0, 1.0));
  m.amplitudes = CMatrix::Ones(1, 2);
  m.eigenvalues = CVector::Ones(1);
  m.rank = 1;
  m.modes(0, 0) = Complex(1.0, 1.0);
  const auto rec = reconstruct_checked(m);
  CHECK(rec.residue_exceeded);
  CHECK(rec.imaginary_residue == 1.0);
  m.amplitudes = CMatrix::Ones(2, 2);
  CHECK_THROWS(reconstruct(m));
}
