#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rod/burgers.hpp"
#include "rod/rank_select.hpp"

using namespace rod;
using namespace rod::pareto;
using linalg::Index;
using linalg::Matrix;

namespace {

ParetoPoint point(Index rank, double j1, double j2) {
  ParetoPoint p;
  p.rank = rank;
  p.j1 = j1;
  p.j2 = j2;
  return p;
}

ParetoPoint failed(Index rank) {
  ParetoPoint p = point(rank, NAN, NAN);
  p.error = "propagator: all singular values vanish";
  return p;
}

SnapshotMatrix snapshots(Matrix values) {
  Grid g{0.0, 1.0, values.rows(), 0.0, 0.1 * static_cast<double>(values.cols() - 1),
         values.cols()};
  return SnapshotMatrix(std::move(values), g);
}

const SnapshotMatrix& burgers_data() {
  static const SnapshotMatrix V = burgers::generate_snapshots({});
  return V;
}

// A point is non-dominated iff no other point is no worse in all three
// coordinates and strictly better in one.
bool dominated_oracle(const std::vector<ParetoPoint>& pts, size_t k) {
  if (!pts[k].ok()) return true;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i == k || !pts[i].ok()) continue;
    const double a[3] = {static_cast<double>(pts[i].rank), pts[i].j1, pts[i].j2};
    const double b[3] = {static_cast<double>(pts[k].rank), pts[k].j1, pts[k].j2};
    int le = 0, lt = 0;
    for (int c = 0; c < 3; ++c) {
      le += a[c] <= b[c];
      lt += a[c] < b[c];
    }
    if (le == 3 && lt > 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("dominates: coordinatewise with one strict") {
  CHECK(dominates(point(2, 1e-3, -0.9), point(3, 1e-3, -0.9)));
  CHECK(dominates(point(3, 1e-4, -0.9), point(3, 1e-3, -0.9)));
  CHECK(dominates(point(3, 1e-3, -0.99), point(3, 1e-3, -0.9)));
  CHECK_FALSE(dominates(point(3, 1e-3, -0.9), point(3, 1e-3, -0.9)));
  // smaller error but larger model: a trade-off, not dominance
  CHECK_FALSE(dominates(point(12, 1e-8, -1.0), point(5, 1e-3, -0.9)));
  CHECK_FALSE(dominates(point(5, 1e-3, -0.9), point(12, 1e-8, -1.0)));
  CHECK_FALSE(dominates(point(2, 1e-3, -0.8), point(3, 1e-4, -0.9)));
  CHECK(dominates(point(9, 1.0, 0.0), failed(1)));
  CHECK_FALSE(dominates(failed(1), point(9, 1.0, 0.0)));
}

TEST_CASE("mark_dominance: small hand-checked front") {
  std::vector<ParetoPoint> pts{point(1, 0.5, -0.6), point(2, 0.1, -0.9), point(3, 0.2, -0.95),
                               point(4, 0.3, -0.8), failed(5)};
  mark_dominance(pts);
  CHECK_FALSE(pts[0].dominated);
  CHECK_FALSE(pts[1].dominated);
  CHECK_FALSE(pts[2].dominated);
  CHECK(pts[3].dominated);  // rank 2 is smaller, better in j1 and j2
  CHECK(pts[4].dominated);
}

TEST_CASE("mark_dominance: exhaustive oracle on random fronts") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 25);
  std::uniform_int_distribution<int> coarse(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = size(gen);
    std::vector<ParetoPoint> pts;
    for (int k = 0; k < n; ++k) {
      // coarse values force ties
      const bool tie = trial % 2 == 0;
      const double j1 = tie ? coarse(gen) : u(gen);
      const double j2 = tie ? -coarse(gen) : -u(gen);
      pts.push_back(u(gen) < 0.1 ? failed(k + 1) : point(k + 1, j1, j2));
    }
    mark_dominance(pts);
    bool any_ok = false;
    bool any_front = false;
    for (size_t k = 0; k < pts.size(); ++k) {
      CHECK(pts[k].dominated == dominated_oracle(pts, k));
      any_ok = any_ok || pts[k].ok();
      any_front = any_front || !pts[k].dominated;
    }
    CHECK(any_front == any_ok);
  }
}

TEST_CASE("select_rank: tolerance, fallback, empty") {
  std::vector<ParetoPoint> one{point(4, 0.2, -0.5)};
  mark_dominance(one);
  CHECK(select_rank(one, 1e-6) == 4);

  std::vector<ParetoPoint> two{point(5, 1e-3, -0.9), point(12, 1e-8, -0.99)};
  mark_dominance(two);
  CHECK(select_rank(two, 1e-6) == 12);
  CHECK(select_rank(two, 1e-2) == 5);
  CHECK(select_rank(two, 1e-12) == 12);  // nothing within: smallest j1

  std::vector<ParetoPoint> several{point(3, 1e-7, -0.9), point(6, 1e-9, -0.99),
                                   point(8, 1e-10, -0.999)};
  mark_dominance(several);
  CHECK(select_rank(several, 1e-6) == 3);
  CHECK(select_rank(several, 5e-9) == 6);

  CHECK_THROWS_AS(select_rank({}, 1e-6), std::invalid_argument);
  std::vector<ParetoPoint> broken{failed(1), failed(2)};
  mark_dominance(broken);
  CHECK_THROWS_AS(select_rank(broken, 1e-6), std::invalid_argument);
}

TEST_CASE("objectives: perfect twin gives zero error and unit correlation") {
  std::mt19937_64 gen(12);
  const auto V = snapshots(oracle::random_matrix(15, 2, gen) * oracle::random_matrix(2, 9, gen));
  const auto o = objectives(V, fit(V, 2, 0));
  CHECK(std::abs(o.j1) <= 1e-10);
  CHECK(o.j2 == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pareto_sweep: rank-1 data") {
  Matrix v(12, 8);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 8; ++j) v(i, j) = std::sin(0.3 * (i + 1)) * std::pow(0.9, j);
  }
  const auto V = snapshots(v);
  const auto pts = pareto_sweep(V, 5, 0);
  REQUIRE(pts.size() == 5);
  for (Index k = 0; k < 5; ++k) CHECK(pts[static_cast<size_t>(k)].rank == k + 1);
  REQUIRE(pts[0].ok());
  CHECK(pts[0].j1 <= 1e-10);
  CHECK_FALSE(pts[0].dominated);
  CHECK(select_rank(pts, 1e-6) == 1);
  CHECK_THROWS_AS(pareto_sweep(V, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(pareto_sweep(V, 8, 0), std::invalid_argument);
}

TEST_CASE("pareto_sweep: failures are recorded per rank") {
  const auto V = snapshots(Matrix::Zero(6, 5));
  const auto pts = pareto_sweep(V, 3, 0);
  for (const auto& p : pts) {
    CHECK_FALSE(p.ok());
    CHECK(p.dominated);
    CHECK(p.error.find("propagator") != std::string::npos);
  }
  CHECK_THROWS_AS(select_rank(pts, 1e-6), std::invalid_argument);
}

TEST_CASE("pareto_sweep: Burgers to rank 20") {
  SweepOptions opts;
  opts.threads = 1;
  const auto pts = pareto_sweep(burgers_data(), 20, 0, opts);
  REQUIRE(pts.size() == 20);
  for (size_t k = 0; k < pts.size(); ++k) {
    CHECK(pts[k].ok());
    CHECK(pts[k].dominated == dominated_oracle(pts, k));
  }
  const Index r = select_rank(pts, 1e-5);
  CHECK(r >= 8);
  CHECK(r <= 15);
  const auto& sel = pts[static_cast<size_t>(r - 1)];
  CHECK_FALSE(sel.dominated);
  CHECK(sel.j1 <= 1e-5);
  // no smaller non-dominated rank meets the tolerance
  for (const auto& p : pts) {
    if (p.rank < r && !p.dominated) CHECK(p.j1 > 1e-5);
  }

  opts.threads = 3;
  const auto again = pareto_sweep(burgers_data(), 20, 0, opts);
  for (size_t k = 0; k < pts.size(); ++k) {
    CHECK(again[k].j1 == pts[k].j1);
    CHECK(again[k].j2 == pts[k].j2);
    CHECK(again[k].dominated == pts[k].dominated);
  }
}
