#include "rod/rank_select.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <thread>

namespace rod::pareto {

using linalg::Index;

Objectives objectives(const SnapshotMatrix& V, const RodModel& model,
                      metrics::CorrelationVariant variant) {
  const SnapshotMatrix twin = reconstruct(model);
  return {metrics::absolute_error(V, twin), -metrics::correlation(V, twin, variant)};
}

bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  if (!a.ok()) return false;
  if (!b.ok()) return true;
  const bool no_worse = a.rank <= b.rank && a.j1 <= b.j1 && a.j2 <= b.j2;
  const bool better = a.rank < b.rank || a.j1 < b.j1 || a.j2 < b.j2;
  return no_worse && better;
}

void mark_dominance(std::vector<ParetoPoint>& points) {
  for (auto& p : points) {
    p.dominated = !p.ok() || std::any_of(points.begin(), points.end(), [&](const ParetoPoint& q) {
                    return &q != &p && dominates(q, p);
                  });
  }
}

std::vector<ParetoPoint> pareto_sweep(const SnapshotMatrix& V, Index rank_max,
                                      std::uint64_t seed, const SweepOptions& options) {
  const Index bound = std::min(V.rows(), V.cols() - 1);
  if (rank_max < 1 || rank_max > bound) {
    throw std::invalid_argument("pareto_sweep: rank_max " + std::to_string(rank_max) +
                                " outside [1, " + std::to_string(bound) + "]");
  }
  std::vector<ParetoPoint> points(static_cast<size_t>(rank_max));
  std::atomic<Index> next{0};

  auto worker = [&] {
    for (Index i = next++; i < rank_max; i = next++) {
      ParetoPoint& p = points[static_cast<size_t>(i)];
      p.rank = i + 1;
      try {
        FitOptions fo = options.fit;
        fo.rank = p.rank;
        fo.seed = seed;
        const RodModel model = fit(V, fo).model;
        const Objectives obj = objectives(V, model, options.variant);
        p.j1 = obj.j1;
        p.j2 = obj.j2;
      } catch (const std::exception& e) {
        p.error = e.what();
        p.j1 = std::numeric_limits<double>::quiet_NaN();
        p.j2 = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(rank_max));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  mark_dominance(points);
  return points;
}

Index select_rank(const std::vector<ParetoPoint>& points, double error_tolerance) {
  if (points.empty()) {
    throw std::invalid_argument("select_rank: no candidate points");
  }
  const ParetoPoint* within = nullptr;
  const ParetoPoint* best = nullptr;
  for (const auto& p : points) {
    if (p.dominated || !p.ok()) continue;
    if (p.j1 <= error_tolerance && (within == nullptr || p.rank < within->rank)) within = &p;
    if (best == nullptr || p.j1 < best->j1 || (p.j1 == best->j1 && p.rank < best->rank)) best = &p;
  }
  if (within != nullptr) return within->rank;
  if (best != nullptr) return best->rank;
  throw std::invalid_argument("select_rank: no non-dominated point");
}

}  // namespace rod::pareto
