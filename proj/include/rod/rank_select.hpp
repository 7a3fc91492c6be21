#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rod/metrics.hpp"
#include "rod/rod.hpp"

/// Model-order selection: both twin-model objectives evaluated over every
/// candidate rank, then the non-dominated set.
namespace rod::pareto {

struct Objectives {
  double j1 = 0.0;  // absolute error
  double j2 = 0.0;  // negated correlation
};

Objectives objectives(const SnapshotMatrix& V, const RodModel& model,
                      metrics::CorrelationVariant variant = metrics::CorrelationVariant::paper);

struct ParetoPoint {
  linalg::Index rank = 0;
  double j1 = 0.0;
  double j2 = 0.0;
  bool dominated = false;
  std::string error;  // non-empty when the fit at this rank failed

  bool ok() const { return error.empty(); }
};

/// Point a dominates b when a.rank <= b.rank, a.j1 <= b.j1 and a.j2 <= b.j2
/// with at least one strict inequality. Model size is the third objective
/// being minimised alongside the two fitness values.
bool dominates(const ParetoPoint& a, const ParetoPoint& b);

/// Sets `dominated` on every point by exhaustive pairwise comparison. Failed
/// points are marked dominated and never dominate others.
void mark_dominance(std::vector<ParetoPoint>& points);

struct SweepOptions {
  FitOptions fit;  // rank is overwritten per candidate
  metrics::CorrelationVariant variant = metrics::CorrelationVariant::paper;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// One fit per rank 1..rank_max; per-rank failures are recorded in the point.
std::vector<ParetoPoint> pareto_sweep(const SnapshotMatrix& V, linalg::Index rank_max,
                                      std::uint64_t seed, const SweepOptions& options = {});

/// Smallest non-dominated rank with j1 <= error_tolerance, otherwise the
/// non-dominated point with the smallest j1.
linalg::Index select_rank(const std::vector<ParetoPoint>& points, double error_tolerance);

}  // namespace rod::pareto
