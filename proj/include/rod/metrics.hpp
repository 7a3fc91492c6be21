#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "rod/empirical.hpp"
#include "rod/rod.hpp"
#include "rod/snapshot.hpp"

namespace rod::metrics {

enum class CorrelationVariant {
  paper,   // sum (u v)^2 / (sqrt(sum u^4) sqrt(sum v^4)), products elementwise
  cosine,  // (u . v)^2 / (|u|^2 |v|^2)
};

std::string to_string(CorrelationVariant v);
CorrelationVariant correlation_variant_from_string(const std::string& name);

/// Arithmetic mean of samples taken at t_1..t_Nt.
double time_average(std::span<const double> samples);

/// Mean over t_1..t_Nt (column 0 excluded) of ||u(., t_i) - u_twin(., t_i)||_2.
double absolute_error(const SnapshotMatrix& exact, const SnapshotMatrix& twin);

/// Same average with the dx-weighted L2(D) column norm.
double absolute_error_weighted(const SnapshotMatrix& exact, const SnapshotMatrix& twin);

/// Mean over t_1..t_Nt of the per-column correlation ratio. Throws naming the
/// column when either field vanishes there.
double correlation(const SnapshotMatrix& exact, const SnapshotMatrix& twin,
                   CorrelationVariant variant = CorrelationVariant::paper);

struct QualityReport {
  std::int64_t rank = 0;
  std::uint64_t seed = 0;
  double absolute_error = 0.0;
  double absolute_error_weighted = 0.0;
  double correlation = 0.0;
  CorrelationVariant correlation_variant = CorrelationVariant::paper;
  double rod_projection_norm = 0.0;
  double fourier_projection_norm = 0.0;
  double gram_deviation = 0.0;

  bool operator==(const QualityReport&) const = default;
};

QualityReport quality_report(const SnapshotMatrix& exact, const RodModel& model,
                             const empirical::FourierModes& fourier, const InnerProduct& ip,
                             CorrelationVariant variant = CorrelationVariant::paper);

/// `key = value` lines in fixed field order.
std::string to_key_value(const QualityReport& report);
QualityReport report_from_key_value(const std::string& text);

std::string report_csv_header();
std::string to_csv_row(const QualityReport& report);
QualityReport report_from_csv_row(const std::string& row);

}  // namespace rod::metrics
