#include "rod/metrics.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rod/format.hpp"

namespace rod::metrics {

using linalg::Index;

std::string to_string(CorrelationVariant v) {
  return v == CorrelationVariant::paper ? "paper" : "cosine";
}

CorrelationVariant correlation_variant_from_string(const std::string& name) {
  if (name == "paper") return CorrelationVariant::paper;
  if (name == "cosine") return CorrelationVariant::cosine;
  throw std::invalid_argument("unknown correlation variant '" + name + "'");
}

double time_average(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("time_average: no samples");
  }
  return std::accumulate(samples.begin(), samples.end(), 0.0) /
         static_cast<double>(samples.size());
}

namespace {

void require_same_shape(const SnapshotMatrix& a, const SnapshotMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
  if (a.cols() < 2) {
    throw std::invalid_argument(std::string(what) + ": need samples beyond t_0");
  }
}

double error_average(const SnapshotMatrix& exact, const SnapshotMatrix& twin, double weight) {
  std::vector<double> per_column;
  per_column.reserve(static_cast<size_t>(exact.cols() - 1));
  for (Index j = 1; j < exact.cols(); ++j) {
    per_column.push_back(weight * (exact.values().col(j) - twin.values().col(j)).norm());
  }
  return time_average(per_column);
}

}  // namespace

double absolute_error(const SnapshotMatrix& exact, const SnapshotMatrix& twin) {
  require_same_shape(exact, twin, "absolute_error");
  return error_average(exact, twin, 1.0);
}

double absolute_error_weighted(const SnapshotMatrix& exact, const SnapshotMatrix& twin) {
  require_same_shape(exact, twin, "absolute_error_weighted");
  return error_average(exact, twin, std::sqrt(exact.dx()));
}

double correlation(const SnapshotMatrix& exact, const SnapshotMatrix& twin,
                   CorrelationVariant variant) {
  require_same_shape(exact, twin, "correlation");
  std::vector<double> per_column;
  per_column.reserve(static_cast<size_t>(exact.cols() - 1));
  for (Index j = 1; j < exact.cols(); ++j) {
    const auto u = exact.values().col(j);
    const auto v = twin.values().col(j);
    double num = 0.0;
    double du = 0.0;
    double dv = 0.0;
    if (variant == CorrelationVariant::paper) {
      num = u.cwiseProduct(v).squaredNorm();
      du = u.cwiseProduct(u).norm();
      dv = v.cwiseProduct(v).norm();
    } else {
      const double d = u.dot(v);
      num = d * d;
      du = u.squaredNorm();
      dv = v.squaredNorm();
    }
    if (!(du > 0.0)) {
      throw std::invalid_argument("correlation: exact field vanishes at column " +
                                  std::to_string(j));
    }
    if (!(dv > 0.0)) {
      throw std::invalid_argument("correlation: twin field vanishes at column " +
                                  std::to_string(j));
    }
    per_column.push_back(num / (du * dv));
  }
  return time_average(per_column);
}

QualityReport quality_report(const SnapshotMatrix& exact, const RodModel& model,
                             const empirical::FourierModes& fourier, const InnerProduct& ip,
                             CorrelationVariant variant) {
  if (!exact.grid().matches(model.grid)) {
    throw std::invalid_argument("quality_report: model grid differs from the dataset grid");
  }
  const SnapshotMatrix twin = reconstruct(model);
  const linalg::Matrix V0 = exact.values().leftCols(exact.cols() - 1);
  const auto cmp = empirical::compare_projections(model.modes, fourier, V0, ip);

  QualityReport r;
  r.rank = model.rank;
  r.seed = model.seed;
  r.absolute_error = absolute_error(exact, twin);
  r.absolute_error_weighted = absolute_error_weighted(exact, twin);
  r.correlation = correlation(exact, twin, variant);
  r.correlation_variant = variant;
  r.rod_projection_norm = cmp.rho_rod;
  r.fourier_projection_norm = cmp.rho_fourier;
  r.gram_deviation = gram_deviation(model.modes, ip);
  return r;
}

namespace {

const std::vector<std::string>& field_names() {
  static const std::vector<std::string> names{
      "rank",         "seed",
      "absolute_error", "absolute_error_weighted",
      "correlation",  "correlation_variant",
      "rod_projection_norm", "fourier_projection_norm",
      "gram_deviation"};
  return names;
}

std::vector<std::string> field_values(const QualityReport& r) {
  return {std::to_string(r.rank),
          std::to_string(r.seed),
          format_number(r.absolute_error),
          format_number(r.absolute_error_weighted),
          format_number(r.correlation),
          to_string(r.correlation_variant),
          format_number(r.rod_projection_norm),
          format_number(r.fourier_projection_norm),
          format_number(r.gram_deviation)};
}

QualityReport from_fields(const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("quality report: missing field '" + key + "'");
    return it->second;
  };
  QualityReport r;
  r.rank = std::stoll(get("rank"));
  r.seed = std::stoull(get("seed"));
  r.absolute_error = parse_number(get("absolute_error"));
  r.absolute_error_weighted = parse_number(get("absolute_error_weighted"));
  r.correlation = parse_number(get("correlation"));
  r.correlation_variant = correlation_variant_from_string(get("correlation_variant"));
  r.rod_projection_norm = parse_number(get("rod_projection_norm"));
  r.fourier_projection_norm = parse_number(get("fourier_projection_norm"));
  r.gram_deviation = parse_number(get("gram_deviation"));
  return r;
}

}  // namespace

std::string to_key_value(const QualityReport& report) {
  const auto values = field_values(report);
  std::ostringstream os;
  for (size_t i = 0; i < values.size(); ++i) os << field_names()[i] << " = " << values[i] << '\n';
  return os.str();
}

QualityReport report_from_key_value(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (trim(line).empty() || eq == std::string::npos) continue;
    kv[std::string(trim(std::string_view(line).substr(0, eq)))] =
        std::string(trim(std::string_view(line).substr(eq + 1)));
  }
  return from_fields(kv);
}

std::string report_csv_header() {
  std::string out;
  for (const auto& n : field_names()) out += (out.empty() ? "" : ",") + n;
  return out;
}

std::string to_csv_row(const QualityReport& report) {
  std::string out;
  bool first = true;
  for (const auto& v : field_values(report)) {
    if (!first) out += ',';
    out += v;
    first = false;
  }
  return out;
}

QualityReport report_from_csv_row(const std::string& row) {
  std::map<std::string, std::string> kv;
  std::istringstream is(row);
  std::string cell;
  size_t i = 0;
  while (std::getline(is, cell, ',')) {
    if (i >= field_names().size()) throw std::invalid_argument("quality report: too many fields");
    kv[field_names()[i++]] = std::string(trim(cell));
  }
  return from_fields(kv);
}

}  // namespace rod::metrics
