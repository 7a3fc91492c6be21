#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rod/rank_select.hpp"
#include "rod/rod.hpp"
#include "rod/snapshot.hpp"

/// Plain-text file formats. Every number is written with format_number, so
/// reading a file back yields bit-identical doubles.
namespace rod::io {

/// Parse or I/O failure carrying the file and, when known, the 1-based line.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::filesystem::path& path, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Snapshot CSV:
///   x,<t_0>,<t_1>,...,<t_Nt>
///   <x_0>,u(x_0,t_0),...,u(x_0,t_Nt)
///   ...
std::string snapshot_csv(const SnapshotMatrix& V);
SnapshotMatrix parse_snapshot_csv(const std::string& text,
                                  const std::filesystem::path& origin = "<memory>");
void write_snapshot_csv(const std::filesystem::path& path, const SnapshotMatrix& V);
SnapshotMatrix read_snapshot_csv(const std::filesystem::path& path);

/// `key = value` lines, `#` starts a comment.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text,
                           const std::filesystem::path& origin = "<memory>");
std::string key_values_text(const std::vector<std::pair<std::string, std::string>>& entries);

/// Sidecar written next to a generated dataset: <csv>.meta.
std::filesystem::path metadata_path(const std::filesystem::path& csv);

/// Model file: header keys (Nx, Nt, N_DTM, seed, dx, dt, L, T, x0, t0)
/// followed by [modes], [amplitudes] and [eigenvalues] CSV blocks holding
/// re,im pairs, terminated by [end].
std::string model_text(const RodModel& model);
RodModel parse_model(const std::string& text, const std::filesystem::path& origin = "<memory>");
void write_model(const std::filesystem::path& path, const RodModel& model);
RodModel read_model(const std::filesystem::path& path);

/// rank,j1,j2,dominated,error
std::string pareto_csv(const std::vector<pareto::ParetoPoint>& points);
std::vector<pareto::ParetoPoint> parse_pareto_csv(const std::string& text);

/// x,re_phi1,im_phi1,...
std::string modes_csv(const RodModel& model);
/// t,re_a1,im_a1,...
std::string amplitudes_csv(const RodModel& model);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// 64-bit FNV-1a digest, 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace rod::io
