#include "rod/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rod/format.hpp"

namespace rod::io {

using linalg::CMatrix;
using linalg::Complex;
using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

namespace {

std::string describe(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  std::string out = path.string();
  if (line > 0) out += ":" + std::to_string(line);
  return out + ": " + what;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double cell_number(std::string_view cell, const std::filesystem::path& origin, std::size_t line) {
  try {
    return parse_number(cell);
  } catch (const std::invalid_argument& e) {
    throw FormatError(origin, line, e.what());
  }
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

}  // namespace

FormatError::FormatError(const std::filesystem::path& path, std::size_t line,
                         const std::string& what)
    : std::runtime_error(describe(path, line, what)), line_(line) {}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, 0, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path, 0, "cannot open for writing");
  out << contents;
  out.flush();
  if (!out) throw FormatError(path, 0, "write failed");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- snapshots -------------------------------------------------------------

std::string snapshot_csv(const SnapshotMatrix& V) {
  const Grid& g = V.grid();
  std::string out = "x";
  for (Index j = 0; j < g.nt; ++j) out += "," + format_number(g.t(j));
  out += '\n';
  for (Index i = 0; i < g.nx; ++i) {
    out += format_number(g.x(i));
    for (Index j = 0; j < g.nt; ++j) out += "," + format_number(V.values()(i, j));
    out += '\n';
  }
  return out;
}

SnapshotMatrix parse_snapshot_csv(const std::string& text, const std::filesystem::path& origin) {
  const auto lines = split_lines(text);
  std::vector<std::size_t> data_lines;
  std::size_t header_line = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    if (header_line == 0) {
      header_line = i + 1;
    } else {
      data_lines.push_back(i + 1);
    }
  }
  if (header_line == 0) throw FormatError(origin, 0, "empty snapshot file");

  const auto header = split_cells(lines[header_line - 1]);
  if (header.size() < 2 || header[0] != "x") {
    throw FormatError(origin, header_line, "header must start with 'x' followed by sample times");
  }
  const Index nt = static_cast<Index>(header.size()) - 1;
  Vector t(nt);
  for (Index j = 0; j < nt; ++j) t(j) = cell_number(header[static_cast<size_t>(j) + 1], origin, header_line);

  const Index nx = static_cast<Index>(data_lines.size());
  if (nx < 2) throw FormatError(origin, header_line, "need at least two data rows");
  Vector x(nx);
  Matrix values(nx, nt);
  for (Index i = 0; i < nx; ++i) {
    const std::size_t ln = data_lines[static_cast<size_t>(i)];
    const auto cells = split_cells(lines[ln - 1]);
    if (static_cast<Index>(cells.size()) != nt + 1) {
      throw FormatError(origin, ln,
                        "expected " + std::to_string(nt + 1) + " fields, found " +
                            std::to_string(cells.size()));
    }
    x(i) = cell_number(cells[0], origin, ln);
    for (Index j = 0; j < nt; ++j) values(i, j) = cell_number(cells[static_cast<size_t>(j) + 1], origin, ln);
  }
  try {
    return SnapshotMatrix::from_coordinates(std::move(values), x, t);
  } catch (const std::exception& e) {
    throw FormatError(origin, 0, e.what());
  }
}

void write_snapshot_csv(const std::filesystem::path& path, const SnapshotMatrix& V) {
  write_file(path, snapshot_csv(V));
}

SnapshotMatrix read_snapshot_csv(const std::filesystem::path& path) {
  return parse_snapshot_csv(read_file(path), path);
}

// ---- key/value ---------------------------------------------------------------

KeyValues parse_key_values(const std::string& text, const std::filesystem::path& origin) {
  KeyValues kv;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(origin, i + 1, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw FormatError(origin, i + 1, "empty key");
    kv[key] = std::string(trim(line.substr(eq + 1)));
  }
  return kv;
}

std::string key_values_text(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  return out;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".meta");
}

// ---- model -------------------------------------------------------------------

std::string model_text(const RodModel& m) {
  const Grid& g = m.grid;
  std::string out = "# rod twin data model\n";
  out += key_values_text({{"format", "rod-model/1"},
                          {"Nx", std::to_string(g.nx)},
                          {"Nt", std::to_string(g.nt - 1)},
                          {"N_DTM", std::to_string(m.rank)},
                          {"seed", std::to_string(m.seed)},
                          {"dx", format_number(g.dx())},
                          {"dt", format_number(g.dt())},
                          {"L", format_number(g.x_end)},
                          {"T", format_number(g.t_end)},
                          {"x0", format_number(g.x_start)},
                          {"t0", format_number(g.t_start)}});
  auto complex_row = [](auto&& row) {
    std::vector<std::string> cells;
    for (Index j = 0; j < row.size(); ++j) {
      cells.push_back(format_number(row(j).real()));
      cells.push_back(format_number(row(j).imag()));
    }
    return join(cells) + "\n";
  };
  out += "[modes]\n";
  for (Index i = 0; i < m.modes.rows(); ++i) out += complex_row(m.modes.row(i));
  out += "[amplitudes]\n";
  for (Index i = 0; i < m.amplitudes.rows(); ++i) out += complex_row(m.amplitudes.row(i));
  out += "[eigenvalues]\n";
  for (Index i = 0; i < m.eigenvalues.size(); ++i) {
    out += format_number(m.eigenvalues(i).real()) + "," + format_number(m.eigenvalues(i).imag()) + "\n";
  }
  out += "[end]\n";
  return out;
}

RodModel parse_model(const std::string& text, const std::filesystem::path& origin) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  std::string header;
  for (; i < lines.size() && trim(lines[i]) != "[modes]"; ++i) header += lines[i] + "\n";
  if (i == lines.size()) throw FormatError(origin, 0, "missing [modes] section");
  const KeyValues kv = parse_key_values(header, origin);

  auto get = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw FormatError(origin, 0, std::string("missing header key '") + key + "'");
    return it->second;
  };
  auto get_count = [&](const char* key) -> Index {
    try {
      const long long v = std::stoll(get(key));
      if (v < 0) throw std::invalid_argument("negative");
      return static_cast<Index>(v);
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception&) {
      throw FormatError(origin, 0, std::string("header key '") + key + "' is not a count");
    }
  };
  if (get("format") != "rod-model/1") throw FormatError(origin, 0, "unsupported model format");

  RodModel m;
  m.grid.nx = get_count("Nx");
  m.grid.nt = get_count("Nt") + 1;
  m.rank = get_count("N_DTM");
  try {
    m.seed = std::stoull(get("seed"));
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError(origin, 0, "header key 'seed' is not an unsigned integer");
  }
  m.grid.x_end = cell_number(get("L"), origin, 0);
  m.grid.t_end = cell_number(get("T"), origin, 0);
  m.grid.x_start = cell_number(get("x0"), origin, 0);
  m.grid.t_start = cell_number(get("t0"), origin, 0);
  const double dx = cell_number(get("dx"), origin, 0);
  const double dt = cell_number(get("dt"), origin, 0);
  if (std::abs(dx - m.grid.dx()) > 1e-12 * std::max(std::abs(dx), 1e-300) ||
      std::abs(dt - m.grid.dt()) > 1e-12 * std::max(std::abs(dt), 1e-300)) {
    throw FormatError(origin, 0, "dx/dt inconsistent with grid extents");
  }

  auto read_block = [&](const char* name, Index rows, Index cols) {
    if (i >= lines.size() || trim(lines[i]) != name) {
      throw FormatError(origin, i + 1, std::string("expected section ") + name);
    }
    ++i;
    CMatrix block(rows, cols);
    for (Index r = 0; r < rows; ++r, ++i) {
      if (i >= lines.size()) throw FormatError(origin, i, std::string("truncated section ") + name);
      const auto cells = split_cells(lines[i]);
      if (static_cast<Index>(cells.size()) != 2 * cols) {
        throw FormatError(origin, i + 1,
                          "expected " + std::to_string(2 * cols) + " fields, found " +
                              std::to_string(cells.size()));
      }
      for (Index c = 0; c < cols; ++c) {
        block(r, c) = Complex(cell_number(cells[static_cast<size_t>(2 * c)], origin, i + 1),
                              cell_number(cells[static_cast<size_t>(2 * c + 1)], origin, i + 1));
      }
    }
    return block;
  };
  m.modes = read_block("[modes]", m.grid.nx, m.rank);
  m.amplitudes = read_block("[amplitudes]", m.rank, m.grid.nt);
  m.eigenvalues = read_block("[eigenvalues]", m.rank, 1).col(0);
  if (i >= lines.size() || trim(lines[i]) != "[end]") {
    throw FormatError(origin, i + 1, "expected [end]");
  }
  return m;
}

void write_model(const std::filesystem::path& path, const RodModel& model) {
  write_file(path, model_text(model));
}

RodModel read_model(const std::filesystem::path& path) { return parse_model(read_file(path), path); }

// ---- sweep and plot data ----------------------------------------------------

std::string pareto_csv(const std::vector<pareto::ParetoPoint>& points) {
  std::string out = "rank,j1,j2,dominated,error\n";
  for (const auto& p : points) {
    std::string err = p.error;
    for (char& c : err) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    out += join({std::to_string(p.rank), format_number(p.j1), format_number(p.j2),
                 p.dominated ? "1" : "0", err}) +
           "\n";
  }
  return out;
}

std::vector<pareto::ParetoPoint> parse_pareto_csv(const std::string& text) {
  std::vector<pareto::ParetoPoint> points;
  const auto lines = split_lines(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cells = split_cells(lines[i]);
    if (cells.size() != 5) throw FormatError("<pareto>", i + 1, "expected 5 fields");
    pareto::ParetoPoint p;
    p.rank = static_cast<Index>(cell_number(cells[0], "<pareto>", i + 1));
    p.j1 = cell_number(cells[1], "<pareto>", i + 1);
    p.j2 = cell_number(cells[2], "<pareto>", i + 1);
    p.dominated = cells[3] == "1";
    p.error = std::string(cells[4]);
    points.push_back(p);
  }
  return points;
}

std::string modes_csv(const RodModel& m) {
  std::vector<std::string> head{"x"};
  for (Index j = 1; j <= m.rank; ++j) {
    head.push_back("re_phi" + std::to_string(j));
    head.push_back("im_phi" + std::to_string(j));
  }
  std::string out = join(head) + "\n";
  for (Index i = 0; i < m.modes.rows(); ++i) {
    std::vector<std::string> cells{format_number(m.grid.x(i))};
    for (Index j = 0; j < m.modes.cols(); ++j) {
      cells.push_back(format_number(m.modes(i, j).real()));
      cells.push_back(format_number(m.modes(i, j).imag()));
    }
    out += join(cells) + "\n";
  }
  return out;
}

std::string amplitudes_csv(const RodModel& m) {
  std::vector<std::string> head{"t"};
  for (Index j = 1; j <= m.rank; ++j) {
    head.push_back("re_a" + std::to_string(j));
    head.push_back("im_a" + std::to_string(j));
  }
  std::string out = join(head) + "\n";
  for (Index t = 0; t < m.amplitudes.cols(); ++t) {
    std::vector<std::string> cells{format_number(m.grid.t(t))};
    for (Index j = 0; j < m.amplitudes.rows(); ++j) {
      cells.push_back(format_number(m.amplitudes(j, t).real()));
      cells.push_back(format_number(m.amplitudes(j, t).imag()));
    }
    out += join(cells) + "\n";
  }
  return out;
}

}  // namespace rod::io
