#include "rod/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "rod/empirical.hpp"
#include "rod/format.hpp"
#include "rod/io.hpp"
#include "rod/rank_select.hpp"
#include "rod/rod.hpp"

namespace rod::cli {

using linalg::Index;

namespace {

[[noreturn]] void bad_flag(const std::string& flag, const std::string& what) {
  throw std::invalid_argument(flag + ": " + what);
}

FitOptions fit_options(const RunConfig& cfg) {
  FitOptions fo;
  fo.rank = cfg.rank;
  fo.seed = cfg.seed;
  fo.oversampling = cfg.oversampling;
  fo.power_iterations = cfg.power_iterations;
  fo.orthonormalize_sample = !cfg.literal_sampling;
  fo.reorthonormalize_modes = cfg.reorthonormalize;
  return fo;
}

void print_report(std::ostream& out, const metrics::QualityReport& report) {
  out << "[report]\n" << metrics::to_key_value(report);
}

metrics::QualityReport report_for(const SnapshotMatrix& V, const RodModel& model,
                                  const RunConfig& cfg) {
  const InnerProduct ip{V.dx()};
  const auto fourier = empirical::fourier_decomposition(V);
  return metrics::quality_report(V, model, fourier, ip, cfg.correlation);
}

void require_fit_rank(const RunConfig& cfg, const SnapshotMatrix& V, Index rank,
                      const char* flag) {
  const Index bound = std::min(V.rows(), V.cols() - 1);
  if (V.cols() < 2) bad_flag("--input", "dataset needs at least two time samples");
  if (rank > bound) {
    bad_flag(flag, "must not exceed min(Nx, Nt) = " + std::to_string(bound));
  }
  if (rank + cfg.oversampling > bound) {
    bad_flag("--oversampling", "rank + oversampling exceeds min(Nx, Nt) = " +
                                   std::to_string(bound));
  }
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.rank < 1) bad_flag("--rank", "must be at least 1");
  if (cfg.max_rank < 1) bad_flag("--max-rank", "must be at least 1");
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) bad_flag("--tol", "must be a positive number");
  if (cfg.oversampling < 0) bad_flag("--oversampling", "must be nonnegative");
  if (cfg.power_iterations < 0) bad_flag("--power-iterations", "must be nonnegative");
  const auto& b = cfg.burgers;
  if (!(b.nu > 0.0) || !std::isfinite(b.nu)) bad_flag("--nu", "must be positive");
  if (!(b.length > 0.0) || !std::isfinite(b.length)) bad_flag("--length", "must be positive");
  if (!(b.final_time > 0.0) || !std::isfinite(b.final_time)) bad_flag("--t-final", "must be positive");
  if (!(b.dt > 0.0) || !std::isfinite(b.dt)) bad_flag("--dt", "must be positive");
  if (b.grid_points < 2) bad_flag("--grid-points", "must be at least 2");
  if (b.quad_order < 1 || b.quad_order > 500) bad_flag("--quad-order", "must lie in [1, 500]");
  try {
    b.time_samples();
  } catch (const std::invalid_argument& e) {
    bad_flag("--t-final", e.what());
  }
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const auto& b = cfg.burgers;
  const SnapshotMatrix V = burgers::generate_snapshots(b);
  const std::string csv = io::snapshot_csv(V);
  io::write_file(cfg.output, csv);
  io::write_file(io::metadata_path(cfg.output),
                 io::key_values_text({{"L", format_number(b.length)},
                                      {"T", format_number(b.final_time)},
                                      {"nu", format_number(b.nu)},
                                      {"quad_order", std::to_string(b.quad_order)},
                                      {"dx", format_number(V.dx())},
                                      {"dt", format_number(V.dt())},
                                      {"Nx", std::to_string(V.rows())},
                                      {"Nt", std::to_string(V.cols() - 1)}}));
  out << "wrote " << cfg.output.string() << " (" << V.rows() << " x " << V.cols() << ")\n";
  out << "checksum = " << io::fnv1a_hex(csv) << "\n";
  return kSuccess;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  const SnapshotMatrix V = io::read_snapshot_csv(cfg.input);
  require_fit_rank(cfg, V, cfg.rank, "--rank");
  const FitResult result = fit(V, fit_options(cfg));
  io::write_model(cfg.output, result.model);

  const auto& d = result.diagnostics;
  out << "wrote " << cfg.output.string() << "\n";
  out << "# koopman_residual = " << format_number(d.koopman_residual) << "\n";
  out << "# amplitude_condition = " << format_number(d.amplitude_condition) << "\n";
  out << "# imaginary_residue = " << format_number(d.imaginary_residue) << "\n";
  for (const auto& w : d.warnings) out << "# warning: " << w << "\n";
  print_report(out, report_for(V, result.model, cfg));
  return kSuccess;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const SnapshotMatrix V = io::read_snapshot_csv(cfg.input);
  require_fit_rank(cfg, V, cfg.max_rank, "--max-rank");
  pareto::SweepOptions so;
  so.fit = fit_options(cfg);
  so.variant = cfg.correlation;
  so.threads = cfg.threads;
  const auto points = pareto::pareto_sweep(V, cfg.max_rank, cfg.seed, so);
  io::write_file(cfg.output, io::pareto_csv(points));
  out << "wrote " << cfg.output.string() << "\n";
  out << "selected_rank = " << pareto::select_rank(points, cfg.tol) << "\n";
  return kSuccess;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const SnapshotMatrix V = io::read_snapshot_csv(cfg.input);
  const RodModel model = io::read_model(cfg.model);
  if (!V.grid().matches(model.grid)) {
    throw std::invalid_argument("model grid does not match the dataset grid");
  }
  const Reconstruction rec = reconstruct_checked(model);
  const std::string prefix = cfg.output.string();
  io::write_file(prefix + ".reconstruction.csv", io::snapshot_csv(rec.data));
  io::write_file(prefix + ".modes.csv", io::modes_csv(model));
  io::write_file(prefix + ".amplitudes.csv", io::amplitudes_csv(model));
  const auto report = report_for(V, model, cfg);
  io::write_file(prefix + ".report.txt", metrics::to_key_value(report));
  out << "wrote " << prefix << ".{reconstruction,modes,amplitudes}.csv and " << prefix
      << ".report.txt\n";
  if (rec.residue_exceeded) {
    out << "# warning: reconstruction imaginary residue " << format_number(rec.imaginary_residue)
        << "\n";
  }
  print_report(out, report);
  return kSuccess;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const SnapshotMatrix V = io::read_snapshot_csv(cfg.input);
  const InnerProduct ip{V.dx()};
  const auto fourier = empirical::fourier_decomposition(V);
  const linalg::Matrix V0 = V.values().leftCols(V.cols() - 1);
  const auto basis =
      cfg.same_rank ? empirical::ComparisonBasis::same_rank : empirical::ComparisonBasis::published;

  linalg::CMatrix modes;
  if (cfg.fourier_self) {
    modes = fourier.psi.cast<linalg::Complex>();
  } else {
    const RodModel model = io::read_model(cfg.model);
    if (!V.grid().matches(model.grid)) {
      throw std::invalid_argument("model grid does not match the dataset grid");
    }
    modes = model.modes;
  }
  const auto cmp = empirical::compare_projections(modes, fourier, V0, ip, basis);
  out << "[compare]\n";
  out << "basis = " << (cfg.fourier_self ? "fourier-self" : "rod") << "/"
      << (cfg.same_rank ? "same-rank" : "published") << "\n";
  out << "rho_rod = " << format_number(cmp.rho_rod) << "\n";
  out << "rho_fourier = " << format_number(cmp.rho_fourier) << "\n";
  out << "ratio = " << format_number(cmp.ratio()) << "\n";
  out << "dominates = " << (cmp.dominates ? "true" : "false") << "\n";
  return cmp.dominates ? kSuccess : kNotDominated;
}

namespace {

struct CommandSpec {
  CLI::App* app = nullptr;
  int (*handler)(const RunConfig&, std::ostream&) = nullptr;
};

std::string config_flag(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

bool truthy(const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected a boolean, found '" + v + "'");
}

std::vector<std::string> config_arguments(CLI::App& sub, const std::filesystem::path& path) {
  const io::KeyValues kv = io::parse_key_values(io::read_file(path), path);
  std::vector<std::string> args;
  for (const auto& [key, value] : kv) {
    const std::string flag = config_flag(key);
    if (flag == "--config") bad_flag("--config", "config files cannot include other config files");
    CLI::Option* opt = sub.get_option_no_throw(flag);
    if (opt == nullptr) {
      bad_flag("--config", "key '" + key + "' is not an option of '" + sub.get_name() + "'");
    }
    if (opt->get_expected_min() == 0) {
      try {
        if (truthy(value)) args.push_back(flag);
      } catch (const std::invalid_argument& e) {
        bad_flag(flag, e.what());
      }
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

std::filesystem::path find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Randomized orthogonal decomposition twin data models", "rod"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::string correlation = "paper";
  const auto add_config = [&](CLI::App* s) {
    s->add_option("--config", cfg.config, "key = value file; flags override its values");
  };
  const auto add_burgers = [&](CLI::App* s) {
    s->add_option("--nu", cfg.burgers.nu, "viscosity")->capture_default_str();
    s->add_option("--quad-order", cfg.burgers.quad_order, "Gauss-Hermite order")->capture_default_str();
    s->add_option("--grid-points", cfg.burgers.grid_points, "spatial samples Nx")->capture_default_str();
    s->add_option("--dt", cfg.burgers.dt, "time step")->capture_default_str();
    s->add_option("--t-final", cfg.burgers.final_time, "final time T")->capture_default_str();
    s->add_option("--length", cfg.burgers.length, "domain length L")->capture_default_str();
  };
  const auto add_sampling = [&](CLI::App* s) {
    s->add_option("--seed", cfg.seed, "random test-matrix seed")->capture_default_str();
    s->add_option("--oversampling", cfg.oversampling, "extra random samples")->capture_default_str();
    s->add_option("--power-iterations", cfg.power_iterations, "subspace iterations")
        ->capture_default_str();
    s->add_flag("--literal-sampling", cfg.literal_sampling,
                "skip orthonormalization of the random sample");
    s->add_flag("--reorthonormalize", cfg.reorthonormalize, "QR-orthonormalize the shape modes");
  };
  const auto add_correlation = [&](CLI::App* s) {
    s->add_option("--correlation-variant", correlation, "paper or cosine")
        ->check(CLI::IsMember({"paper", "cosine"}))
        ->capture_default_str();
  };

  std::vector<CommandSpec> commands;

  auto* gen = app.add_subcommand("generate", "write the exact Burgers snapshot dataset");
  gen->add_option("--output", cfg.output, "snapshot CSV path")->required();
  add_burgers(gen);
  add_config(gen);
  commands.push_back({gen, &cmd_generate});

  auto* fitc = app.add_subcommand("fit", "fit a twin data model and print its quality report");
  fitc->add_option("--input", cfg.input, "snapshot CSV")->required();
  fitc->add_option("--output", cfg.output, "model file")->required();
  fitc->add_option("--rank", cfg.rank, "number of shape modes")->capture_default_str();
  add_sampling(fitc);
  add_correlation(fitc);
  add_config(fitc);
  commands.push_back({fitc, &cmd_fit});

  auto* sweep = app.add_subcommand("sweep", "Pareto sweep over ranks 1..max-rank");
  sweep->add_option("--input", cfg.input, "snapshot CSV")->required();
  sweep->add_option("--output", cfg.output, "Pareto CSV")->required();
  sweep->add_option("--max-rank", cfg.max_rank, "largest candidate rank")->capture_default_str();
  sweep->add_option("--tol", cfg.tol, "absolute error tolerance for selection")->capture_default_str();
  sweep->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  add_sampling(sweep);
  add_correlation(sweep);
  add_config(sweep);
  commands.push_back({sweep, &cmd_sweep});

  auto* eval = app.add_subcommand("evaluate", "reconstruct a model and emit plot data");
  eval->add_option("--input", cfg.input, "snapshot CSV")->required();
  eval->add_option("--model", cfg.model, "model file")->required();
  eval->add_option("--output", cfg.output, "output path prefix")->required();
  add_correlation(eval);
  add_config(eval);
  commands.push_back({eval, &cmd_evaluate});

  auto* cmp = app.add_subcommand("compare", "projection norms of ROD vs Fourier modes");
  cmp->add_option("--input", cfg.input, "snapshot CSV")->required();
  cmp->add_option("--model", cfg.model, "model file");
  cmp->add_flag("--same-rank", cfg.same_rank, "compare against the leading Fourier modes only");
  cmp->add_flag("--fourier-self", cfg.fourier_self, "compare Fourier modes against themselves");
  add_config(cmp);
  commands.push_back({cmp, &cmd_compare});

  std::vector<std::string> full = args;
  try {
    if (!args.empty()) {
      const auto config_path = find_config(args);
      CLI::App* sub = app.get_subcommand_no_throw(args[0]);
      if (!config_path.empty() && sub != nullptr) {
        auto extra = config_arguments(*sub, config_path);
        full.insert(full.begin() + 1, extra.begin(), extra.end());
      }
    }
    std::vector<std::string> reversed(full.rbegin(), full.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  cfg.correlation = metrics::correlation_variant_from_string(correlation);
  const CommandSpec* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) chosen = &c;
  }
  cfg.command = chosen->app->get_name();
  if (cfg.command == "compare" && !cfg.fourier_self && cfg.model.empty()) {
    err << "error: --model: required unless --fourier-self is given\n";
    return kUsageError;
  }

  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    return chosen->handler(cfg, out);
  } catch (const std::invalid_argument& e) {
    // rank bounds that depend on the dataset shape
    err << "error: " << e.what() << "\n";
    return std::string(e.what()).rfind("--", 0) == 0 ? kUsageError : kComputationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationFailure;
  }
}

}  // namespace rod::cli
