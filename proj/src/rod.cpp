#include "rod/rod.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rod {

using linalg::CMatrix;
using linalg::Complex;
using linalg::Index;
using linalg::Matrix;

std::pair<Matrix, Matrix> shift_split(const SnapshotMatrix& V) {
  const Index n = V.cols();
  if (n < 2) {
    throw std::invalid_argument("shift_split: need at least two snapshot columns");
  }
  return {V.values().leftCols(n - 1), V.values().rightCols(n - 1)};
}

Propagator propagator(const linalg::SvdFactors& svd, const Matrix& V1) {
  if (svd.U.cols() != svd.sigma.size() || svd.W.cols() != svd.sigma.size()) {
    throw std::invalid_argument("propagator: inconsistent SVD factor widths");
  }
  if (V1.rows() != svd.U.rows() || V1.cols() != svd.W.rows()) {
    throw std::invalid_argument("propagator: V1 shape does not match the factors of V0");
  }
  const double smax = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
  Index r = 0;
  while (r < svd.sigma.size() && svd.sigma(r) > 1e-12 * smax) ++r;
  if (r == 0) {
    throw std::runtime_error("propagator: all singular values vanish");
  }
  Propagator out;
  out.retained = r;
  Matrix V1W = V1 * svd.W.leftCols(r);
  for (Index j = 0; j < r; ++j) V1W.col(j) /= svd.sigma(j);
  out.S = svd.U.leftCols(r).transpose() * V1W;
  return out;
}

ModeSet rod_modes(const linalg::SvdFactors& svd, const linalg::EigenPairs& eig,
                  const InnerProduct& ip) {
  const Index k = eig.vectors.cols();
  if (eig.vectors.rows() > svd.U.cols()) {
    throw std::invalid_argument("rod_modes: eigenvector length exceeds the number of U columns");
  }
  const CMatrix combos =
      svd.U.leftCols(eig.vectors.rows()).cast<Complex>() * eig.vectors;
  const double scale = std::max(svd.U.norm(), 1e-300);

  ModeSet out;
  out.modes.resize(combos.rows(), 0);
  std::vector<linalg::CVector> columns;
  for (Index i = 0; i < k; ++i) {
    const double norm = ip.norm(combos.col(i));
    if (!(combos.col(i).norm() > 1e-12 * scale)) {
      out.dropped.push_back(i);
      continue;
    }
    columns.emplace_back(combos.col(i) / norm);
    out.kept.push_back(i);
  }
  out.modes.resize(combos.rows(), static_cast<Index>(columns.size()));
  for (Index j = 0; j < out.modes.cols(); ++j) out.modes.col(j) = columns[static_cast<size_t>(j)];
  return out;
}

AmplitudeFit amplitudes(const CMatrix& modes, const SnapshotMatrix& V, const InnerProduct& ip) {
  if (modes.rows() != V.rows()) {
    throw std::invalid_argument("amplitudes: mode length differs from snapshot length");
  }
  if (modes.cols() > V.cols()) {
    throw std::invalid_argument("amplitudes: more modes than snapshots");
  }
  // The dx weight scales both sides of the normal equations equally, so the
  // weighted and unweighted minimisers coincide.
  (void)ip;
  const CMatrix data = V.values().cast<Complex>();
  const auto ls = linalg::least_squares(modes, data);
  AmplitudeFit out;
  out.amplitudes = ls.X;
  out.condition = ls.condition;
  out.ill_conditioned = ls.rank_deficient || ls.condition > 1e12;
  const double vn = data.norm();
  out.relative_residual = vn > 0.0 ? (modes * ls.X - data).norm() / vn : 0.0;
  return out;
}

double gram_deviation(const CMatrix& modes, const InnerProduct& ip) {
  const CMatrix G = ip.dx * (modes.adjoint() * modes);
  const CMatrix D = G - CMatrix::Identity(G.rows(), G.cols());
  return D.size() > 0 ? D.cwiseAbs().maxCoeff() : 0.0;
}

namespace {

template <class F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    std::string what = e.what();
    const std::string prefix = std::string(stage) + ": ";
    if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
    throw StageError(stage, what);
  }
}

std::string format_warning(const char* what, double value) {
  std::ostringstream os;
  os << what << " (" << value << ")";
  return os.str();
}

}  // namespace

FitResult fit(const SnapshotMatrix& V, const FitOptions& options) {
  FitResult result;
  FitDiagnostics& diag = result.diagnostics;
  diag.requested_rank = options.rank;
  const InnerProduct ip{V.dx()};

  const auto split = run_stage("shift_split", [&] { return shift_split(V); });
  const Matrix& V0 = split.first;
  const Matrix& V1 = split.second;

  const Index bound = std::min(V0.rows(), V0.cols());
  if (options.rank < 1 || options.rank > bound) {
    throw StageError("fit", "rank " + std::to_string(options.rank) + " outside [1, " +
                                std::to_string(bound) + "]");
  }

  RsvdResult sampled = run_stage("rsvd", [&] {
    RsvdOptions ro;
    ro.target_rank = options.rank;
    ro.seed = options.seed;
    ro.oversampling = options.oversampling;
    ro.power_iterations = options.power_iterations;
    ro.orthonormalize_sample = options.orthonormalize_sample;
    return rsvd(V0, ro);
  });
  diag.degenerate_input = sampled.degenerate;
  if (sampled.degenerate) diag.warnings.emplace_back("snapshot data is identically zero");

  const Propagator prop = run_stage("propagator", [&] { return propagator(sampled.factors, V1); });
  linalg::SvdFactors factors = sampled.factors;
  if (prop.retained < factors.sigma.size()) {
    diag.truncated_directions = factors.sigma.size() - prop.retained;
    diag.warnings.push_back("truncated " + std::to_string(diag.truncated_directions) +
                            " near-zero singular directions");
    factors.U = factors.U.leftCols(prop.retained).eval();
    factors.W = factors.W.leftCols(prop.retained).eval();
    factors.sigma = factors.sigma.head(prop.retained).eval();
    factors.rank_used = prop.retained;
  }
  diag.propagator_norm = prop.S.norm();
  {
    const Matrix predicted = factors.U * (prop.S * (factors.U.transpose() * V0));
    const double v1n = V1.norm();
    diag.koopman_residual = v1n > 0.0 ? (V1 - predicted).norm() / v1n : 0.0;
  }

  const linalg::EigenPairs eig = run_stage("eigen", [&] { return linalg::eig_general(prop.S); });
  diag.eigen_residual = eig.max_residual;
  if (eig.max_residual > 1e-8 * std::max(diag.propagator_norm, 1e-300)) {
    diag.warnings.push_back(format_warning("eigen-residual above 1e-8 ||S||_F", eig.max_residual));
  }

  ModeSet modes = run_stage("modes", [&] { return rod_modes(factors, eig, ip); });
  diag.dropped_modes = modes.dropped;
  if (!modes.dropped.empty()) {
    diag.warnings.push_back("dropped " + std::to_string(modes.dropped.size()) +
                            " zero-norm mode combinations");
  }
  if (modes.modes.cols() == 0) {
    throw StageError("modes", "no usable shape modes");
  }
  if (options.reorthonormalize_modes) {
    const auto qr = linalg::qr_factor(CMatrix(modes.modes * std::sqrt(ip.dx)));
    modes.modes = qr.Q / std::sqrt(ip.dx);
  }

  const AmplitudeFit amp = run_stage("amplitudes", [&] { return amplitudes(modes.modes, V, ip); });
  diag.amplitude_condition = amp.condition;
  diag.amplitude_residual = amp.relative_residual;
  if (amp.ill_conditioned) {
    diag.warnings.push_back(
        format_warning("mode matrix ill-conditioned, minimum-norm amplitudes", amp.condition));
  }

  RodModel& model = result.model;
  model.modes = std::move(modes.modes);
  model.amplitudes = amp.amplitudes;
  model.eigenvalues.resize(static_cast<Index>(modes.kept.size()));
  for (Index j = 0; j < model.eigenvalues.size(); ++j) {
    model.eigenvalues(j) = eig.values(modes.kept[static_cast<size_t>(j)]);
  }
  model.rank = model.modes.cols();
  model.seed = options.seed;
  model.grid = V.grid();

  diag.gram_deviation = gram_deviation(model.modes, ip);
  const Reconstruction rec = reconstruct_checked(model);
  diag.imaginary_residue = rec.imaginary_residue;
  if (rec.residue_exceeded) {
    diag.warnings.push_back(
        format_warning("reconstruction imaginary residue above 1e-6 max|u|", rec.imaginary_residue));
  }
  return result;
}

RodModel fit(const SnapshotMatrix& V, Index rank, std::uint64_t seed) {
  FitOptions options;
  options.rank = rank;
  options.seed = seed;
  return fit(V, options).model;
}

Reconstruction reconstruct_checked(const RodModel& model) {
  if (model.modes.cols() != model.amplitudes.rows()) {
    throw std::invalid_argument("reconstruct: mode and amplitude counts differ");
  }
  const CMatrix field = model.modes * model.amplitudes;
  Matrix re = field.real();
  const double imag = field.size() > 0 ? field.imag().cwiseAbs().maxCoeff() : 0.0;
  const double peak = re.size() > 0 ? re.cwiseAbs().maxCoeff() : 0.0;
  Reconstruction out{SnapshotMatrix(std::move(re), model.grid), imag, imag > 1e-6 * peak};
  return out;
}

SnapshotMatrix reconstruct(const RodModel& model) { return reconstruct_checked(model).data; }

}  // namespace rod
