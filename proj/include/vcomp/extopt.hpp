#pragma once

// Minimization of the ensemble entropy S(sum_i p_i rho_i^ext) over extensions
// rho_i^ext of the signal states.
//
// Every extension of rho_i on system (x) ancilla arises as
//   rho_i^ext = Tr_pur[(1 (x) W_i) |psi_i><psi_i| (1 (x) W_i)^dagger]
// where psi_i is the canonical purification of rho_i on system (x) R and
// W_i : R -> ancilla (x) purifier is an isometry. W_i is parameterized as
// exp(G_i) E with G_i anti-Hermitian on ancilla (x) purifier and E the
// embedding |k> -> |k>. Zero parameters give the trivial extension
// rho_i (x) |0><0| whenever purifier_dim >= dim rho_i.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "vcomp/bounds.hpp"
#include "vcomp/fidelity.hpp"
#include "vcomp/matstack.hpp"
#include "vcomp/parallel.hpp"
#include "vcomp/rng.hpp"
#include "vcomp/states.hpp"

namespace vcomp {

inline constexpr double kGradientRegularization = 1e-10;

struct ExtensionAssignment {
  std::size_t ancilla_dim = 1;
  std::size_t purifier_dim = 1;
  // One generator per signal: D x D real entries, row-major, D = ancilla * purifier.
  std::vector<RealVector> params;

  std::size_t generator_dim() const { return ancilla_dim * purifier_dim; }
  std::size_t signals() const { return params.size(); }
  std::size_t parameter_count() const { return signals() * generator_dim() * generator_dim(); }

  static ExtensionAssignment trivial(std::size_t signals, std::size_t ancilla_dim,
                                     std::size_t purifier_dim) {
    ExtensionAssignment a{ancilla_dim, purifier_dim, {}};
    const std::size_t d = ancilla_dim * purifier_dim;
    a.params.assign(signals, RealVector::Zero(d * d));
    return a;
  }
};

inline std::size_t default_purifier_dim(std::size_t system_dim, std::size_t ancilla_dim) {
  return system_dim * ancilla_dim;
}

// Places a solution for a smaller ancilla into a larger ancilla space with the
// same purifier; the induced extensions are unchanged up to the embedding of
// the ancilla.
inline ExtensionAssignment embed_assignment(const ExtensionAssignment& a, std::size_t ancilla_dim) {
  if (ancilla_dim < a.ancilla_dim) throw ShapeError("embed_assignment: target ancilla is smaller");
  ExtensionAssignment out = ExtensionAssignment::trivial(a.signals(), ancilla_dim, a.purifier_dim);
  const auto small = static_cast<Eigen::Index>(a.generator_dim());
  const auto big = static_cast<Eigen::Index>(out.generator_dim());
  for (std::size_t i = 0; i < a.signals(); ++i) {
    for (Eigen::Index j = 0; j < small; ++j)
      for (Eigen::Index k = 0; k < small; ++k) out.params[i](j * big + k) = a.params[i](j * small + k);
  }
  return out;
}

namespace detail {

// G(j,j) = i P(j,j); for j < k: G(j,k) = P(j,k) + i P(k,j), G(k,j) = -conj(G(j,k)).
inline ComplexMatrix generator_from_params(const RealVector& p, std::size_t d) {
  if (static_cast<std::size_t>(p.size()) != d * d) {
    throw ShapeError("extension parameters: expected " + std::to_string(d * d) + " entries");
  }
  ComplexMatrix g(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    g(j, j) = Complex(0.0, p(j * d + j));
    for (std::size_t k = j + 1; k < d; ++k) {
      const Complex z(p(j * d + k), p(k * d + j));
      g(j, k) = z;
      g(k, j) = -std::conj(z);
    }
  }
  return g;
}

// Gradient with respect to the real parameters given M with
// df = Re Tr(M^dagger dG).
inline RealVector params_gradient(const ComplexMatrix& m) {
  const auto d = static_cast<std::size_t>(m.rows());
  RealVector grad(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    grad(j * d + j) = m(j, j).imag();
    for (std::size_t k = j + 1; k < d; ++k) {
      grad(j * d + k) = m(j, k).real() - m(k, j).real();
      grad(k * d + j) = m(j, k).imag() + m(k, j).imag();
    }
  }
  return grad;
}

// exp(G) for anti-Hermitian G = V diag(i theta) V^dagger.
struct UnitaryExp {
  RealVector theta;
  ComplexMatrix v;
  ComplexMatrix u;
};

inline UnitaryExp unitary_exp(const ComplexMatrix& g) {
  const Complex minus_i(0.0, -1.0);
  const auto eig = hermitian_eig_symmetrized(minus_i * g);
  ComplexVector phases(eig.eigenvalues.size());
  for (Eigen::Index j = 0; j < phases.size(); ++j) phases(j) = std::polar(1.0, eig.eigenvalues(j));
  ComplexMatrix u = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
  return {eig.eigenvalues, eig.eigenvectors, std::move(u)};
}

// Adjoint of the Frechet derivative of exp at G, applied to N.
inline ComplexMatrix unitary_exp_adjoint(const UnitaryExp& e, const ComplexMatrix& n) {
  ComplexMatrix inner = e.v.adjoint() * n * e.v;
  for (Eigen::Index j = 0; j < inner.rows(); ++j) {
    for (Eigen::Index k = 0; k < inner.cols(); ++k) {
      const double mean = 0.5 * (e.theta(j) + e.theta(k));
      const double half = 0.5 * (e.theta(j) - e.theta(k));
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      inner(j, k) *= std::conj(std::polar(sinc, mean));
    }
  }
  return e.v * inner * e.v.adjoint();
}

// Purification matrix of rho restricted to at most `capacity` purifying
// columns (rank permitting).
inline ComplexMatrix signal_purification(const ComplexMatrix& rho, std::size_t capacity) {
  const auto d = static_cast<std::size_t>(rho.rows());
  try {
    return purification_matrix(rho, std::min(d, capacity));
  } catch (const ShapeError&) {
    throw ShapeError("extension: ancilla_dim * purifier_dim = " + std::to_string(capacity) +
                     " is smaller than the rank of the signal state");
  }
}

struct SignalExtension {
  UnitaryExp exp;
  ComplexMatrix phi;  // (system * ancilla) x purifier
};

// phi = reshape(psi W^T) with W = exp(G)[:, :r].
inline SignalExtension build_extension(const ComplexMatrix& psi, const RealVector& params,
                                       std::size_t ancilla_dim, std::size_t purifier_dim) {
  const std::size_t gen = ancilla_dim * purifier_dim;
  auto e = unitary_exp(generator_from_params(params, gen));
  const ComplexMatrix w = e.u.leftCols(psi.cols());
  const ComplexMatrix flat = psi * w.transpose();  // system x (ancilla * purifier)
  ComplexMatrix phi = unflatten(flatten(flat), psi.rows() * ancilla_dim, purifier_dim);
  return {std::move(e), std::move(phi)};
}

// Gradient contribution of one signal given Gamma = df/d(rho^ext), scaled by p.
inline RealVector extension_gradient(const ComplexMatrix& psi, const SignalExtension& ext,
                                     const ComplexMatrix& gamma, double p, std::size_t ancilla_dim,
                                     std::size_t purifier_dim) {
  const std::size_t gen = ancilla_dim * purifier_dim;
  const ComplexMatrix m_phi = 2.0 * p * gamma * ext.phi;
  const ComplexMatrix m_flat = unflatten(flatten(m_phi), psi.rows(), gen);
  const ComplexMatrix m_w = m_flat.transpose() * psi.conjugate();  // gen x r
  ComplexMatrix m_u = ComplexMatrix::Zero(gen, gen);
  m_u.leftCols(psi.cols()) = m_w;
  return params_gradient(unitary_exp_adjoint(ext.exp, m_u));
}

// Shared state for evaluating the objective of one ensemble and dimension choice.
class ExtensionObjective {
 public:
  ExtensionObjective(const Ensemble& e, std::size_t ancilla_dim, std::size_t purifier_dim)
      : ensemble_(e), ancilla_(ancilla_dim), purifier_(purifier_dim) {
    if (ancilla_dim == 0 || purifier_dim == 0) throw ValidationError("extension: dimensions must be positive");
    psi_.reserve(e.size());
    for (const auto& s : e.states()) psi_.push_back(signal_purification(s.matrix(), ancilla_dim * purifier_dim));
  }

  std::size_t block_size() const { return ancilla_ * purifier_ * ancilla_ * purifier_; }
  std::size_t dimension() const { return block_size() * ensemble_.size(); }
  std::size_t extended_dim() const { return ensemble_.dim() * ancilla_; }

  ComplexMatrix total_density(const RealVector& x, std::vector<SignalExtension>* cache = nullptr) const {
    const std::size_t n = extended_dim();
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < ensemble_.size(); ++i) {
      auto ext = build_extension(psi_[i], x.segment(i * block_size(), block_size()), ancilla_, purifier_);
      rho += ensemble_.prob(i) * ext.phi * ext.phi.adjoint();
      if (cache) cache->push_back(std::move(ext));
    }
    return 0.5 * (rho + rho.adjoint());
  }

  double entropy(const RealVector& x) const { return von_neumann_entropy(total_density(x)); }

  double regularized_entropy(const RealVector& x) const {
    const ComplexMatrix rho = total_density(x);
    return entropy_of_spectrum(regularized_spectrum(rho).eigenvalues);
  }

  // Gradient of the regularized entropy; also returns the unregularized value.
  RealVector gradient(const RealVector& x, double* value = nullptr) const {
    std::vector<SignalExtension> cache;
    const ComplexMatrix rho = total_density(x, &cache);
    const auto eig = regularized_spectrum(rho);
    if (value) {
      const RealVector shifted = eig.eigenvalues.array() - kGradientRegularization / static_cast<double>(rho.rows());
      *value = entropy_of_spectrum(shifted);
    }
    const ComplexMatrix gamma = hermitian_function(eig, [](double l) {
      return -(std::log2(std::max(l, std::numeric_limits<double>::min())) + 1.0 / std::numbers::ln2);
    });
    RealVector grad(dimension());
    for (std::size_t i = 0; i < ensemble_.size(); ++i) {
      grad.segment(i * block_size(), block_size()) =
          extension_gradient(psi_[i], cache[i], gamma, ensemble_.prob(i), ancilla_, purifier_);
    }
    return grad;
  }

  RealVector flatten_assignment(const ExtensionAssignment& a) const {
    if (a.signals() != ensemble_.size() || a.ancilla_dim != ancilla_ || a.purifier_dim != purifier_) {
      throw ShapeError("extension assignment does not match ensemble or dimensions");
    }
    RealVector x(dimension());
    for (std::size_t i = 0; i < a.signals(); ++i) {
      if (static_cast<std::size_t>(a.params[i].size()) != block_size()) {
        throw ShapeError("extension assignment: wrong parameter count for signal " + std::to_string(i));
      }
      x.segment(i * block_size(), block_size()) = a.params[i];
    }
    return x;
  }

  ExtensionAssignment unflatten_assignment(const RealVector& x) const {
    ExtensionAssignment a{ancilla_, purifier_, {}};
    for (std::size_t i = 0; i < ensemble_.size(); ++i) a.params.push_back(x.segment(i * block_size(), block_size()));
    return a;
  }

 private:
  static EigDecomposition regularized_spectrum(const ComplexMatrix& rho) {
    const auto n = rho.rows();
    const ComplexMatrix reg =
        rho + (kGradientRegularization / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
    return hermitian_eig_symmetrized(reg);
  }

  const Ensemble& ensemble_;
  std::size_t ancilla_;
  std::size_t purifier_;
  std::vector<ComplexMatrix> psi_;
};

}  // namespace detail

// rho_i^ext on system (x) ancilla with Tr_anc rho_i^ext = rho_i.
inline DensityMatrix extension_from_params(const DensityMatrix& rho_i, const RealVector& params_i,
                                           std::size_t ancilla_dim, std::size_t purifier_dim) {
  if (ancilla_dim == 0 || purifier_dim == 0) throw ValidationError("extension: dimensions must be positive");
  const ComplexMatrix psi = detail::signal_purification(rho_i.matrix(), ancilla_dim * purifier_dim);
  const auto ext = detail::build_extension(psi, params_i, ancilla_dim, purifier_dim);
  Dims dims = rho_i.factor_dims();
  dims.push_back(ancilla_dim);
  ComplexMatrix m = ext.phi * ext.phi.adjoint();
  return DensityMatrix::unchecked(0.5 * (m + m.adjoint()), std::move(dims));
}

inline std::vector<DensityMatrix> extensions_from_assignment(const Ensemble& e, const ExtensionAssignment& a) {
  if (a.signals() != e.size()) throw ShapeError("extension assignment does not match ensemble size");
  std::vector<DensityMatrix> out;
  out.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    out.push_back(extension_from_params(e.state(i), a.params[i], a.ancilla_dim, a.purifier_dim));
  }
  return out;
}

// S(sum_i p_i rho_i^ext) in bits.
inline double assignment_entropy(const Ensemble& e, const ExtensionAssignment& a) {
  const detail::ExtensionObjective objective(e, a.ancilla_dim, a.purifier_dim);
  return objective.entropy(objective.flatten_assignment(a));
}

// S(rho^ext + eps I/d), the smooth objective whose gradient entropy_gradient returns.
inline double regularized_assignment_entropy(const Ensemble& e, const ExtensionAssignment& a) {
  const detail::ExtensionObjective objective(e, a.ancilla_dim, a.purifier_dim);
  return objective.regularized_entropy(objective.flatten_assignment(a));
}

// Gradient of the regularized entropy with respect to all parameters, signal
// blocks concatenated in ensemble order.
inline RealVector entropy_gradient(const Ensemble& e, const ExtensionAssignment& a) {
  const detail::ExtensionObjective objective(e, a.ancilla_dim, a.purifier_dim);
  return objective.gradient(objective.flatten_assignment(a));
}

struct ExtensionCheck {
  bool ok = false;
  double residual = 0.0;  // trace norm of Tr_anc(rho_ext) - rho
  std::string reason;

  explicit operator bool() const { return ok; }
};

// Checks that rho_ext is a valid state whose ancilla trace reproduces rho.
// The ancilla is the trailing factor of dimension rho_ext.dim() / rho.dim().
inline ExtensionCheck verify_extension(const DensityMatrix& rho_ext, const DensityMatrix& rho, double tol) {
  ExtensionCheck out;
  if (rho.dim() == 0 || rho_ext.dim() % rho.dim() != 0) {
    out.reason = "dimension of extension is not a multiple of the system dimension";
    return out;
  }
  try {
    DensityMatrix validated(rho_ext.matrix(), rho_ext.factor_dims());
  } catch (const ValidationError& e) {
    out.reason = e.what();
    return out;
  }
  const ComplexMatrix reduced = trace_out_second(rho_ext.matrix(), rho.dim(), rho_ext.dim() / rho.dim());
  out.residual = trace_norm(reduced - rho.matrix());
  out.ok = out.residual <= tol;
  if (!out.ok) out.reason = "partial trace residual " + std::to_string(out.residual) + " exceeds tolerance";
  return out;
}

struct OptimizerConfig {
  std::size_t multistarts = 8;
  std::size_t max_iters = 500;
  double step_tolerance = 1e-12;
  double entropy_tolerance = 1e-12;
  std::uint64_t seed = 0;
  std::size_t ancilla_dim = 2;
  std::size_t purifier_dim = 0;  // 0 selects block system dim * ancilla_dim
  std::size_t block_length = 1;
  double init_scale = 1.0;       // standard deviation of random generator entries
  std::size_t threads = 0;       // 0 selects hardware concurrency
  DimensionGuard guard;
};

enum class StepMethod { kStart, kGradient, kCoordinate };

inline const char* to_string(StepMethod m) {
  switch (m) {
    case StepMethod::kStart: return "start";
    case StepMethod::kGradient: return "gradient";
    case StepMethod::kCoordinate: return "coordinate";
  }
  return "?";
}

struct IterationRecord {
  std::size_t start = 0;
  std::size_t iteration = 0;
  double entropy = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
  StepMethod method = StepMethod::kStart;

  bool operator==(const IterationRecord&) const = default;
};

struct StartSummary {
  std::size_t start = 0;
  double initial_entropy = 0.0;
  double final_entropy = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool used_fallback = false;
};

struct MinimizationResult {
  double best_entropy = 0.0;        // S(rho^ext) of the block ensemble, bits
  double per_signal_entropy = 0.0;  // best_entropy / block_length
  std::size_t best_start = 0;
  std::size_t block_length = 1;
  ExtensionAssignment best_assignment;
  std::vector<IterationRecord> history;  // grouped by start, in start order
  std::vector<StartSummary> starts;
};

namespace detail {

struct StartOutcome {
  RealVector x;
  StartSummary summary;
  std::vector<IterationRecord> history;
};

// Greedy +-h coordinate moves with halving; returns true if it improved f.
inline bool coordinate_search(const ExtensionObjective& objective, RealVector& x, double& f, double h,
                              double min_step, std::size_t max_sweeps) {
  bool improved_any = false;
  for (std::size_t sweep = 0; sweep < max_sweeps && h >= min_step; ++sweep) {
    bool improved = false;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      for (double sign : {1.0, -1.0}) {
        const double old = x(j);
        x(j) = old + sign * h;
        const double trial = objective.entropy(x);
        if (trial < f) {
          f = trial;
          improved = true;
          break;
        }
        x(j) = old;
      }
    }
    if (improved) {
      improved_any = true;
      break;
    }
    h *= 0.5;
  }
  return improved_any;
}

inline StartOutcome run_start(const ExtensionObjective& objective, RealVector x, std::size_t start,
                              const OptimizerConfig& cfg, double floor) {
  StartOutcome out;
  out.summary.start = start;
  double f = 0.0;
  RealVector g = objective.gradient(x, &f);
  out.summary.initial_entropy = f;
  out.history.push_back({start, 0, f, g.norm(), 0.0, StepMethod::kStart});

  double step = 1.0;
  RealVector prev_x, prev_g;
  std::size_t stalls = 0;
  std::size_t iter = 0;
  for (iter = 1; iter <= cfg.max_iters; ++iter) {
    if (f <= floor + 1e-12 || !(g.norm() > 1e-14)) {
      out.summary.converged = true;
      break;
    }
    // Barzilai-Borwein trial step, then Armijo backtracking.
    if (prev_x.size() > 0) {
      const RealVector s = x - prev_x, y = g - prev_g;
      const double sy = s.dot(y);
      step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-8, 1e4) : std::min(2.0 * step, 1e4);
    }
    const double g2 = g.squaredNorm();
    bool accepted = false;
    RealVector trial_x;
    double trial_f = f;
    for (int k = 0; k < 60; ++k) {
      trial_x = x - step * g;
      trial_f = objective.entropy(trial_x);
      if (std::isfinite(trial_f) && trial_f <= f - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (accepted) {
      const double decrease = f - trial_f;
      const double moved = step * std::sqrt(g2);
      prev_x = std::move(x);
      prev_g = std::move(g);
      x = std::move(trial_x);
      g = objective.gradient(x, &f);
      out.history.push_back({start, iter, f, g.norm(), moved, StepMethod::kGradient});
      stalls = decrease < cfg.entropy_tolerance ? stalls + 1 : 0;
      if (stalls >= 5 || moved < cfg.step_tolerance) {
        out.summary.converged = true;
        break;
      }
      continue;
    }
    // Regularized gradient is unreliable here; fall back to coordinate search.
    out.summary.used_fallback = true;
    const double before = f;
    if (!coordinate_search(objective, x, f, 1e-2, cfg.step_tolerance, 30)) {
      out.summary.converged = true;
      break;
    }
    prev_x.resize(0);
    step = 1.0;
    g = objective.gradient(x, &f);
    out.history.push_back({start, iter, f, g.norm(), before - f, StepMethod::kCoordinate});
  }
  out.summary.iterations = std::min(iter, cfg.max_iters);
  out.summary.final_entropy = f;
  out.x = std::move(x);
  return out;
}

}  // namespace detail

// Multistart gradient descent over extension assignments of the
// block_length-fold product ensemble. Start 0 is the trivial assignment,
// followed by the warm starts, then seeded random generators.
inline MinimizationResult minimize_extension_entropy(const Ensemble& e, const OptimizerConfig& cfg,
                                                     const std::vector<ExtensionAssignment>& warm_starts = {}) {
  if (cfg.multistarts == 0 || cfg.block_length == 0 || cfg.ancilla_dim == 0) {
    throw ValidationError("optimizer: multistarts, block_length and ancilla_dim must be positive");
  }
  const Ensemble block = cfg.block_length == 1 ? e : product_ensemble(e, cfg.block_length, cfg.guard);
  const std::size_t cap = ancilla_cap(cfg.block_length, e.dim(), cfg.guard);
  if (cfg.ancilla_dim > cap) {
    throw ValidationError("optimizer: ancilla_dim " + std::to_string(cfg.ancilla_dim) +
                          " exceeds the cap " + std::to_string(cap));
  }
  const std::size_t purifier =
      cfg.purifier_dim == 0 ? default_purifier_dim(block.dim(), cfg.ancilla_dim) : cfg.purifier_dim;
  cfg.guard.check(block.dim() * cfg.ancilla_dim * purifier, "optimizer extension space");
  const detail::ExtensionObjective objective(block, cfg.ancilla_dim, purifier);
  const double floor = holevo_quantity(block);

  std::vector<RealVector> initial;
  initial.push_back(RealVector::Zero(objective.dimension()));
  for (const auto& w : warm_starts) initial.push_back(objective.flatten_assignment(w));
  while (initial.size() < cfg.multistarts) {
    Rng rng(derive_seed(cfg.seed, initial.size()));
    RealVector x(objective.dimension());
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = cfg.init_scale * rng.normal();
    initial.push_back(std::move(x));
  }

  std::vector<detail::StartOutcome> outcomes(initial.size());
  detail::run_parallel(initial.size(), cfg.threads, [&](std::size_t i) {
    outcomes[i] = detail::run_start(objective, initial[i], i, cfg, floor);
  });

  MinimizationResult result;
  result.block_length = cfg.block_length;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].summary.final_entropy < outcomes[best].summary.final_entropy) best = i;
    result.starts.push_back(outcomes[i].summary);
    result.history.insert(result.history.end(), outcomes[i].history.begin(), outcomes[i].history.end());
  }
  result.best_start = best;
  result.best_entropy = outcomes[best].summary.final_entropy;
  result.per_signal_entropy = result.best_entropy / static_cast<double>(cfg.block_length);
  result.best_assignment = objective.unflatten_assignment(outcomes[best].x);
  return result;
}

}  // namespace vcomp
