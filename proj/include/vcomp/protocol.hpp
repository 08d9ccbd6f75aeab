#pragma once

// Finite-block simulation of typical-subspace (Jozsa-Schumacher) compression
// and of the extension protocol: signals are replaced by extensions, the
// extended sequence is compressed, and the receiver traces out the ancillas.
//
// All work happens in the eigenbasis of the per-site density matrix. The
// typical subspace is spanned by product eigenvectors, so a sequence's
// projection onto it is a |T| x |T| matrix whose entries factor over sites.
// Dense operators on the full block space are only built when asked for.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "vcomp/bounds.hpp"
#include "vcomp/errors.hpp"
#include "vcomp/extopt.hpp"
#include "vcomp/fidelity.hpp"
#include "vcomp/matstack.hpp"
#include "vcomp/parallel.hpp"
#include "vcomp/rng.hpp"
#include "vcomp/states.hpp"

namespace vcomp {

inline constexpr std::size_t kExactEnumerationLimit = 4096;
inline constexpr std::size_t kMaxExactSequences = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultDenseFidelityLimit = 2048;
inline constexpr double kPurityTolerance = 1e-12;
inline constexpr double kMassSlack = 1e-12;

inline double rate_of(std::size_t channel_dim, std::size_t signals) {
  if (channel_dim == 0 || signals == 0) throw ValidationError("rate_of: arguments must be positive");
  return std::log2(static_cast<double>(channel_dim)) / static_cast<double>(signals);
}

// Largest channel dimension whose rate stays within the budget.
inline std::size_t dim_cap_for_rate(double rate, std::size_t n) {
  if (!(rate >= 0.0) || n == 0) throw ValidationError("dim_cap_for_rate: rate must be >= 0 and n positive");
  const double cap = std::floor(std::exp2(rate * static_cast<double>(n)) + 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(cap));
}

// Number of length-n strings over d symbols with at most k symbols other
// than the most likely one: sum_{j<=k} C(n,j) (d-1)^j.
inline std::size_t minority_dim_cap(std::size_t n, std::size_t d, std::size_t k) {
  if (n == 0 || d == 0) throw ValidationError("minority_dim_cap: n and d must be positive");
  double total = 0.0;
  double binom = 1.0;
  for (std::size_t j = 0; j <= std::min(k, n); ++j) {
    if (j > 0) binom = binom * static_cast<double>(n - j + 1) / static_cast<double>(j);
    total += binom * std::pow(static_cast<double>(d - 1), static_cast<double>(j));
  }
  return static_cast<std::size_t>(std::llround(total));
}

struct SubspaceTarget {
  enum class Kind { kMass, kDimCap };
  Kind kind = Kind::kMass;
  double eps = 0.0;
  std::size_t cap = 0;

  static SubspaceTarget mass(double eps) { return {Kind::kMass, eps, 0}; }
  static SubspaceTarget dim_cap(std::size_t m) { return {Kind::kDimCap, 0.0, m}; }
};

// Span of the highest-probability eigenvalue strings of rho^(x)n.
struct TypicalSubspace {
  std::size_t block_length = 0;
  Dims site_dims;
  RealVector site_eigenvalues;       // descending
  ComplexMatrix site_eigenvectors;   // columns
  std::vector<std::size_t> labels;   // dim() strings of block_length eigen-indices
  std::vector<double> string_probs;  // descending
  double retained_mass = 0.0;

  std::size_t dim() const { return string_probs.size(); }
  std::size_t site_dim() const { return static_cast<std::size_t>(site_eigenvectors.rows()); }
  std::size_t label(std::size_t t, std::size_t j) const { return labels[t * block_length + j]; }

  Dims block_dims() const {
    Dims out;
    for (std::size_t j = 0; j < block_length; ++j) out.insert(out.end(), site_dims.begin(), site_dims.end());
    return out;
  }

  ComplexVector basis_vector(std::size_t t, const DimensionGuard& guard = {}) const {
    ComplexVector v = site_eigenvectors.col(static_cast<Eigen::Index>(label(t, 0)));
    for (std::size_t j = 1; j < block_length; ++j) {
      v = tensor_product(v, ComplexVector(site_eigenvectors.col(static_cast<Eigen::Index>(label(t, j)))), guard);
    }
    return v;
  }

  std::vector<PureStateVector> basis(const DimensionGuard& guard = {}) const {
    std::vector<PureStateVector> out;
    out.reserve(dim());
    for (std::size_t t = 0; t < dim(); ++t) out.emplace_back(basis_vector(t, guard), block_dims());
    return out;
  }

  // Dense orthogonal projector on the block space.
  ComplexMatrix projector(const DimensionGuard& guard = {}) const {
    const std::size_t full = checked_power(site_dim(), block_length);
    guard.check(full, "typical subspace projector");
    ComplexMatrix basis_cols(full, dim());
    for (std::size_t t = 0; t < dim(); ++t) basis_cols.col(static_cast<Eigen::Index>(t)) = basis_vector(t, guard);
    return basis_cols * basis_cols.adjoint();
  }
};

inline TypicalSubspace typical_subspace(const DensityMatrix& rho, std::size_t n, const SubspaceTarget& target,
                                        const DimensionGuard& guard = {}) {
  if (n == 0) throw ValidationError("typical_subspace: block length must be positive");
  const std::size_t d = rho.dim();
  const std::size_t count = checked_power(d, n);
  guard.check(count, "typical_subspace string count");
  if (target.kind == SubspaceTarget::Kind::kMass && !(target.eps >= 0.0 && target.eps < 1.0)) {
    throw ValidationError("typical_subspace: eps must lie in [0, 1)");
  }
  if (target.kind == SubspaceTarget::Kind::kDimCap && target.cap == 0) {
    throw ValidationError("typical_subspace: dim cap must be positive");
  }

  TypicalSubspace ts;
  ts.block_length = n;
  ts.site_dims = rho.factor_dims();
  const auto eig = hermitian_eig_symmetrized(rho.matrix());
  ts.site_eigenvalues = eig.eigenvalues.cwiseMax(0.0);
  ts.site_eigenvectors = eig.eigenvectors;

  // Probabilities from symbol counts, multiplied in a fixed order so strings
  // that are permutations of each other tie exactly.
  std::vector<double> probs(count);
  std::vector<std::size_t> counts(d);
  for (std::size_t s = 0; s < count; ++s) {
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t rest = s;
    for (std::size_t j = 0; j < n; ++j) {
      ++counts[rest % d];
      rest /= d;
    }
    double p = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t c = 0; c < counts[a]; ++c) p *= ts.site_eigenvalues(static_cast<Eigen::Index>(a));
    }
    probs[s] = p;
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });

  std::size_t m = 0;
  if (target.kind == SubspaceTarget::Kind::kDimCap) {
    m = std::min(target.cap, count);
  } else {
    double acc = 0.0;
    while (m < count && acc < 1.0 - target.eps - kMassSlack) acc += probs[order[m++]];
    m = std::max<std::size_t>(m, 1);
  }

  ts.labels.resize(m * n);
  ts.string_probs.resize(m);
  double mass = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const auto digits = decode_multi_index(order[t], d, n);
    std::copy(digits.begin(), digits.end(), ts.labels.begin() + static_cast<std::ptrdiff_t>(t * n));
    ts.string_probs[t] = probs[order[t]];
    mass += probs[order[t]];
  }
  ts.retained_mass = std::min(mass, 1.0);
  return ts;
}

// P sigma P + Tr[(I - P) sigma] |junk><junk|, with the first basis string as junk.
inline DensityMatrix js_compress_sequence(const DensityMatrix& seq, const TypicalSubspace& ts,
                                          const DimensionGuard& guard = {}) {
  if (seq.dim() != checked_power(ts.site_dim(), ts.block_length)) {
    throw ShapeError("js_compress_sequence: sequence is not on the block space of the subspace");
  }
  const ComplexMatrix p = ts.projector(guard);
  ComplexMatrix out = p * seq.matrix() * p;
  const double junk_mass = std::max(0.0, 1.0 - out.trace().real());
  const ComplexVector junk = ts.basis_vector(0, guard);
  out += junk_mass * projector(junk);
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(std::move(out), seq.factor_dims());
}

struct Sampling {
  enum class Mode { kAuto, kExact, kMonteCarlo };
  Mode mode = Mode::kAuto;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;

  static Sampling exact() { return {Mode::kExact, 0, 0}; }
  static Sampling monte_carlo(std::size_t samples, std::uint64_t seed) { return {Mode::kMonteCarlo, samples, seed}; }
  // Exact up to kExactEnumerationLimit sequences, Monte-Carlo beyond.
  static Sampling automatic(std::size_t samples, std::uint64_t seed) { return {Mode::kAuto, samples, seed}; }
};

struct ProtocolOptions {
  std::size_t threads = 0;
  DimensionGuard guard;
  // Largest original block dimension for which the post-trace fidelity is
  // evaluated on dense matrices.
  std::size_t dense_limit = kDefaultDenseFidelityLimit;
};

struct SequenceRecord {
  std::vector<std::size_t> signals;  // one index per channel site
  double probability = 0.0;
  double fidelity = 0.0;            // after the ancilla trace
  double extension_fidelity = 0.0;  // before the ancilla trace
  double junk_mass = 0.0;
};

struct ProtocolResult {
  std::size_t block_length = 0;  // original signals per channel use
  std::size_t n_block = 1;
  std::size_t sites = 0;
  std::size_t channel_dim = 0;
  std::size_t ancilla_dim = 1;
  double rate = 0.0;
  double avg_fidelity = 0.0;
  double extension_avg_fidelity = 0.0;
  double std_error = 0.0;
  double retained_mass = 0.0;
  std::size_t compressed_support_dim = 0;
  bool sampled = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<SequenceRecord> per_sequence;
  BoundReport trace_monotonicity;
};

namespace detail {

struct SiteSignal {
  ComplexMatrix rotated;  // U^dagger omega U in the site eigenbasis
  bool pure = false;
  ComplexVector amplitudes;  // U^dagger psi when pure
};

struct OriginalSignal {
  ComplexMatrix rho;
  bool pure = false;
  ComplexVector vector;
};

inline std::pair<bool, ComplexVector> pure_vector(const ComplexMatrix& rho) {
  const auto eig = hermitian_eig_symmetrized(rho);
  if (eig.eigenvalues(0) < 1.0 - kPurityTolerance) return {false, {}};
  return {true, eig.eigenvectors.col(0)};
}

class ProtocolEngine {
 public:
  // originals: block signals; sites: their extensions on system (x) ancilla
  // (equal to the originals when ancilla_dim == 1).
  ProtocolEngine(const Ensemble& originals, const std::vector<DensityMatrix>& sites, std::size_t ancilla_dim,
                 std::size_t k, const SubspaceTarget& target, const ProtocolOptions& opts)
      : probs_(originals.probs()), ancilla_dim_(ancilla_dim), k_(k), opts_(opts) {
    if (k == 0) throw ValidationError("protocol: number of blocks must be positive");
    if (sites.size() != originals.size()) throw ShapeError("protocol: extension count does not match ensemble");
    system_dim_ = originals.dim();
    for (const auto& s : sites) {
      if (s.dim() != system_dim_ * ancilla_dim) throw ShapeError("protocol: extension is not on system (x) ancilla");
    }
    ComplexMatrix rho = ComplexMatrix::Zero(sites[0].dim(), sites[0].dim());
    for (std::size_t i = 0; i < sites.size(); ++i) rho += probs_[i] * sites[i].matrix();
    ts_ = typical_subspace(DensityMatrix::unchecked(rho, sites[0].factor_dims()), k, target, opts.guard);

    const ComplexMatrix& u = ts_.site_eigenvectors;
    for (const auto& s : sites) {
      SiteSignal sig;
      sig.rotated = u.adjoint() * s.matrix() * u;
      auto [pure, vec] = pure_vector(s.matrix());
      sig.pure = pure;
      if (pure) sig.amplitudes = u.adjoint() * vec;
      sites_.push_back(std::move(sig));
    }
    bool mixed = false;
    for (const auto& sig : sites_) mixed = mixed || !sig.pure;
    if (mixed && ts_.dim() > opts_.dense_limit) {
      throw ResourceGuardError("protocol: typical subspace dimension " + std::to_string(ts_.dim()) +
                               " exceeds the dense fidelity limit " + std::to_string(opts_.dense_limit) +
                               " for mixed signals");
    }
    if (ancilla_dim_ > 1) prepare_trace(originals);
  }

  const TypicalSubspace& subspace() const { return ts_; }

  SequenceRecord evaluate(std::vector<std::size_t> seq) const {
    const std::size_t m = ts_.dim();
    SequenceRecord rec;
    rec.probability = 1.0;
    for (std::size_t i : seq) rec.probability *= probs_[i];

    bool pure = true;
    for (std::size_t i : seq) pure = pure && sites_[i].pure;

    ComplexVector a;
    ComplexMatrix big_a;
    double c = 0.0;
    if (pure) {
      a.resize(static_cast<Eigen::Index>(m));
      for (std::size_t t = 0; t < m; ++t) {
        Complex amp = 1.0;
        for (std::size_t j = 0; j < k_; ++j) amp *= sites_[seq[j]].amplitudes(static_cast<Eigen::Index>(ts_.label(t, j)));
        a(static_cast<Eigen::Index>(t)) = amp;
      }
      const double mass = a.squaredNorm();
      c = std::max(0.0, 1.0 - mass);
      rec.extension_fidelity = mass * mass + c * std::norm(a(0));
    } else {
      big_a.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t s = 0; s < m; ++s) {
          Complex v = 1.0;
          for (std::size_t j = 0; j < k_; ++j) {
            v *= sites_[seq[j]].rotated(static_cast<Eigen::Index>(ts_.label(t, j)),
                                        static_cast<Eigen::Index>(ts_.label(s, j)));
          }
          big_a(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) = v;
        }
      }
      big_a = 0.5 * (big_a + big_a.adjoint());
      c = std::max(0.0, 1.0 - big_a.trace().real());
      ComplexMatrix omega = big_a;
      omega(0, 0) += c;
      rec.extension_fidelity = std::clamp(fidelity_psd(big_a, omega), 0.0, 1.0);
    }
    rec.extension_fidelity = std::clamp(rec.extension_fidelity, 0.0, 1.0);
    rec.junk_mass = c;
    rec.fidelity = ancilla_dim_ == 1 ? rec.extension_fidelity : traced_fidelity(seq, pure, a, big_a, c);
    rec.signals = std::move(seq);
    return rec;
  }

 private:
  void prepare_trace(const Ensemble& originals) {
    full_system_dim_ = checked_power(system_dim_, k_);
    if (full_system_dim_ > opts_.dense_limit || full_system_dim_ > opts_.guard.max_dim) {
      throw ResourceGuardError("protocol: original block dimension " + std::to_string(full_system_dim_) +
                               " exceeds the dense fidelity limit " + std::to_string(opts_.dense_limit));
    }
    full_ancilla_dim_ = checked_power(ancilla_dim_, k_);
    const std::size_t entries = ts_.dim() * full_system_dim_ * full_ancilla_dim_;
    if (entries > opts_.guard.max_dim * opts_.guard.max_dim / 4) {
      throw ResourceGuardError("protocol: receiver operators need " + std::to_string(entries) + " entries");
    }
    // K_t = (x)_j u_{t_j} reshaped to system x ancilla; Tr_anc |u_t><u_s| = K_t K_s^dagger.
    std::vector<ComplexMatrix> site_factors;
    for (Eigen::Index a = 0; a < ts_.site_eigenvectors.cols(); ++a) {
      site_factors.push_back(unflatten(ts_.site_eigenvectors.col(a), system_dim_, ancilla_dim_));
    }
    for (std::size_t t = 0; t < ts_.dim(); ++t) {
      ComplexMatrix kt = site_factors[ts_.label(t, 0)];
      for (std::size_t j = 1; j < k_; ++j) kt = tensor_product(kt, site_factors[ts_.label(t, j)], opts_.guard);
      kraus_.push_back(std::move(kt));
    }
    for (const auto& s : originals.states()) {
      OriginalSignal o;
      o.rho = s.matrix();
      auto [pure, vec] = pure_vector(s.matrix());
      o.pure = pure;
      o.vector = vec;
      originals_.push_back(std::move(o));
    }
  }

  double traced_fidelity(const std::vector<std::size_t>& seq, bool pure, const ComplexVector& a,
                         const ComplexMatrix& big_a, double c) const {
    // Omega = B B^dagger in the typical basis; rho' = sum_r Y_r Y_r^dagger.
    const std::size_t m = ts_.dim();
    ComplexMatrix b;
    if (pure) {
      b = ComplexMatrix::Zero(static_cast<Eigen::Index>(m), 2);
      b.col(0) = a;
      b(0, 1) = std::sqrt(c);
    } else {
      ComplexMatrix omega = big_a;
      omega(0, 0) += c;
      const auto eig = hermitian_eig_symmetrized(omega);
      const auto rank = (eig.eigenvalues.array() > 0.0).count();
      b.resize(static_cast<Eigen::Index>(m), rank);
      for (Eigen::Index r = 0; r < rank; ++r) b.col(r) = std::sqrt(eig.eigenvalues(r)) * eig.eigenvectors.col(r);
    }
    std::vector<ComplexMatrix> ys;
    for (Eigen::Index r = 0; r < b.cols(); ++r) {
      ComplexMatrix y = ComplexMatrix::Zero(static_cast<Eigen::Index>(full_system_dim_),
                                            static_cast<Eigen::Index>(full_ancilla_dim_));
      for (std::size_t t = 0; t < m; ++t) {
        const Complex w = b(static_cast<Eigen::Index>(t), r);
        if (w != Complex(0.0)) y += w * kraus_[t];
      }
      ys.push_back(std::move(y));
    }

    bool originals_pure = true;
    for (std::size_t i : seq) originals_pure = originals_pure && originals_[i].pure;
    if (originals_pure) {
      ComplexVector psi = originals_[seq[0]].vector;
      for (std::size_t j = 1; j < k_; ++j) psi = tensor_product(psi, originals_[seq[j]].vector, opts_.guard);
      double f = 0.0;
      for (const auto& y : ys) f += (y.adjoint() * psi).squaredNorm();
      return std::clamp(f, 0.0, 1.0);
    }
    ComplexMatrix rho = originals_[seq[0]].rho;
    for (std::size_t j = 1; j < k_; ++j) rho = tensor_product(rho, originals_[seq[j]].rho, opts_.guard);
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& y : ys) out += y * y.adjoint();
    out = 0.5 * (out + out.adjoint());
    return std::clamp(fidelity_psd(rho, out), 0.0, 1.0);
  }

  std::vector<double> probs_;
  std::size_t ancilla_dim_;
  std::size_t k_;
  ProtocolOptions opts_;
  std::size_t system_dim_ = 0;
  std::size_t full_system_dim_ = 0;
  std::size_t full_ancilla_dim_ = 0;
  TypicalSubspace ts_;
  std::vector<SiteSignal> sites_;
  std::vector<ComplexMatrix> kraus_;
  std::vector<OriginalSignal> originals_;
};

inline std::vector<std::size_t> sample_sequence(const std::vector<double>& cdf, std::size_t k, Rng& rng) {
  std::vector<std::size_t> seq(k);
  for (auto& s : seq) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    s = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  }
  return seq;
}

inline ProtocolResult run_protocol(const Ensemble& originals, const std::vector<DensityMatrix>& sites,
                                   std::size_t ancilla_dim, std::size_t n_block, std::size_t k,
                                   const SubspaceTarget& target, const Sampling& sampling,
                                   const ProtocolOptions& opts) {
  const ProtocolEngine engine(originals, sites, ancilla_dim, k, target, opts);
  const TypicalSubspace& ts = engine.subspace();

  ProtocolResult res;
  res.n_block = n_block;
  res.sites = k;
  res.block_length = n_block * k;
  res.ancilla_dim = ancilla_dim;
  res.channel_dim = ts.dim();
  res.rate = rate_of(res.channel_dim, res.block_length);
  res.retained_mass = ts.retained_mass;
  // The compressed ensemble density is diagonal in the typical basis.
  res.compressed_support_dim = static_cast<std::size_t>(
      std::count_if(ts.string_probs.begin(), ts.string_probs.end(), [](double p) { return p > kSupportTolerance; }));
  res.compressed_support_dim = std::max<std::size_t>(res.compressed_support_dim, 1);

  const std::size_t count = checked_power(originals.size(), k);
  bool exact = false;
  switch (sampling.mode) {
    case Sampling::Mode::kExact:
      if (count > kMaxExactSequences) {
        throw ResourceGuardError("protocol: " + std::to_string(count) + " sequences exceed the exact enumeration limit");
      }
      exact = true;
      break;
    case Sampling::Mode::kMonteCarlo: exact = false; break;
    case Sampling::Mode::kAuto: exact = count <= kExactEnumerationLimit; break;
  }
  if (!exact && sampling.samples == 0) throw ValidationError("protocol: Monte-Carlo sample count must be positive");
  res.sampled = !exact;
  res.seed = sampling.seed;
  res.samples = exact ? count : sampling.samples;

  std::vector<double> cdf(originals.size());
  std::partial_sum(originals.probs().begin(), originals.probs().end(), cdf.begin());
  res.per_sequence.resize(res.samples);
  run_parallel(res.samples, opts.threads, [&](std::size_t idx) {
    if (exact) {
      res.per_sequence[idx] = engine.evaluate(decode_multi_index(idx, originals.size(), k));
    } else {
      Rng rng(derive_seed(sampling.seed, idx));
      res.per_sequence[idx] = engine.evaluate(sample_sequence(cdf, k, rng));
    }
  });

  double worst_gap = 0.0;
  if (exact) {
    for (const auto& r : res.per_sequence) {
      res.avg_fidelity += r.probability * r.fidelity;
      res.extension_avg_fidelity += r.probability * r.extension_fidelity;
      worst_gap = std::max(worst_gap, r.extension_fidelity - r.fidelity);
    }
  } else {
    const auto n = static_cast<double>(res.samples);
    for (const auto& r : res.per_sequence) {
      res.avg_fidelity += r.fidelity / n;
      res.extension_avg_fidelity += r.extension_fidelity / n;
      worst_gap = std::max(worst_gap, r.extension_fidelity - r.fidelity);
    }
    if (res.samples > 1) {
      double var = 0.0;
      for (const auto& r : res.per_sequence) var += (r.fidelity - res.avg_fidelity) * (r.fidelity - res.avg_fidelity);
      var /= n - 1.0;
      res.std_error = std::sqrt(var / n);
    }
  }
  res.avg_fidelity = std::clamp(res.avg_fidelity, 0.0, 1.0);
  res.extension_avg_fidelity = std::clamp(res.extension_avg_fidelity, 0.0, 1.0);
  res.trace_monotonicity = make_report("trace_monotonicity", res.extension_avg_fidelity, res.avg_fidelity);
  res.trace_monotonicity.note = "largest per-sequence drop " + std::to_string(worst_gap);
  if (worst_gap > kBoundTolerance) res.trace_monotonicity.satisfied = false;
  return res;
}

}  // namespace detail

// Typical-subspace compression of n-signal sequences from e0.
inline ProtocolResult js_protocol(const Ensemble& e0, std::size_t n, const SubspaceTarget& target,
                                  const Sampling& sampling = {}, const ProtocolOptions& opts = {}) {
  return detail::run_protocol(e0, e0.states(), 1, 1, n, target, sampling, opts);
}

// Extension protocol: blocks of n_block signals are replaced by their
// extensions under `assignment`, k blocks are compressed together and the
// receiver traces out the ancillas.
inline ProtocolResult extension_protocol(const Ensemble& e0, std::size_t n_block, const ExtensionAssignment& assignment,
                                         std::size_t k, const SubspaceTarget& target, const Sampling& sampling = {},
                                         const ProtocolOptions& opts = {}) {
  const Ensemble block = n_block == 1 ? e0 : product_ensemble(e0, n_block, opts.guard);
  if (assignment.signals() != block.size()) {
    throw ShapeError("extension_protocol: assignment has " + std::to_string(assignment.signals()) +
                     " signals, block ensemble has " + std::to_string(block.size()));
  }
  opts.guard.check(checked_power(block.dim() * assignment.ancilla_dim, k), "extension_protocol block space");
  return detail::run_protocol(block, extensions_from_assignment(block, assignment), assignment.ancilla_dim, n_block,
                              k, target, sampling, opts);
}

}  // namespace vcomp
