#pragma once

// Inequality checks that tie numerical results to the proven bounds: the
// Holevo lower bound on the rate, the fidelity-based entropy continuity
// inequality, the ancilla dimension cap and the entropy envelope of the
// extension minimizer.

#include <cmath>
#include <cstddef>
#include <iostream>
#include <optional>
#include <string>

#include "vcomp/fidelity.hpp"
#include "vcomp/matstack.hpp"
#include "vcomp/states.hpp"

namespace vcomp {

inline constexpr double kBoundTolerance = 1e-9;
inline constexpr double kEnvelopeTolerance = 1e-6;
inline constexpr double kHolevoFidelityThreshold = 0.99;
inline constexpr double kContinuityFidelityThreshold = 1.0 - 1.0 / 36.0;

// lhs <= rhs (and lower <= lhs when a lower side is present), up to tolerance.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
  double slack = 0.0;  // rhs - lhs
  bool applicable = true;
  std::optional<double> lower;
  double tolerance = kBoundTolerance;
  std::string note;

  bool violated() const { return applicable && !satisfied; }
};

inline BoundReport make_report(std::string name, double lhs, double rhs,
                               double tolerance = kBoundTolerance,
                               std::optional<double> lower = std::nullopt) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance = tolerance;
  r.lower = lower;
  r.satisfied = lhs <= rhs + tolerance && (!lower || *lower - tolerance <= lhs);
  return r;
}

// I_LH(e) <= measured rate, for runs that reach the fidelity threshold.
inline BoundReport holevo_bound_check(const Ensemble& e, double measured_rate,
                                      double avg_fidelity = 1.0,
                                      double fidelity_threshold = kHolevoFidelityThreshold) {
  BoundReport r = make_report("holevo_bound", holevo_quantity(e), measured_rate);
  r.note = "fidelity threshold " + std::to_string(fidelity_threshold);
  if (avg_fidelity < fidelity_threshold) {
    r.applicable = false;
    r.note += "; run fidelity " + std::to_string(avg_fidelity) + " below threshold";
  }
  return r;
}

// |S(rho) - S(rho')| <= 2 log2(dim) sqrt(1 - F) + 1, applicable for F > 35/36.
inline BoundReport entropy_continuity_check(const DensityMatrix& rho, const DensityMatrix& rho_prime) {
  const double f = fidelity(rho, rho_prime);
  const double lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(rho_prime));
  const double rhs =
      2.0 * std::log2(static_cast<double>(rho.dim())) * std::sqrt(std::max(0.0, 1.0 - f)) + 1.0;
  BoundReport r = make_report("entropy_continuity", lhs, rhs);
  r.note = "fidelity " + std::to_string(f);
  if (f <= kContinuityFidelityThreshold) {
    r.applicable = false;
    r.note += " <= 35/36";
  }
  return r;
}

// dim_q^(2n): ancilla spaces beyond this size need not be searched. Saturates
// at the dimension guard with a warning.
inline std::size_t ancilla_cap(std::size_t n, std::size_t dim_q, const DimensionGuard& guard = {}) {
  if (n == 0 || dim_q == 0) throw ValidationError("ancilla_cap: arguments must be positive");
  const std::size_t cap = checked_power(dim_q, 2 * n);
  if (cap > guard.max_dim) {
    std::clog << "warning: ancilla cap " << dim_q << "^" << 2 * n << " exceeds guard; using "
              << guard.max_dim << "\n";
    return guard.max_dim;
  }
  return cap;
}

// I_LH - 1e-6 <= best_entropy <= S(rho) + 1e-6.
inline BoundReport envelope_check(const Ensemble& e, double best_entropy) {
  return make_report("envelope", best_entropy, von_neumann_entropy(ensemble_density(e)),
                     kEnvelopeTolerance, holevo_quantity(e));
}

}  // namespace vcomp
