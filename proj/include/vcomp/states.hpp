#pragma once

// Density matrices, finite ensembles and their entropic functionals.
// Entropies are in bits.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vcomp/matstack.hpp"

namespace vcomp {

inline constexpr double kStateTolerance = 1e-9;
inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr double kEntropyFloor = 1e-12;
inline constexpr double kSupportTolerance = 1e-10;

// Unit-trace positive semidefinite Hermitian matrix with a tensor
// factorization of its space.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(ComplexMatrix m, Dims factor_dims = {})
      : matrix_(std::move(m)), dims_(std::move(factor_dims)) {
    if (dims_.empty()) dims_ = {static_cast<std::size_t>(matrix_.rows())};
    validate();
  }

  // Wraps a matrix that satisfies the invariants by construction.
  static DensityMatrix unchecked(ComplexMatrix m, Dims factor_dims = {}) {
    DensityMatrix out;
    out.matrix_ = std::move(m);
    out.dims_ = std::move(factor_dims);
    if (out.dims_.empty()) out.dims_ = {static_cast<std::size_t>(out.matrix_.rows())};
    return out;
  }

  static DensityMatrix pure(const ComplexVector& psi, Dims factor_dims = {}) {
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
      throw ValidationError("pure state vector is not normalized");
    }
    return DensityMatrix(projector(psi), std::move(factor_dims));
  }

  static DensityMatrix diagonal(const std::vector<double>& diag) {
    ComplexMatrix m = ComplexMatrix::Zero(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix maximally_mixed(std::size_t d) {
    return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const Dims& factor_dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  void validate() const {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
      throw ValidationError("density matrix: not a nonempty square matrix");
    }
    if (dims_product(dims_) != dim()) {
      throw ValidationError("density matrix: factor dims do not multiply to dimension");
    }
    if (!all_finite(matrix_)) throw ValidationError("density matrix: non-finite entry");
    if (hermitian_deviation(matrix_) > kStateTolerance) {
      throw ValidationError("density matrix: not Hermitian");
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr.real() - 1.0) > kStateTolerance || std::abs(tr.imag()) > kStateTolerance) {
      throw ValidationError("density matrix: trace " + std::to_string(tr.real()) + " != 1");
    }
    const auto eig = hermitian_eig_symmetrized(matrix_);
    if (eig.eigenvalues.minCoeff() < -kStateTolerance) {
      throw NotPsdError("density matrix: not PSD (min eigenvalue " +
                        std::to_string(eig.eigenvalues.minCoeff()) + ")");
    }
  }

  ComplexMatrix matrix_;
  Dims dims_;
};

inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                                    const DimensionGuard& guard = {}) {
  Dims dims = a.factor_dims();
  dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
  return DensityMatrix::unchecked(tensor_product(a.matrix(), b.matrix(), guard), std::move(dims));
}

// Finite ensemble {p_i, rho_i} of equal-dimension states.
class Ensemble {
 public:
  Ensemble() = default;

  Ensemble(std::vector<double> probs, std::vector<DensityMatrix> states)
      : probs_(std::move(probs)), states_(std::move(states)) {
    if (probs_.empty() || probs_.size() != states_.size()) {
      throw ValidationError("ensemble: probabilities and states must be nonempty and of equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
        throw ValidationError("ensemble: probability " + std::to_string(i) + " is negative");
      }
      sum += probs_[i];
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
      throw ValidationError("ensemble: probability sum " + std::to_string(sum) + " != 1");
    }
    for (std::size_t i = 1; i < states_.size(); ++i) {
      if (states_[i].factor_dims() != states_[0].factor_dims()) {
        throw ValidationError("ensemble: state " + std::to_string(i) +
                              " has different factor dims");
      }
    }
  }

  std::size_t size() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  double prob(std::size_t i) const { return probs_[i]; }
  const DensityMatrix& state(std::size_t i) const { return states_[i]; }
  std::size_t dim() const { return states_.front().dim(); }
  const Dims& factor_dims() const { return states_.front().factor_dims(); }

 private:
  std::vector<double> probs_;
  std::vector<DensityMatrix> states_;
};

inline DensityMatrix ensemble_density(const Ensemble& e) {
  ComplexMatrix rho = ComplexMatrix::Zero(e.dim(), e.dim());
  for (std::size_t i = 0; i < e.size(); ++i) rho += e.prob(i) * e.state(i).matrix();
  return DensityMatrix::unchecked(std::move(rho), e.factor_dims());
}

// -sum lambda log2 lambda over eigenvalues above the floor.
inline double entropy_of_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l > kEntropyFloor) s -= l * std::log2(l);
  }
  return s < 0.0 ? 0.0 : s;
}

inline double von_neumann_entropy(const ComplexMatrix& rho) {
  return entropy_of_spectrum(hermitian_eig_symmetrized(rho).eigenvalues);
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.matrix());
}

// I_LH = S(sum p_i rho_i) - sum p_i S(rho_i).
inline double holevo_quantity(const Ensemble& e) {
  double mean = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) mean += e.prob(i) * von_neumann_entropy(e.state(i));
  const double chi = von_neumann_entropy(ensemble_density(e)) - mean;
  return chi < 0.0 ? 0.0 : chi;
}

inline std::size_t support_dim(const ComplexMatrix& rho, double tol = kSupportTolerance) {
  const auto eig = hermitian_eig_symmetrized(rho);
  return static_cast<std::size_t>((eig.eigenvalues.array() > tol).count());
}

inline std::size_t support_dim(const DensityMatrix& rho, double tol = kSupportTolerance) {
  return support_dim(rho.matrix(), tol);
}

// Decodes a lexicographic multi-index (first signal slowest).
inline std::vector<std::size_t> decode_multi_index(std::size_t index, std::size_t base,
                                                   std::size_t length) {
  std::vector<std::size_t> digits(length);
  for (std::size_t j = length; j-- > 0;) {
    digits[j] = index % base;
    index /= base;
  }
  return digits;
}

// All n-fold products of the signal states, multi-indices in lexicographic order.
inline Ensemble product_ensemble(const Ensemble& e0, std::size_t n,
                                 const DimensionGuard& guard = {}) {
  if (n == 0) throw ValidationError("product_ensemble: block length must be positive");
  const std::size_t count = checked_power(e0.size(), n);
  guard.check(count, "product_ensemble signal count");
  guard.check(checked_power(e0.dim(), n), "product_ensemble state");
  std::vector<double> probs(count);
  std::vector<DensityMatrix> states;
  states.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const auto digits = decode_multi_index(idx, e0.size(), n);
    double p = 1.0;
    DensityMatrix s = e0.state(digits[0]);
    p *= e0.prob(digits[0]);
    for (std::size_t j = 1; j < n; ++j) {
      s = tensor_product(s, e0.state(digits[j]), guard);
      p *= e0.prob(digits[j]);
    }
    probs[idx] = p;
    states.push_back(std::move(s));
  }
  // Renormalize away rounding so the ensemble invariant holds exactly.
  double sum = 0.0;
  for (double p : probs) sum += p;
  for (double& p : probs) p /= sum;
  return Ensemble(std::move(probs), std::move(states));
}

}  // namespace vcomp
