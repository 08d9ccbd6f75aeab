#pragma once

// Uhlmann fidelity F = [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2 (squared
// convention), purifications, and the extension construction that carries a
// fidelity value from a reduced pair up to an extended pair.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vcomp/matstack.hpp"
#include "vcomp/states.hpp"

namespace vcomp {

// Unit vector on a tensor-product space.
class PureStateVector {
 public:
  PureStateVector() = default;

  PureStateVector(ComplexVector amplitudes, Dims factor_dims)
      : amplitudes_(std::move(amplitudes)), dims_(std::move(factor_dims)) {
    if (dims_product(dims_) != static_cast<std::size_t>(amplitudes_.size())) {
      throw ShapeError("pure state: factor dims do not multiply to vector length");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
      throw ValidationError("pure state: vector is not normalized");
    }
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  const Dims& factor_dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

  DensityMatrix density() const {
    return DensityMatrix::unchecked(projector(amplitudes_), dims_);
  }

 private:
  ComplexVector amplitudes_;
  Dims dims_;
};

inline Complex overlap(const PureStateVector& a, const PureStateVector& b) {
  if (a.dim() != b.dim()) throw ShapeError("overlap: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());  // conjugates the left operand
}

namespace detail {

// Roundoff-level eigenvalues of rank-deficient inputs would otherwise enter
// the fidelity through their square roots (1e-17 -> 3e-9).
inline double spectral_noise_floor(const ComplexMatrix& m) {
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  return 1e-14 * std::max(1.0, scale) * static_cast<double>(std::max<Eigen::Index>(1, m.rows()));
}

inline ComplexMatrix fidelity_sqrt(const ComplexMatrix& m) {
  return psd_sqrt(m, spectral_noise_floor(m));
}

}  // namespace detail

// Fidelity of two PSD operators, not necessarily normalized:
// (sum of singular values of sqrt(a) sqrt(b))^2.
inline double fidelity_psd(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.rows() != a.cols() || b.rows() != b.cols()) {
    throw ShapeError("fidelity: dimension mismatch");
  }
  const double root = singular_values(detail::fidelity_sqrt(a) * detail::fidelity_sqrt(b)).sum();
  return root * root;
}

inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ShapeError("fidelity: dimension mismatch");
  return std::clamp(fidelity_psd(rho.matrix(), sigma.matrix()), 0.0, 1.0);
}

// The nested square-root form, kept as an independent route for testing.
inline double fidelity_nested(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ShapeError("fidelity: dimension mismatch");
  const ComplexMatrix s = detail::fidelity_sqrt(rho.matrix());
  const ComplexMatrix inner = s * sigma.matrix() * s;
  const double root = detail::fidelity_sqrt(0.5 * (inner + inner.adjoint())).trace().real();
  return std::clamp(root * root, 0.0, 1.0);
}

// Sum_i p_i F(rho_i, rho'_i) with the probabilities of the first ensemble.
inline double average_fidelity(const Ensemble& e, const Ensemble& e_prime) {
  if (e.size() != e_prime.size()) throw ShapeError("average_fidelity: ensemble length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    acc += e.prob(i) * fidelity(e.state(i), e_prime.state(i));
  }
  return acc;
}

namespace detail {

// Rotates the global phase so the first non-negligible amplitude is real positive.
inline void fix_global_phase(ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

// Row s, column k: sqrt(lambda_k) v_k(s), for purifier dimension `cols`.
// Columns beyond the system dimension are zero; truncation below the system
// dimension requires the dropped eigenvalues to vanish. Eigenvalues at the
// spectral noise floor are dropped, as in the fidelity square roots.
inline ComplexMatrix purification_matrix(const ComplexMatrix& rho, std::size_t cols) {
  const auto eig = hermitian_eig_symmetrized(rho);
  const auto d = static_cast<std::size_t>(rho.rows());
  const double floor = spectral_noise_floor(rho);
  ComplexMatrix m = ComplexMatrix::Zero(d, cols);
  for (std::size_t k = 0; k < d; ++k) {
    const double l = eig.eigenvalues(k);
    if (k >= cols) {
      if (l > kSupportTolerance) {
        throw ShapeError("purification: purifier dimension " + std::to_string(cols) +
                         " is smaller than the rank of the state");
      }
      continue;
    }
    if (l > floor) m.col(k) = std::sqrt(l) * eig.eigenvectors.col(k);
  }
  return m;
}

}  // namespace detail

// sum_k sqrt(lambda_k) |v_k> (x) |k> on system (x) C^d.
inline PureStateVector canonical_purification(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  ComplexVector v = flatten(detail::purification_matrix(rho.matrix(), d));
  v.normalize();
  detail::fix_global_phase(v);
  Dims dims = rho.factor_dims();
  dims.push_back(d);
  return PureStateVector(std::move(v), std::move(dims));
}

// Purification of rho (system dimension system_dim, purifier dimension
// purifier_dim) with maximal overlap against phi_prime. The overlap
// <phi_prime|phi> of the result is real and nonnegative.
inline PureStateVector optimal_purification(const DensityMatrix& rho,
                                            const PureStateVector& phi_prime,
                                            std::size_t system_dim, std::size_t purifier_dim) {
  if (rho.dim() != system_dim) throw ShapeError("optimal_purification: rho is not on the system factor");
  if (phi_prime.dim() != system_dim * purifier_dim) {
    throw ShapeError("optimal_purification: phi_prime does not live on system (x) purifier");
  }
  const ComplexMatrix psi = detail::purification_matrix(rho.matrix(), purifier_dim);
  const ComplexMatrix target = unflatten(phi_prime.amplitudes(), system_dim, purifier_dim);
  // Purifications of rho are psi * U^T for purifier unitaries U; the overlap
  // Tr(target^dagger psi U^T) is maximized by polar alignment.
  const ComplexMatrix cross = target.adjoint() * psi;
  Eigen::JacobiSVD<ComplexMatrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix u_transpose = svd.matrixV() * svd.matrixU().adjoint();
  ComplexVector v = flatten(psi * u_transpose);
  v.normalize();
  Dims dims = rho.factor_dims();
  dims.push_back(purifier_dim);
  return PureStateVector(std::move(v), std::move(dims));
}

// Given rho on the system and an extension rho_prime_ext of some rho' on
// system (x) ancilla, returns an extension rho_ext of rho with
// F(rho_ext, rho_prime_ext) = F(rho, rho').
inline DensityMatrix lemma_extension(const DensityMatrix& rho, const DensityMatrix& rho_prime_ext,
                                     const Dims& system_dims, const Dims& ancilla_dims) {
  const std::size_t d_sys = dims_product(system_dims);
  const std::size_t d_anc = dims_product(ancilla_dims);
  if (rho.dim() != d_sys) throw ShapeError("lemma_extension: rho does not match system dims");
  if (rho_prime_ext.dim() != d_sys * d_anc) {
    throw ShapeError("lemma_extension: rho_prime_ext does not match system (x) ancilla dims");
  }
  const std::size_t d_ext = d_sys * d_anc;
  // phi' purifies rho'_ext with purifier C^{d_ext}; read as a purification of
  // rho' its purifier is ancilla (x) C^{d_ext}.
  const PureStateVector phi_prime = canonical_purification(rho_prime_ext);
  const std::size_t purifier = d_anc * d_ext;
  const PureStateVector phi = optimal_purification(rho, PureStateVector(phi_prime.amplitudes(), {d_sys, purifier}),
                                                   d_sys, purifier);
  const ComplexMatrix m = unflatten(phi.amplitudes(), d_ext, d_ext);
  Dims dims = system_dims;
  dims.insert(dims.end(), ancilla_dims.begin(), ancilla_dims.end());
  ComplexMatrix ext = m * m.adjoint();
  ext = 0.5 * (ext + ext.adjoint());
  return DensityMatrix::unchecked(std::move(ext), std::move(dims));
}

}  // namespace vcomp
