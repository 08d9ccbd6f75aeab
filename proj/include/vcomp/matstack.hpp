#pragma once

// Dense complex linear algebra used by every other module: Kronecker
// products, partial traces over tensor factors, Hermitian spectra, PSD square
// roots and singular values.
//
// Tensor factors are ordered left = most significant throughout. A basis
// index of a space with factor dims (d0, d1, ..., dk) is
//   i = ((i0 * d1 + i1) * d2 + i2) ... .

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vcomp/errors.hpp"

namespace vcomp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultMaxDimension = std::size_t{1} << 14;

// Guards against accidental exponential blowup in block length sweeps.
struct DimensionGuard {
  std::size_t max_dim = kDefaultMaxDimension;

  void check(std::size_t dim, const std::string& what) const {
    if (dim > max_dim) {
      throw ResourceGuardError(what + ": dimension " + std::to_string(dim) +
                               " exceeds guard " + std::to_string(max_dim));
    }
  }
};

inline std::size_t dims_product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

// Overflow-safe d^n, saturating at SIZE_MAX.
inline std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && out > static_cast<std::size_t>(-1) / base) {
      return static_cast<std::size_t>(-1);
    }
    out *= base;
  }
  return out;
}

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

inline double hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Kronecker product; the left operand carries the slow index.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                                    const DimensionGuard& guard = {}) {
  const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
  const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
  guard.check(std::max(rows, cols), "tensor_product");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b,
                                    const DimensionGuard& guard = {}) {
  guard.check(static_cast<std::size_t>(a.size() * b.size()), "tensor_product");
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

inline ComplexMatrix tensor_power(const ComplexMatrix& a, std::size_t n,
                                  const DimensionGuard& guard = {}) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < n; ++i) out = tensor_product(out, a, guard);
  return out;
}

namespace detail {

// Splits every full basis index into (kept multi-index, traced multi-index)
// and returns table[kept * traced_dim + traced] = full index.
inline std::vector<std::size_t> factor_index_table(const Dims& dims,
                                                   const std::vector<bool>& is_kept,
                                                   std::size_t traced_dim) {
  const std::size_t full = dims_product(dims);
  std::vector<std::size_t> table(full);
  for (std::size_t idx = 0; idx < full; ++idx) {
    std::size_t rest = idx;
    std::size_t kept = 0, kept_stride = 1;
    std::size_t traced = 0, traced_stride = 1;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const std::size_t digit = rest % dims[f];
      rest /= dims[f];
      if (is_kept[f]) {
        kept += digit * kept_stride;
        kept_stride *= dims[f];
      } else {
        traced += digit * traced_stride;
        traced_stride *= dims[f];
      }
    }
    table[kept * traced_dim + traced] = idx;
  }
  return table;
}

}  // namespace detail

// Traces out every factor not listed in `keep`. Kept factors stay in their
// original relative order.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                                   std::span<const std::size_t> keep) {
  if (m.rows() != m.cols()) throw ShapeError("partial_trace: matrix is not square");
  if (dims.empty() || dims_product(dims) != static_cast<std::size_t>(m.rows())) {
    throw ShapeError("partial_trace: factor dims do not multiply to matrix dimension");
  }
  if (keep.empty()) throw ShapeError("partial_trace: keep set is empty");
  std::vector<bool> is_kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) throw ShapeError("partial_trace: keep index out of range");
    if (is_kept[k]) throw ShapeError("partial_trace: duplicate keep index");
    is_kept[k] = true;
  }
  std::size_t kept_dim = 1, traced_dim = 1;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    (is_kept[f] ? kept_dim : traced_dim) *= dims[f];
  }
  const auto table = detail::factor_index_table(dims, is_kept, traced_dim);
  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (std::size_t a = 0; a < kept_dim; ++a) {
    for (std::size_t b = 0; b < kept_dim; ++b) {
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < traced_dim; ++t) {
        acc += m(table[a * traced_dim + t], table[b * traced_dim + t]);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                                   std::initializer_list<std::size_t> keep) {
  const std::vector<std::size_t> k(keep);
  return partial_trace(m, dims, std::span<const std::size_t>(k));
}

// Two-factor shortcut: trace out the second factor of a (d_keep x d_drop) space.
inline ComplexMatrix trace_out_second(const ComplexMatrix& m, std::size_t d_keep,
                                      std::size_t d_drop) {
  if (static_cast<std::size_t>(m.rows()) != d_keep * d_drop || m.rows() != m.cols()) {
    throw ShapeError("trace_out_second: dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(d_keep, d_keep);
  for (std::size_t a = 0; a < d_keep; ++a) {
    for (std::size_t b = 0; b < d_keep; ++b) {
      out(a, b) = m.block(a * d_drop, b * d_drop, d_drop, d_drop).trace();
    }
  }
  return out;
}

struct EigDecomposition {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // unitary, columns match eigenvalues
};

inline constexpr double kHermitianTolerance = 1e-9;

// Eigendecomposition of the Hermitian part of h without the tolerance check;
// for internally produced matrices that are Hermitian by construction.
inline EigDecomposition hermitian_eig_symmetrized(const ComplexMatrix& h) {
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("hermitian_eig: eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  EigDecomposition out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

inline EigDecomposition hermitian_eig(const ComplexMatrix& h,
                                      double hermitian_tol = kHermitianTolerance) {
  if (h.rows() != h.cols()) throw ShapeError("hermitian_eig: matrix is not square");
  if (!all_finite(h)) throw ValidationError("hermitian_eig: non-finite entry");
  if (hermitian_deviation(h) > hermitian_tol) {
    throw ValidationError("hermitian_eig: matrix is not Hermitian");
  }
  return hermitian_eig_symmetrized(h);
}

inline constexpr double kClampTolerance = 1e-9;
inline constexpr double kNotPsdTolerance = 1e-6;

// Applies f to the spectrum of a Hermitian matrix: V f(diag) V^dagger.
template <typename F>
ComplexMatrix hermitian_function(const EigDecomposition& eig, F&& f) {
  RealVector mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(eig.eigenvalues(i));
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

// Eigenvalues at or below `zero_cutoff` (and small negative drift) map to 0.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& p, double zero_cutoff = 0.0) {
  const auto eig = hermitian_eig(p);
  if (eig.eigenvalues.size() > 0 && eig.eigenvalues.minCoeff() < -kNotPsdTolerance) {
    throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(eig.eigenvalues.minCoeff()) +
                      " is significantly negative");
  }
  return hermitian_function(eig, [zero_cutoff](double x) { return x > zero_cutoff ? std::sqrt(x) : 0.0; });
}

inline RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector(0);
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();  // sorted descending
}

inline double trace_norm(const ComplexMatrix& m) {
  return singular_values(m).sum();
}

// Views a vector on a (rows x cols) two-factor space as the matrix
// M(a, b) = v[a * cols + b].
inline ComplexMatrix unflatten(const ComplexVector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols) {
    throw ShapeError("unflatten: vector length does not match shape");
  }
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(v.data(), rows, cols);
}

inline ComplexVector flatten(const ComplexMatrix& m) {
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor r = m;
  return Eigen::Map<const ComplexVector>(r.data(), r.size());
}

// Computational basis vector |i> of dimension d.
inline ComplexVector basis_vector(std::size_t d, std::size_t i) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return v;
}

inline ComplexMatrix projector(const ComplexVector& v) {
  return v * v.adjoint();
}

}  // namespace vcomp
