#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>

#include "vcomp/matstack.hpp"
#include "vcomp/states.hpp"

namespace vcomp::test_util {

class RandomStates {
 public:
  explicit RandomStates(std::uint64_t seed) : rng_(seed) {}

  ComplexMatrix ginibre(std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(normal_(rng_), normal_(rng_));
    return m;
  }

  ComplexMatrix hermitian(std::size_t d) {
    const ComplexMatrix g = ginibre(d, d);
    return 0.5 * (g + g.adjoint());
  }

  ComplexMatrix unitary(std::size_t d) {
    Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(d, d));
    return qr.householderQ() * ComplexMatrix::Identity(d, d);
  }

  // Hilbert-Schmidt random state of the given rank.
  DensityMatrix density(std::size_t d, std::size_t rank = 0) {
    const ComplexMatrix g = ginibre(d, rank == 0 ? d : rank);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
  }

  ComplexVector unit_vector(std::size_t d) {
    ComplexVector v = ginibre(d, 1).col(0);
    return v.normalized();
  }

  DensityMatrix pure(std::size_t d) { return DensityMatrix::pure(unit_vector(d)); }

  Ensemble ensemble(std::size_t size, std::size_t d) {
    std::vector<double> p(size);
    double sum = 0.0;
    for (auto& x : p) sum += (x = uniform_(rng_) + 0.05);
    for (auto& x : p) x /= sum;
    std::vector<DensityMatrix> states;
    for (std::size_t i = 0; i < size; ++i) states.push_back(density(d));
    return Ensemble(std::move(p), std::move(states));
  }

  double uniform() { return uniform_(rng_); }
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace vcomp::test_util
