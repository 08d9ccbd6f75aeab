#include <gtest/gtest.h>

#include "random_states.hpp"
#include "vcomp/matstack.hpp"

using namespace vcomp;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

}  // namespace

TEST(TensorProduct, IdentityAndDiagonal) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_TRUE(tensor_product(i2, i2).isApprox(ComplexMatrix::Identity(4, 4)));
  EXPECT_TRUE(tensor_product(diag({1, 0}), diag({0, 1})).isApprox(diag({0, 1, 0, 0})));
}

TEST(TensorProduct, MatchesIndexFormula) {
  test_util::RandomStates gen(1);
  const ComplexMatrix a = gen.ginibre(2, 2), b = gen.ginibre(2, 2);
  const ComplexMatrix k = tensor_product(a, b);
  EXPECT_EQ(k(2, 3), a(1, 1) * b(0, 1));
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) EXPECT_EQ(k(i, j), a(i / 2, j / 2) * b(i % 2, j % 2));
}

TEST(TensorProduct, Associative) {
  test_util::RandomStates gen(2);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = gen.ginibre(2, 3), b = gen.ginibre(3, 2), c = gen.ginibre(2, 2);
    const ComplexMatrix lhs = tensor_product(tensor_product(a, b), c);
    const ComplexMatrix rhs = tensor_product(a, tensor_product(b, c));
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(TensorProduct, GuardThrows) {
  DimensionGuard guard{8};
  const ComplexMatrix i4 = ComplexMatrix::Identity(4, 4);
  EXPECT_THROW(tensor_product(i4, i4, guard), ResourceGuardError);
}

TEST(PartialTrace, ProductStateFactorizes) {
  test_util::RandomStates gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix rho = gen.density(3).matrix();
    const ComplexMatrix sigma = 2.5 * gen.density(2).matrix();
    const ComplexMatrix reduced = partial_trace(tensor_product(rho, sigma), {3, 2}, {0});
    EXPECT_LT((reduced - rho * sigma.trace()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(PartialTrace, MaximallyEntangledGivesMaximallyMixed) {
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix reduced = partial_trace(projector(bell), {2, 2}, {1});
  EXPECT_LT((reduced - 0.5 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, MatchesIndexSum) {
  test_util::RandomStates gen(4);
  const ComplexMatrix rho = gen.density(4).matrix();
  const ComplexMatrix reduced = partial_trace(rho, {2, 2}, {0});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Complex expected = 0;
      for (int k = 0; k < 2; ++k) expected += rho(a * 2 + k, b * 2 + k);
      EXPECT_LT(std::abs(reduced(a, b) - expected), 1e-15);
    }
  EXPECT_NEAR(reduced.trace().real(), rho.trace().real(), 1e-12);
}

TEST(PartialTrace, MiddleFactorAndOrdering) {
  test_util::RandomStates gen(5);
  const ComplexMatrix a = gen.density(2).matrix(), b = gen.density(3).matrix(),
                      c = gen.density(2).matrix();
  const ComplexMatrix abc = tensor_product(tensor_product(a, b), c);
  EXPECT_LT((partial_trace(abc, {2, 3, 2}, {0, 2}) - tensor_product(a, c)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((partial_trace(abc, {2, 3, 2}, {1}) - b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((trace_out_second(abc, 6, 2) - tensor_product(a, b)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, ShapeErrors) {
  const ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  EXPECT_THROW(partial_trace(m, {2, 3}, {0}), ShapeError);
  EXPECT_THROW(partial_trace(m, {2, 2}, {2}), ShapeError);
  EXPECT_THROW(partial_trace(ComplexMatrix::Identity(4, 3), {2, 2}, {0}), ShapeError);
}

TEST(HermitianEig, KnownSpectra) {
  auto e = hermitian_eig(diag({3, 1, 2}));
  EXPECT_DOUBLE_EQ(e.eigenvalues(0), 3);
  EXPECT_DOUBLE_EQ(e.eigenvalues(1), 2);
  EXPECT_DOUBLE_EQ(e.eigenvalues(2), 1);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  e = hermitian_eig(x);
  EXPECT_NEAR(e.eigenvalues(0), 1, 1e-15);
  EXPECT_NEAR(e.eigenvalues(1), -1, 1e-15);
}

TEST(HermitianEig, ReconstructionAndTrace) {
  test_util::RandomStates gen(6);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = gen.hermitian(5);
    const auto e = hermitian_eig(h);
    const ComplexMatrix rec = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
    EXPECT_LT((rec - h).norm() / h.norm(), 1e-10);
    EXPECT_LT((e.eigenvectors.adjoint() * e.eigenvectors - ComplexMatrix::Identity(5, 5)).norm(), 1e-10);
    EXPECT_NEAR(e.eigenvalues.sum(), h.trace().real(), 1e-10 * std::max(1.0, std::abs(h.trace().real())));
    for (int i = 1; i < 5; ++i) EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(hermitian_eig(m), ValidationError);
  EXPECT_THROW(hermitian_eig(ComplexMatrix::Identity(2, 3)), ShapeError);
}

TEST(PsdSqrt, KnownAndSquaring) {
  EXPECT_LT((psd_sqrt(diag({4, 9})) - diag({2, 3})).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(psd_sqrt(ComplexMatrix::Identity(3, 3)).isApprox(ComplexMatrix::Identity(3, 3)));
  test_util::RandomStates gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix g = gen.ginibre(4, 4);
    const ComplexMatrix p = g * g.adjoint();
    const ComplexMatrix r = psd_sqrt(p);
    EXPECT_LT((r * r - p).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(hermitian_deviation(r), 1e-12);
    const ComplexMatrix rr = psd_sqrt(r);
    const ComplexMatrix fourth = rr * rr * rr * rr;
    EXPECT_LT((fourth - p).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(PsdSqrt, ClampsDriftAndRejectsNegative) {
  const ComplexMatrix drift = diag({1.0, -5e-10});
  EXPECT_NEAR(psd_sqrt(drift)(1, 1).real(), 0.0, 0.0);
  EXPECT_THROW(psd_sqrt(diag({1.0, -1e-3})), NotPsdError);
}

TEST(SingularValues, KnownCases) {
  const RealVector s = singular_values(diag({2, -3}));
  EXPECT_NEAR(s(0), 3, 1e-15);
  EXPECT_NEAR(s(1), 2, 1e-15);
  test_util::RandomStates gen(8);
  const ComplexVector u = gen.unit_vector(3), v = gen.unit_vector(3);
  const RealVector r = singular_values(u * v.adjoint());
  EXPECT_NEAR(r(0), 1, 1e-12);
  EXPECT_NEAR(r(1), 0, 1e-12);
}

TEST(SingularValues, MatchGramSpectrum) {
  test_util::RandomStates gen(9);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = gen.ginibre(3, 4);
    const RealVector s = singular_values(m);
    EXPECT_NEAR(s.squaredNorm(), m.squaredNorm(), 1e-10 * m.squaredNorm());
    const auto gram = hermitian_eig(psd_sqrt(m.adjoint() * m));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(s(k), gram.eigenvalues(k), 1e-10);
    EXPECT_NEAR(gram.eigenvalues(3), 0.0, 1e-7);
  }
}

TEST(Reshape, FlattenRoundTrip) {
  test_util::RandomStates gen(10);
  const ComplexMatrix m = gen.ginibre(3, 5);
  EXPECT_EQ(unflatten(flatten(m), 3, 5), m);
  const ComplexVector a = gen.unit_vector(3), b = gen.unit_vector(5);
  EXPECT_LT((unflatten(tensor_product(a, b), 3, 5) - a * b.transpose()).norm(), 1e-14);
}
