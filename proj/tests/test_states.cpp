#include <gtest/gtest.h>

#include "random_states.hpp"
#include "vcomp/states.hpp"

using namespace vcomp;

namespace {

DensityMatrix ket0() { return DensityMatrix::diagonal({1, 0}); }
DensityMatrix ket1() { return DensityMatrix::diagonal({0, 1}); }

}  // namespace

TEST(DensityMatrix, ValidationNamesInvariant) {
  EXPECT_THROW(DensityMatrix::diagonal({0.5, 0.4}), ValidationError);
  EXPECT_THROW(DensityMatrix::diagonal({1.5, -0.5}), NotPsdError);
  ComplexMatrix m(2, 2);
  m << 0.5, 0.3, 0.1, 0.5;
  try {
    DensityMatrix bad(m);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("Hermitian"), std::string::npos);
  }
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, Dims{2, 3}), ValidationError);
}

TEST(EnsembleDensity, Examples) {
  const auto rho = DensityMatrix::diagonal({0.3, 0.7});
  EXPECT_TRUE(ensemble_density(Ensemble({1.0}, {rho})).matrix().isApprox(rho.matrix()));
  EXPECT_TRUE(ensemble_density(Ensemble({0.5, 0.5}, {ket0(), ket1()}))
                  .matrix()
                  .isApprox(DensityMatrix::maximally_mixed(2).matrix()));
  EXPECT_TRUE(ensemble_density(Ensemble({0.5, 0.5}, {DensityMatrix::maximally_mixed(2), ket0()}))
                  .matrix()
                  .isApprox(DensityMatrix::diagonal({0.75, 0.25}).matrix()));
}

TEST(Ensemble, RejectsBadProbabilities) {
  EXPECT_THROW(Ensemble({0.5, 0.4}, {ket0(), ket1()}), ValidationError);
  EXPECT_THROW(Ensemble({1.2, -0.2}, {ket0(), ket1()}), ValidationError);
  EXPECT_THROW(Ensemble({1.0}, {ket0(), ket1()}), ValidationError);
  EXPECT_THROW(Ensemble({0.5, 0.5}, {ket0(), DensityMatrix::maximally_mixed(3)}), ValidationError);
}

TEST(Entropy, Examples) {
  test_util::RandomStates gen(11);
  EXPECT_NEAR(von_neumann_entropy(gen.pure(4)), 0.0, 1e-10);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(2)), 1.0, 1e-14);
  // -0.9 log2 0.9 - 0.1 log2 0.1
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::diagonal({0.9, 0.1})), 0.468995593589281, 1e-12);
}

TEST(Entropy, AdditiveAndBounded) {
  test_util::RandomStates gen(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = gen.density(2 + trial % 3), sigma = gen.density(2 + trial % 2);
    const double s = von_neumann_entropy(tensor_product(rho, sigma));
    EXPECT_NEAR(s, von_neumann_entropy(rho) + von_neumann_entropy(sigma), 1e-9);
    EXPECT_LE(von_neumann_entropy(rho), std::log2(rho.dim()) + 1e-12);
    EXPECT_GE(std::log2(static_cast<double>(support_dim(rho))), von_neumann_entropy(rho) - 1e-6);
  }
}

TEST(Holevo, Examples) {
  EXPECT_NEAR(holevo_quantity(Ensemble({1.0}, {DensityMatrix::diagonal({0.3, 0.7})})), 0.0, 1e-14);
  EXPECT_NEAR(holevo_quantity(Ensemble({0.5, 0.5}, {ket0(), ket1()})), 1.0, 1e-14);
  // S(diag(.75,.25)) - 0.5 * S(I/2)
  const double h = -0.75 * std::log2(0.75) - 0.25 * std::log2(0.25) - 0.5;
  EXPECT_NEAR(holevo_quantity(Ensemble({0.5, 0.5}, {DensityMatrix::maximally_mixed(2), ket0()})), h, 1e-12);
  EXPECT_NEAR(h, 0.311278, 1e-6);
}

TEST(Holevo, BoundedByEnsembleEntropy) {
  test_util::RandomStates gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto e = gen.ensemble(2 + trial % 3, 2 + trial % 3);
    const double chi = holevo_quantity(e);
    EXPECT_GE(chi, -1e-9);
    EXPECT_LE(chi, von_neumann_entropy(ensemble_density(e)) + 1e-9);
  }
}

TEST(SupportDim, Examples) {
  test_util::RandomStates gen(14);
  EXPECT_EQ(support_dim(gen.pure(4)), 1u);
  EXPECT_EQ(support_dim(DensityMatrix::maximally_mixed(2)), 2u);
  EXPECT_EQ(support_dim(DensityMatrix::diagonal({0.5, 0.5 - 1e-12, 1e-12, 0}), 1e-10), 2u);
}

TEST(ProductEnsemble, Structure) {
  test_util::RandomStates gen(15);
  const auto e0 = gen.ensemble(2, 2);
  const auto once = product_ensemble(e0, 1);
  ASSERT_EQ(once.size(), 2u);
  EXPECT_TRUE(once.state(1).matrix().isApprox(e0.state(1).matrix()));

  const Ensemble half({0.5, 0.5}, {ket0(), DensityMatrix::maximally_mixed(2)});
  const auto two = product_ensemble(half, 2);
  ASSERT_EQ(two.size(), 4u);
  for (double p : two.probs()) EXPECT_DOUBLE_EQ(p, 0.25);
  // Lexicographic: index 1 is (0, 1).
  EXPECT_TRUE(two.state(1).matrix().isApprox(tensor_product(ket0().matrix(), half.state(1).matrix())));
  EXPECT_EQ(two.factor_dims(), (Dims{2, 2}));

  const auto rho = ensemble_density(e0).matrix();
  const auto prod = product_ensemble(e0, 2);
  EXPECT_LT((ensemble_density(prod).matrix() - tensor_product(rho, rho)).cwiseAbs().maxCoeff(), 1e-12);
  double sum = 0;
  const auto cubed = product_ensemble(gen.ensemble(3, 2), 3);
  for (double p : cubed.probs()) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-10);
}

TEST(ProductEnsemble, Guard) {
  const Ensemble e({0.5, 0.5}, {ket0(), ket1()});
  EXPECT_THROW(product_ensemble(e, 5, DimensionGuard{16}), ResourceGuardError);
}
