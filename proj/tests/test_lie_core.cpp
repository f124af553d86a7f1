#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace aks;

TEST(LieBracket, EvaluatesBasisPairsAndAntisymmetry) {
  const auto mu = fx::n18();
  EXPECT_EQ(mu.bracket_basis(0, 1), basis_vector(6, 3));
  EXPECT_EQ(mu.bracket_basis(1, 0), -basis_vector(6, 3));
  EXPECT_EQ(mu.bracket_basis(1, 2), basis_vector(6, 5));
  EXPECT_TRUE(mu.bracket_basis(3, 4).isZero());
}

TEST(LieBracket, BilinearEvaluationMatchesTensor) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = oracle::random_sparse(6, rng, 8);
    const auto T = oracle::tensor(mu);
    Vector x(6), y(6);
    for (int i = 0; i < 6; ++i) {
      x(i) = g(rng);
      y(i) = g(rng);
    }
    EXPECT_LE((mu(x, y) - oracle::bracket(T, x, y)).norm(), 1e-12);
    EXPECT_LE((mu(x, y) + mu(y, x)).norm(), 1e-12);
    EXPECT_LE((ad_matrix(mu, x) * y - mu(x, y)).norm(), 1e-12);
  }
}

TEST(LieBracket, RejectsMalformedEntries) {
  EXPECT_THROW(LieBracket(6, {{2, 1, 3, 1}}), Error);
  EXPECT_THROW(LieBracket(6, {{1, 1, 3, 1}}), Error);
  EXPECT_THROW(LieBracket(6, {{1, 2, 7, 1}}), Error);
  EXPECT_THROW(LieBracket(6, {{1, 2, 3, 1}, {1, 2, 3, 2}}), Error);
  EXPECT_THROW(LieBracket(0, {}), Error);
}

TEST(Jacobi, CatalogAlgebrasSatisfyIt) {
  EXPECT_EQ(jacobi_defect(fx::n11()), 0.0);
  EXPECT_EQ(jacobi_defect(fx::n13()), 0.0);
  EXPECT_EQ(jacobi_defect(fx::n18()), 0.0);
  EXPECT_LE(jacobi_defect(fx::einstein()), 1e-14);
  EXPECT_LE(jacobi_defect(fx::dim8()), 1e-14);
}

TEST(Jacobi, DetectsViolation) {
  // [[e1,e2],e3] = [e4,e3] = e5 while the other cyclic terms vanish.
  const LieBracket bad(5, {{1, 2, 4, 1}, {3, 4, 5, -1}});
  EXPECT_NEAR(jacobi_defect(bad), 1.0, 1e-15);
}

TEST(Norm, CountsOrderedPairs) {
  const auto mu = fx::n18();
  EXPECT_DOUBLE_EQ(mu_norm_sq(mu), 6.0);
  EXPECT_NEAR(mu_norm(fx::n11_lambda0_critical()), 1.0, 1e-15);
  const auto T = oracle::tensor(mu);
  EXPECT_DOUBLE_EQ(oracle::inner(T, T), mu_norm_sq(mu));
}

TEST(NilpotencyStep, KnownAlgebras) {
  EXPECT_EQ(nilpotency_step(fx::n18()), 2);
  EXPECT_EQ(nilpotency_step(fx::n11()), 3);
  EXPECT_EQ(nilpotency_step(fx::n13()), 3);
  EXPECT_EQ(nilpotency_step(LieBracket::abelian(4)), 1);
  EXPECT_FALSE(nilpotency_step(fx::einstein()).has_value());
  // Filiform: [e1, e_i] = e_{i+1}.
  EXPECT_EQ(nilpotency_step(LieBracket(5, {{1, 2, 3, 1}, {1, 3, 4, 1}, {1, 4, 5, 1}})), 4);
}

TEST(Unimodular, TraceCondition) {
  EXPECT_TRUE(is_unimodular(fx::n13()).unimodular);
  const auto e = is_unimodular(fx::einstein());
  EXPECT_FALSE(e.unimodular);
  EXPECT_GT(e.defect, 1.0);
  // Nilpotent implies unimodular.
  for (const auto& entry : fx::catalog().entries()) {
    const auto a = entry.instantiate(entry.samples.front());
    if (nilpotency_step(a.mu)) EXPECT_TRUE(is_unimodular(a.mu).unimodular) << entry.id;
  }
}

TEST(BasisChange, MatchesTensorTransform) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const auto mu = fx::n13();
  Matrix m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m(i, j) = g(rng) + (i == j ? 3.0 : 0.0);
  const auto nu = act_basis_change(m, mu);
  const Matrix mi = m.inverse();
  for (int trial = 0; trial < 10; ++trial) {
    Vector x(6), y(6);
    for (int i = 0; i < 6; ++i) {
      x(i) = g(rng);
      y(i) = g(rng);
    }
    EXPECT_LE((nu(x, y) - m * mu(mi * x, mi * y)).norm(), 1e-10);
  }
  EXPECT_LE(jacobi_defect(nu), 1e-10);
}

TEST(BasisChange, DiagonalActionScalesConstants) {
  const Vector a = fx::vec({2, 3, 5, 7, 11, 13});
  const auto nu = act_diagonal(a, fx::n18());
  const auto full = act_basis_change(Matrix(a.asDiagonal()), fx::n18());
  for (int i = 0; i < 6; ++i) EXPECT_LE(max_abs(nu.ad_basis(i) - full.ad_basis(i)), 1e-14);
  EXPECT_DOUBLE_EQ(nu.bracket_basis(0, 1)(3), 7.0 / 6.0);
}

TEST(BasisChange, SingularMatrixRejected) {
  EXPECT_THROW(act_basis_change(Matrix::Zero(6, 6), fx::n18()), Error);
}

TEST(Derivations, SatisfyLeibnizAndMatchDimension) {
  for (const auto& mu : {fx::n11(), fx::n13(), fx::n18(), fx::einstein()}) {
    const auto der = derivation_basis(mu);
    const auto T = oracle::tensor(mu);
    for (const auto& d : der) EXPECT_LE(derivation_defect(d, mu), 1e-10);
    // Independent count: the Leibniz rows of the Kronecker system alone.
    const int n = mu.dim();
    Matrix sys(n * n * n, n * n);
    sys.setZero();
    int r = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k, ++r)
          for (int m = 0; m < n; ++m) {
            sys(r, k * n + m) += T(i, j, m);
            sys(r, m * n + i) -= T(m, j, k);
            sys(r, m * n + j) -= T(i, m, k);
          }
    Eigen::JacobiSVD<Matrix> svd(sys);
    int rank = 0;
    for (Eigen::Index p = 0; p < svd.singularValues().size(); ++p)
      if (svd.singularValues()(p) > 1e-9) ++rank;
    EXPECT_EQ(static_cast<int>(der.size()), n * n - rank);
  }
  // Every map is a derivation of the abelian algebra.
  EXPECT_EQ(derivation_basis(LieBracket::abelian(4)).size(), 16u);
}

TEST(Derivations, GradingDerivation) {
  // n18 is graded: D = diag(1,1,1,2,2,2).
  EXPECT_LE(derivation_defect(fx::diag({1, 1, 1, 2, 2, 2}), fx::n18()), 1e-15);
  EXPECT_GT(derivation_defect(Matrix::Identity(6, 6), fx::n18()), 0.5);
}
