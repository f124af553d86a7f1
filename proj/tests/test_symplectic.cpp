#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace aks;

namespace {

Matrix blocks(const std::vector<Matrix>& bs) {
  Eigen::Index n = 0;
  for (const auto& b : bs) n += b.rows();
  Matrix g = Matrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : bs) {
    g.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return g;
}

Matrix m1(double a) { return Matrix::Constant(1, 1, a); }

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

double bracket_gap(const LieBracket& a, const LieBracket& b) {
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i) worst = std::max(worst, max_abs(a.ad_basis(i) - b.ad_basis(i)));
  return worst;
}

} // namespace

TEST(TwoForm, CanonicalForm) {
  const auto w = canonical_form(3);
  EXPECT_EQ(w.entries().size(), 3u);
  EXPECT_EQ(w(basis_vector(6, 0), basis_vector(6, 5)), 1.0);
  EXPECT_EQ(w(basis_vector(6, 2), basis_vector(6, 3)), 1.0);
  EXPECT_EQ(w(basis_vector(6, 3), basis_vector(6, 2)), -1.0);
  EXPECT_TRUE(is_nondegenerate(w));
  EXPECT_FALSE(is_nondegenerate(TwoForm(4, {{1, 2, 1}})));
  EXPECT_THROW(TwoForm(5, {}), Error);
  EXPECT_THROW(TwoForm(4, {{2, 1, 1}}), Error);
}

TEST(Closedness, CyclicSumOracle) {
  // omega_cn on {[e1,e2] = e3}: omega([e1,e2],e4) = 1, the other two terms vanish.
  const LieBracket mu(6, {{1, 2, 3, 1}});
  EXPECT_DOUBLE_EQ(closedness_defect(canonical_form(3), mu), 1.0);
  EXPECT_EQ(closedness_defect(fx::n11_omega1(0.3), fx::n11()), 0.0);
  EXPECT_EQ(closedness_defect(fx::n13_omega2(2.0), fx::n13()), 0.0);
  EXPECT_EQ(closedness_defect(fx::n18_omega2(0.7), fx::n18()), 0.0);
  EXPECT_EQ(closedness_defect(canonical_form(3), fx::einstein()), 0.0);
  EXPECT_LE(closedness_defect(canonical_form(4), fx::dim8()), 1e-15);
}

TEST(AlmostComplex, CanonicalMetric) {
  const auto j = j_operator(canonical_form(3));
  EXPECT_EQ(j.compatibility_defect, 0.0);
  // omega(X, Y) = <JX, Y>.
  const Matrix w = canonical_form(3).matrix();
  EXPECT_LE(max_abs(j.j.transpose() - w), 0.0);
  EXPECT_EQ(j.j * basis_vector(6, 0), basis_vector(6, 5));
}

TEST(AlmostComplex, DiagonalMetricCompatibility) {
  // A metric scaled by a in a_omega keeps J^2 = -1 because omega pairs scale inversely.
  const Matrix g = fx::diag({2, 3, 5, 1.0 / 5, 1.0 / 3, 1.0 / 2});
  const auto j = j_operator(canonical_form(3), g);
  EXPECT_LE(j.compatibility_defect, 1e-14);
  const Matrix w = canonical_form(3).matrix();
  EXPECT_LE(max_abs((j.j).transpose() * g - w), 1e-14);
  // A non-compatible metric is reported through the defect.
  const auto bad = j_operator(canonical_form(3), fx::diag({2, 1, 1, 1, 1, 1}));
  EXPECT_GT(bad.compatibility_defect, 0.1);
}

TEST(ProjSp, IdempotentAndSelfAdjoint) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const auto j = j_operator(canonical_form(3));
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(6, 6), b(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 6; ++k) {
        a(i, k) = g(rng);
        b(i, k) = g(rng);
      }
    a = sym(a);
    b = sym(b);
    const Matrix pa = proj_sp(a, j), pb = proj_sp(b, j);
    EXPECT_LE(max_abs(proj_sp(pa, j) - pa), 1e-12);
    EXPECT_NEAR(trace_inner(pa, b), trace_inner(a, pb), 1e-10);
    // The image lies in sp: A^T W + W A = 0.
    const Matrix w = canonical_form(3).matrix();
    EXPECT_LE(max_abs(pa.transpose() * w + w * pa), 1e-12);
  }
  EXPECT_THROW(proj_sp(fx::diag({1, 1, 1, 1, 1, 1}) + fx::unit(6, 0, 1), j), Error);
}

TEST(AOmega, BasisCoordinatesRoundTrip) {
  const auto basis = a_omega_basis(6);
  ASSERT_EQ(basis.size(), 3u);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) EXPECT_NEAR(trace_inner(basis[p], basis[q]), p == q ? 1.0 : 0.0, 1e-15);
  const Vector y = fx::vec({0.3, -1.2, 2.5});
  const Vector d = a_omega_diag(y);
  EXPECT_LE((a_omega_coords(d) - y).norm(), 1e-15);
  Matrix s = Matrix::Zero(6, 6);
  for (int m = 0; m < 3; ++m) s += y(m) * basis[static_cast<std::size_t>(m)];
  EXPECT_LE((Vector(s.diagonal()) - d).norm(), 1e-15);
  // d is in sp(omega_cn): d_m = -d_{n-1-m}.
  for (int m = 0; m < 3; ++m) EXPECT_DOUBLE_EQ(d(m), -d(5 - m));
}

TEST(Darboux, PropertyOnCatalogForms) {
  std::vector<TwoForm> forms = {fx::n11_omega1(0.0), fx::n11_omega1(1.5), fx::n13_omega2(1.0),
                                fx::n13_omega2(-2.0), fx::n18_omega2(1.0), canonical_form(3)};
  for (const auto& w : forms) {
    const Matrix g = darboux_normalize(w);
    EXPECT_LE(max_abs(act_form(g, w).matrix() - canonical_form(3).matrix()), 1e-10);
  }
  EXPECT_THROW(darboux_normalize(TwoForm(4, {{1, 2, 1}})), Error);
}

TEST(Darboux, CanonicalInputIsFixed) {
  const Matrix g = darboux_normalize(canonical_form(3));
  EXPECT_LE(max_abs(act_form(g, canonical_form(3)).matrix() - canonical_form(3).matrix()), 1e-15);
}

// The known change of basis for n11 with omega_1(lambda), lambda != 0, in the convention
// g.mu = g mu(g^-1., g^-1.).
TEST(KnownSymplectomorphisms, N11LambdaNonzero) {
  for (double l : {1.0, -2.0, 0.5}) {
    const Matrix g = blocks({m2(-2 / l, -1, 0, 1), m2(-1, 0, 0.5, 1), m2(1, l / 2, 0, -l / 2)});
    EXPECT_LE(max_abs(act_form(g, fx::n11_omega1(l)).matrix() - canonical_form(3).matrix()), 1e-14);
    EXPECT_LE(bracket_gap(act_basis_change(g, fx::n11()), fx::n11_nice(l)), 1e-14);
  }
}

TEST(KnownSymplectomorphisms, N11LambdaZero) {
  const Matrix g = blocks({m1(1), m1(1), m2(1, 0.5, 0, -1), m1(1), m1(1)});
  EXPECT_LE(max_abs(act_form(g, fx::n11_omega1(0)).matrix() - canonical_form(3).matrix()), 1e-15);
  EXPECT_LE(bracket_gap(act_basis_change(g, fx::n11()), fx::n11_lambda0()), 1e-15);
}

TEST(KnownSymplectomorphisms, N13Omega2) {
  for (double l : {1.0, 2.0, -1.0}) {
    const Matrix g = blocks({m1(1), m2(l - 0.5, -0.5, 1, 1), m2(0.5, 1, 1, 0), m1(1)});
    EXPECT_LE(max_abs(act_form(g, fx::n13_omega2(l)).matrix() - canonical_form(3).matrix()), 1e-14);
    const LieBracket want(6, {{1, 2, 4, -1 / (2 * l)}, {1, 2, 5, 1 / l}, {1, 3, 4, (4 * l - 1) / (4 * l)},
                              {1, 3, 5, 1 / (2 * l)}, {1, 5, 6, 1}, {2, 3, 6, 1 / l}});
    EXPECT_LE(bracket_gap(act_basis_change(g, fx::n13()), want), 1e-14);
  }
}

// For n18 with omega_2(t) the listed matrix satisfies omega(g., g.) = omega_cn, so in the
// g.mu convention above it is the inverse that carries n18 to mu_t.
TEST(KnownSymplectomorphisms, N18Omega2UsesInverseConvention) {
  for (double t : {1.0, -0.5, 3.0}) {
    const double s = t * t + 1;
    const Matrix listed = blocks({m1(1), m1(1), m1(1), m1(-1 / (2 * t)), m2(-t / s, 1 / s, 1 / s, t / s)});
    const Matrix g = listed.inverse();
    EXPECT_LE(max_abs(act_form(g, fx::n18_omega2(t)).matrix() - canonical_form(3).matrix()), 1e-13);
    EXPECT_GT(max_abs(act_form(listed, fx::n18_omega2(t)).matrix() - canonical_form(3).matrix()), 0.1);
    const LieBracket mu_t(6, {{1, 2, 4, -2 * t}, {1, 3, 5, -t}, {1, 3, 6, 1}, {2, 3, 5, 1}, {2, 3, 6, t}});
    EXPECT_LE(bracket_gap(act_basis_change(g, fx::n18()), mu_t), 1e-13);
  }
}

TEST(Nijenhuis, EinsteinExample) {
  const auto j = j_operator(canonical_form(3));
  const auto mu = fx::einstein();
  // With N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] the pair (e3, e1) gives 4 e1.
  EXPECT_LE((nijenhuis(mu, j, basis_vector(6, 2), basis_vector(6, 0)) - 4 * basis_vector(6, 0)).norm(), 1e-14);
  EXPECT_LE((nijenhuis(mu, j, basis_vector(6, 0), basis_vector(6, 2)) + 4 * basis_vector(6, 0)).norm(), 1e-14);
}

TEST(Nijenhuis, AbelianAndAntisymmetry) {
  const auto j = j_operator(canonical_form(3));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Vector x(6), y(6);
    for (int i = 0; i < 6; ++i) {
      x(i) = g(rng);
      y(i) = g(rng);
    }
    EXPECT_EQ(nijenhuis(LieBracket::abelian(6), j, x, y).norm(), 0.0);
    const auto mu = fx::n13();
    EXPECT_LE((nijenhuis(mu, j, x, y) + nijenhuis(mu, j, y, x)).norm(), 1e-12);
  }
}
