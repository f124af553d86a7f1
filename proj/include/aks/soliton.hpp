#pragma once

// Scalar-plus-derivation decompositions and the algebraic soliton certificate.

#include "aks/curvature.hpp"

namespace aks {

/// max_{a<b} || D[e_a,e_b] - [D e_a, e_b] - [e_a, D e_b] ||.
inline double derivation_defect(const Matrix& d, const LieBracket& mu) {
  const int n = mu.dim();
  detail::require(d.rows() == n && d.cols() == n, "derivation_defect: dimension mismatch");
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const Vector v = d * mu.bracket_basis(a, b) - mu(d.col(a), basis_vector(n, b)) - mu.ad_basis(a) * d.col(b);
      worst = std::max(worst, v.norm());
    }
  return worst;
}

struct ScalarPlusDerivation {
  double c = 0.0;
  Matrix d;
  double residual = 0.0;
};

namespace detail {

/// Least-squares fit of s over span{Id} + span(extra), Frobenius residual.
inline ScalarPlusDerivation fit_scalar_plus(const Matrix& s, const std::vector<Matrix>& extra) {
  const Eigen::Index n = s.rows();
  Matrix cols(n * n, static_cast<Eigen::Index>(extra.size()) + 1);
  cols.col(0) = Eigen::Map<const Vector>(Matrix::Identity(n, n).eval().data(), n * n);
  for (std::size_t p = 0; p < extra.size(); ++p)
    cols.col(static_cast<Eigen::Index>(p) + 1) = Eigen::Map<const Vector>(extra[p].data(), n * n);
  const Vector rhs = Eigen::Map<const Vector>(s.data(), n * n);
  Eigen::ColPivHouseholderQR<Matrix> qr(cols);
  qr.setThreshold(1e-10);
  const Vector coef = qr.solve(rhs);
  ScalarPlusDerivation out;
  out.c = coef(0);
  out.d = Matrix::Zero(n, n);
  for (std::size_t p = 0; p < extra.size(); ++p) out.d += coef(static_cast<Eigen::Index>(p) + 1) * extra[p];
  out.residual = (s - out.c * Matrix::Identity(n, n) - out.d).norm();
  return out;
}

} // namespace detail

/// s = c Id + D with D in Der(mu), when the least-squares residual is within tol.
inline std::optional<ScalarPlusDerivation> scalar_plus_derivation(const Matrix& s, const LieBracket& mu,
                                                                  double tol = 1e-8) {
  detail::require(s.rows() == mu.dim() && s.cols() == mu.dim(), "scalar_plus_derivation: dimension mismatch");
  auto fit = detail::fit_scalar_plus(s, derivation_basis(mu));
  if (fit.residual > tol) return std::nullopt;
  return fit;
}

enum class SolitonVerdict { soliton_via_cond1, soliton_via_cond2, not_certified, refuted_on_nice_diagonal };

inline const char* to_string(SolitonVerdict v) {
  switch (v) {
    case SolitonVerdict::soliton_via_cond1: return "soliton_via_cond1";
    case SolitonVerdict::soliton_via_cond2: return "soliton_via_cond2";
    case SolitonVerdict::not_certified: return "not_certified";
    case SolitonVerdict::refuted_on_nice_diagonal: return "refuted_on_nice_diagonal";
  }
  return "?";
}

inline bool is_soliton(SolitonVerdict v) {
  return v == SolitonVerdict::soliton_via_cond1 || v == SolitonVerdict::soliton_via_cond2;
}

struct SolitonCertificate {
  SolitonVerdict verdict = SolitonVerdict::not_certified;
  /// cond2: {c1, c2}; cond1: {c}. The total constant is their sum.
  std::vector<double> c_values;
  /// cond2: {D1, D2}; cond1: {D}.
  std::vector<Matrix> d_witnesses;
  double residual = 0.0;
  Matrix chern_op;
  Matrix ric_ac;

  double c() const {
    double s = 0.0;
    for (double v : c_values) s += v;
    return s;
  }
  Matrix d() const {
    Matrix s = Matrix::Zero(chern_op.rows(), chern_op.cols());
    for (const auto& m : d_witnesses) s += m;
    return s;
  }
};

/// Sufficient conditions: (cond2) chi P = c1 Id + D1 and Ric^ac = c2 Id + D2,
/// (cond1) chi P + Ric^ac = c Id + D. Cond2 implies cond1, so the stronger
/// one is reported when it holds.
///
/// When neither holds, chi P is symmetric and Ric^ac = 0, the reduced equation
/// chi P = c Id + (D + D^T)/2 is tested over all of Der(mu); failure refutes it.
inline SolitonCertificate certify_soliton(const LieBracket& mu, const TwoForm& omega,
                                          const std::optional<Matrix>& metric = std::nullopt, double tol = 1e-8) {
  SolitonCertificate cert;
  cert.chern_op = chern_ricci_operator(mu, omega, metric);
  cert.ric_ac = ric_ac(mu, omega, metric);
  const auto der = derivation_basis(mu);
  const auto p = detail::fit_scalar_plus(cert.chern_op, der);
  const auto r = detail::fit_scalar_plus(cert.ric_ac, der);
  if (p.residual <= tol && r.residual <= tol) {
    cert.verdict = SolitonVerdict::soliton_via_cond2;
    cert.c_values = {p.c, r.c};
    cert.d_witnesses = {p.d, r.d};
    cert.residual = std::max(p.residual, r.residual);
    return cert;
  }
  const auto sum = detail::fit_scalar_plus(cert.chern_op + cert.ric_ac, der);
  if (sum.residual <= tol) {
    cert.verdict = SolitonVerdict::soliton_via_cond1;
    cert.c_values = {sum.c};
    cert.d_witnesses = {sum.d};
    cert.residual = sum.residual;
    return cert;
  }
  cert.residual = sum.residual;
  const double scale = std::max(1.0, max_abs(cert.chern_op));
  if (max_abs(cert.chern_op - cert.chern_op.transpose()) <= 1e-10 * scale && max_abs(cert.ric_ac) <= 1e-10 * scale) {
    std::vector<Matrix> sym_der;
    for (const auto& d : der) sym_der.push_back(sym(d));
    const auto red = detail::fit_scalar_plus(cert.chern_op, sym_der);
    cert.residual = red.residual;
    if (red.residual > tol) cert.verdict = SolitonVerdict::refuted_on_nice_diagonal;
  }
  return cert;
}

struct DerivationCheck {
  bool is_derivation = false;
  double defect = 0.0;
};

inline DerivationCheck chern_ricci_derivation_check(const LieBracket& mu, const TwoForm& omega,
                                                    const std::optional<Matrix>& metric = std::nullopt,
                                                    double tol = 1e-9) {
  const double d = derivation_defect(chern_ricci_operator(mu, omega, metric), mu);
  return {d <= tol, d};
}

} // namespace aks
