#pragma once

// Moment map, Ricci and anti-complexified Ricci, the Chern-Ricci form and
// operator. A non-canonical metric is handled by moving to an orthonormal basis.

#include "aks/symplectic.hpp"

#include <optional>

namespace aks {

/// mm(mu) = sum_i ad_i ad_i^T - 2 sum_i ad_i^T ad_i, so that <<mm, A>> = <A.mu, mu>.
inline Matrix moment_map_gl(const LieBracket& mu) {
  const int n = mu.dim();
  Matrix m = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const Matrix& ad = mu.ad_basis(a);
    m.noalias() += ad * ad.transpose();
    m.noalias() -= 2.0 * ad.transpose() * ad;
  }
  return sym(m);
}

/// Killing form as an operator for the canonical metric: B(a,b) = tr(ad_a ad_b).
inline Matrix killing_operator(const LieBracket& mu) {
  const int n = mu.dim();
  Matrix b(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) b(p, q) = b(q, p) = (mu.ad_basis(p) * mu.ad_basis(q)).trace();
  return b;
}

/// Ric = mm/4 - B/2 - S(ad_H) for the canonical metric.
inline Matrix ricci(const LieBracket& mu) {
  const Vector h = trace_vector(mu);
  return 0.25 * moment_map_gl(mu) - 0.5 * killing_operator(mu) - sym(ad_matrix(mu, h));
}

inline double scalar_curvature(const LieBracket& mu) { return ricci(mu).trace(); }

/// A^{T omega}: omega(A^{T omega} x, y) = omega(x, A y).
inline Matrix omega_transpose(const Matrix& a, const TwoForm& omega) {
  const Matrix w = omega.matrix();
  return w.fullPivLu().solve(a.transpose() * w);
}

/// P_H = ad_H + ad_H^{T omega}; omega(P_H x, y) = omega(H, [x, y]).
inline Matrix p_operator(const LieBracket& mu, const TwoForm& omega, const Vector& h) {
  detail::require(omega.dim() == mu.dim(), "p_operator: dimension mismatch");
  const Matrix ad = ad_matrix(mu, h);
  return ad + omega_transpose(ad, omega);
}

/// max_k |tr p^k|, k = 1..dim; zero iff p is nilpotent.
inline double nilpotency_defect(const Matrix& p) {
  Matrix pk = p;
  double worst = 0.0;
  for (Eigen::Index k = 1; k <= p.rows(); ++k) {
    worst = std::max(worst, std::abs(pk.trace()));
    pk = pk * p;
  }
  return worst;
}

namespace detail {

/// Orthonormal frame change g = L^T for metric = L L^T; identity when absent.
inline Matrix orthonormalizer(int n, const std::optional<Matrix>& metric) {
  if (!metric) return Matrix::Identity(n, n);
  require(metric->rows() == n && metric->cols() == n, "metric: dimension mismatch");
  require(max_abs(*metric - metric->transpose()) <= 1e-12, "metric must be symmetric");
  Eigen::LLT<Matrix> llt(*metric);
  require(llt.info() == Eigen::Success, "metric must be positive definite");
  return Matrix(llt.matrixL()).transpose();
}

struct Frame {
  Matrix g;
  Matrix gi;
  LieBracket mu;
  TwoForm omega;
  AlmostComplexStructure j;
};

inline Frame orthonormal_frame(const LieBracket& mu, const TwoForm& omega, const std::optional<Matrix>& metric) {
  require(omega.dim() == mu.dim(), "curvature: dimension mismatch between bracket and form");
  const int n = mu.dim();
  const Matrix g = orthonormalizer(n, metric);
  const Matrix gi = g.inverse();
  if (!metric) return {g, gi, mu, omega, j_operator(omega)};
  LieBracket mu2 = act_basis_change(g, mu, 0.0);
  TwoForm w2 = act_form(g, omega, 0.0);
  AlmostComplexStructure j = j_operator(w2);
  return {g, gi, std::move(mu2), std::move(w2), std::move(j)};
}

/// Canonical-metric H-hat.
inline Vector h_hat_canonical(const LieBracket& mu, const Matrix& jm) {
  const int n = mu.dim();
  Vector h = Vector::Zero(n);
  for (int a = 0; a < n; ++a) {
    const Matrix adt = mu.ad_basis(a).transpose();
    h += 0.5 * adt.col(a);
    h += 0.5 * jm * (adt * jm.col(a));
  }
  return h;
}

/// chi(X,Y) = (tr ad_{J[X,Y]} - tr(J ad_{[X,Y]})) / 2 on basis pairs.
inline Matrix chern_form_canonical(const LieBracket& mu, const Matrix& jm) {
  const int n = mu.dim();
  Matrix chi = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const Vector z = mu.bracket_basis(a, b);
      if (z.isZero(0.0)) continue;
      const double v = 0.5 * (ad_matrix(mu, jm * z).trace() - (jm * ad_matrix(mu, z)).trace());
      chi(a, b) = v;
      chi(b, a) = -v;
    }
  return chi;
}

} // namespace detail

/// Anti-complexified Ricci operator, expressed in the given basis.
inline Matrix ric_ac(const LieBracket& mu, const TwoForm& omega, const std::optional<Matrix>& metric = std::nullopt) {
  const auto f = detail::orthonormal_frame(mu, omega, metric);
  return f.gi * anti_complexified_part(ricci(f.mu), f.j) * f.g;
}

/// H-hat with chi(X, Y) = omega(H-hat, [X, Y]).
inline Vector h_hat(const LieBracket& mu, const TwoForm& omega, const std::optional<Matrix>& metric = std::nullopt) {
  const auto f = detail::orthonormal_frame(mu, omega, metric);
  return f.gi * detail::h_hat_canonical(f.mu, f.j.j);
}

inline TwoForm chern_ricci_form(const LieBracket& mu, const TwoForm& omega,
                                const std::optional<Matrix>& metric = std::nullopt) {
  const auto f = detail::orthonormal_frame(mu, omega, metric);
  return TwoForm::from_matrix(f.g.transpose() * detail::chern_form_canonical(f.mu, f.j.j) * f.g, 0.0);
}

/// chi P = P at H-hat.
inline Matrix chern_ricci_operator(const LieBracket& mu, const TwoForm& omega,
                                   const std::optional<Matrix>& metric = std::nullopt) {
  return p_operator(mu, omega, h_hat(mu, omega, metric));
}

struct CurvatureReport {
  Matrix mm_gl;
  Matrix ric;
  double scal = 0.0;
  Matrix ric_ac;
  Matrix chern_op;
  TwoForm chern_form;
  Vector h_hat;
  Vector h_mean;
  double chern_nilpotency_defect = 0.0;
  double j_defect = 0.0;
};

/// All curvature data of (mu, omega, metric). Operators are written in the input basis.
inline CurvatureReport compute_curvature(const LieBracket& mu, const TwoForm& omega,
                                         const std::optional<Matrix>& metric = std::nullopt) {
  const auto f = detail::orthonormal_frame(mu, omega, metric);
  CurvatureReport r;
  const Matrix ric0 = ricci(f.mu);
  r.mm_gl = f.gi * moment_map_gl(f.mu) * f.g;
  r.ric = f.gi * ric0 * f.g;
  r.scal = ric0.trace();
  r.ric_ac = f.gi * anti_complexified_part(ric0, f.j) * f.g;
  r.h_hat = f.gi * detail::h_hat_canonical(f.mu, f.j.j);
  r.h_mean = f.gi * trace_vector(f.mu);
  r.chern_op = p_operator(mu, omega, r.h_hat);
  r.chern_form = TwoForm::from_matrix(f.g.transpose() * detail::chern_form_canonical(f.mu, f.j.j) * f.g, 0.0);
  r.chern_nilpotency_defect = nilpotency_defect(r.chern_op);
  r.j_defect = f.j.compatibility_defect;
  return r;
}

} // namespace aks
