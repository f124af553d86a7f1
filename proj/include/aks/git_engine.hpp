#pragma once

// Weights of a bracket written in a Darboux basis for omega_cn, the nice-basis
// test, the Gram criterion for minimal compatible metrics and the solve of
// mm_sp(a.mu) = beta over the diagonal torus exp(a_omega).

#include "aks/curvature.hpp"
#include "aks/simplex.hpp"

#include <array>
#include <random>

namespace aks {

inline bool is_canonical_form(const TwoForm& omega, double tol = 1e-12) {
  return max_abs(omega.matrix() - canonical_form(omega.dim() / 2).matrix()) <= tol;
}

struct WeightSystem {
  /// Diagonals of the distinct projected weights, in lexicographic order.
  std::vector<Vector> weights;
  /// support[p] lists the structure constants (1-based i, j, k) giving weights[p].
  std::vector<std::vector<std::array<int, 3>>> support;
  Matrix gram;

  std::size_t size() const { return weights.size(); }
};

/// Diagonal of the sp-projection of E_kk - E_ii - E_jj for omega_cn.
inline Vector projected_weight(int dim, int i, int j, int k) {
  Vector d = Vector::Zero(dim);
  d(k - 1) += 1.0;
  d(i - 1) -= 1.0;
  d(j - 1) -= 1.0;
  Vector r(dim);
  for (int m = 0; m < dim; ++m) r(m) = 0.5 * (d(m) - d(dim - 1 - m));
  return r;
}

inline Matrix gram_matrix(const std::vector<Vector>& weights) {
  const auto k = static_cast<Eigen::Index>(weights.size());
  Matrix u(k, k);
  for (Eigen::Index p = 0; p < k; ++p)
    for (Eigen::Index q = 0; q < k; ++q) u(p, q) = weights[p].dot(weights[q]);
  return u;
}

inline Matrix gram_matrix(const WeightSystem& ws) { return gram_matrix(ws.weights); }

inline WeightSystem weight_set(const LieBracket& mu, const TwoForm& omega, double dedup_tol = 1e-10) {
  detail::require(omega.dim() == mu.dim(), "weight_set: dimension mismatch");
  detail::require(is_canonical_form(omega), "weight_set: the form must be omega_cn");
  std::vector<std::pair<Vector, std::array<int, 3>>> raw;
  for (const auto& e : mu.entries()) raw.push_back({projected_weight(mu.dim(), e.i, e.j, e.k), {e.i, e.j, e.k}});
  auto lex_less = [dedup_tol](const Vector& a, const Vector& b) {
    for (Eigen::Index m = 0; m < a.size(); ++m) {
      if (a(m) < b(m) - dedup_tol) return true;
      if (a(m) > b(m) + dedup_tol) return false;
    }
    return false;
  };
  std::stable_sort(raw.begin(), raw.end(), [&](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
  WeightSystem ws;
  for (const auto& [w, key] : raw) {
    if (!ws.weights.empty() && max_abs(ws.weights.back() - w) <= dedup_tol) {
      ws.support.back().push_back(key);
    } else {
      ws.weights.push_back(w);
      ws.support.push_back({key});
    }
  }
  ws.gram = gram_matrix(ws.weights);
  return ws;
}

struct NiceCheck {
  bool nice = true;
  double max_defect = 0.0;
};

/// Off-a_omega part of proj_sp(mm(a.mu)) at random a in exp(a_omega), relative to ||a.mu||^2.
inline NiceCheck nice_basis_check(const LieBracket& mu, const TwoForm& omega, int trials = 5,
                                  std::uint64_t seed = 42, double tol = 1e-9) {
  detail::require(is_canonical_form(omega), "nice_basis_check: the form must be omega_cn");
  detail::require(trials >= 1, "nice_basis_check: trials must be positive");
  const int n = mu.dim();
  const auto j = j_operator(omega);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  NiceCheck out;
  for (int t = 0; t <= trials; ++t) {
    Vector y = Vector::Zero(n / 2);
    if (t > 0)
      for (Eigen::Index m = 0; m < y.size(); ++m) y(m) = unif(rng);
    const LieBracket amu = act_diagonal(a_omega_diag(y).array().exp().matrix(), mu);
    const double norm_sq = mu_norm_sq(amu);
    if (norm_sq == 0.0) continue;
    const Matrix p = proj_sp(moment_map_gl(amu), j);
    Matrix off = p;
    off.diagonal() -= a_omega_diag(a_omega_coords(p.diagonal()));
    out.max_defect = std::max(out.max_defect, max_abs(off) / norm_sq);
  }
  out.nice = out.max_defect <= tol;
  return out;
}

struct PositiveSolution {
  Vector x;
  double lambda = 0.0;
  /// Largest achievable min_i x_i with sum x = 1.
  double margin = 0.0;
};

/// Strictly positive x with U x = lambda * 1, rescaled so lambda = 1 when lambda > 0.
///
/// Solves  max t  s.t.  U x = lambda 1,  sum x = 1,  x_i >= t  by the simplex
/// method; a solution exists iff the optimum exceeds tol.
inline std::optional<PositiveSolution> positive_solution(const Matrix& u, double tol = 1e-9) {
  const Eigen::Index k = u.rows();
  detail::require(k == u.cols(), "positive_solution: Gram matrix must be square");
  if (k == 0) return std::nullopt;
  // Columns: s (k), t+, t-, lambda+, lambda-; x = s + t 1.
  const Eigen::Index nv = k + 4;
  Matrix a = Matrix::Zero(k + 1, nv);
  Vector b = Vector::Zero(k + 1);
  const Vector row_sums = u.rowwise().sum();
  a.topLeftCorner(k, k) = u;
  a.block(0, k, k, 1) = row_sums;
  a.block(0, k + 1, k, 1) = -row_sums;
  a.block(0, k + 2, k, 1).setConstant(-1.0);
  a.block(0, k + 3, k, 1).setConstant(1.0);
  a.block(k, 0, 1, k).setConstant(1.0);
  a(k, k) = static_cast<double>(k);
  a(k, k + 1) = -static_cast<double>(k);
  b(k) = 1.0;
  Vector c = Vector::Zero(nv);
  c(k) = 1.0;
  c(k + 1) = -1.0;
  const LpResult lp = simplex_maximize(a, b, c);
  if (lp.status != LpStatus::optimal || lp.value <= tol) return std::nullopt;
  const double t = lp.value;
  Vector x = lp.x.head(k).array() + t;
  double lambda = lp.x(k + 2) - lp.x(k + 3);
  if (lambda > tol) {
    x /= lambda;
    lambda = 1.0;
  }
  return PositiveSolution{x, lambda, t};
}

struct BetaPoint {
  Vector beta;  // diagonal
  double norm_sq = 0.0;
};

/// beta = (sum_p x_p R_p) / sum_p x_p.
inline BetaPoint beta_point(const WeightSystem& ws, const Vector& x) {
  detail::require(static_cast<std::size_t>(x.size()) == ws.size() && x.size() > 0, "beta_point: size mismatch");
  Vector beta = Vector::Zero(ws.weights.front().size());
  for (std::size_t p = 0; p < ws.size(); ++p) beta += x(static_cast<Eigen::Index>(p)) * ws.weights[p];
  beta /= x.sum();
  return {beta, beta.squaredNorm()};
}

enum class MinimalStatus { found, no_positive_solution, not_nice, not_nilpotent, not_converged };

inline const char* to_string(MinimalStatus s) {
  switch (s) {
    case MinimalStatus::found: return "found";
    case MinimalStatus::no_positive_solution: return "no_positive_solution";
    case MinimalStatus::not_nice: return "not_nice";
    case MinimalStatus::not_nilpotent: return "not_nilpotent";
    case MinimalStatus::not_converged: return "not_converged";
  }
  return "?";
}

struct MinimalMetricOptions {
  int max_iter = 200;
  double residual_tol = 1e-9;
  double tol = 1e-9;
  int trials = 5;
  std::uint64_t seed = 42;
  double fd_step = 1e-6;
};

struct MinimalMetricResult {
  MinimalStatus status = MinimalStatus::not_converged;
  bool exists = false;
  double nice_defect = 0.0;
  WeightSystem weights;
  std::optional<Vector> x;
  Vector beta;
  double beta_norm_sq = 0.0;
  /// log-diagonal Y in a_omega and a = exp(Y); the metric a.<,> is minimal.
  std::optional<Vector> y_diag;
  std::optional<Vector> a_diag;
  std::optional<LieBracket> mu_critical;
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

inline LieBracket torus_act(const Vector& y, const LieBracket& mu) {
  return act_diagonal(a_omega_diag(y).array().exp().matrix(), mu);
}

inline Vector minimal_equation(const Vector& y, const LieBracket& mu, const AlmostComplexStructure& j,
                               const Vector& beta_coords) {
  return a_omega_coords(proj_sp(moment_map_gl(torus_act(y, mu)), j).diagonal()) - beta_coords;
}

} // namespace detail

/// Solve proj_sp(mm(exp(Y).mu)) = beta for Y in a_omega by damped Newton.
///
/// Directions of a_omega that fix mu are a gauge; the least-squares step keeps
/// Y orthogonal to them.
inline MinimalMetricResult minimal_metric_solve(const LieBracket& mu, const TwoForm& omega,
                                                const MinimalMetricOptions& opt = {}) {
  detail::require(omega.dim() == mu.dim(), "minimal_metric_solve: dimension mismatch");
  detail::require(is_canonical_form(omega), "minimal_metric_solve: the form must be omega_cn");
  const int n = mu.dim();
  MinimalMetricResult res;
  res.beta = Vector::Zero(n);
  if (mu.is_abelian()) {
    res.status = MinimalStatus::found;
    res.exists = true;
    res.y_diag = Vector::Zero(n);
    res.a_diag = Vector::Ones(n);
    res.mu_critical = mu;
    return res;
  }
  // Minimal metrics are a nilpotent notion; the moment map no longer equals 4 Ric otherwise.
  if (!nilpotency_step(mu)) {
    res.status = MinimalStatus::not_nilpotent;
    return res;
  }
  const NiceCheck nc = nice_basis_check(mu, omega, opt.trials, opt.seed, opt.tol);
  res.nice_defect = nc.max_defect;
  if (!nc.nice) {
    res.status = MinimalStatus::not_nice;
    return res;
  }
  res.weights = weight_set(mu, omega);
  const auto sol = positive_solution(res.weights.gram, opt.tol);
  if (!sol) {
    res.status = MinimalStatus::no_positive_solution;
    return res;
  }
  res.exists = true;
  res.x = sol->x;
  const BetaPoint bp = beta_point(res.weights, sol->x);
  res.beta = bp.beta;
  res.beta_norm_sq = bp.norm_sq;

  const auto j = j_operator(omega);
  const Vector target = a_omega_coords(bp.beta);
  const Eigen::Index k = target.size();
  auto eval = [&](const Vector& y) { return detail::minimal_equation(y, mu, j, target); };
  Vector y = Vector::Zero(k);
  Vector f = eval(y);
  double merit = f.squaredNorm();
  int it = 0;
  for (; it < opt.max_iter && std::sqrt(merit) > 1e-14; ++it) {
    Matrix jac(k, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      Vector yp = y, ym = y;
      yp(c) += opt.fd_step;
      ym(c) -= opt.fd_step;
      jac.col(c) = (eval(yp) - eval(ym)) / (2.0 * opt.fd_step);
    }
    Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    Vector step = -svd.solve(f);
    const Vector grad = jac.transpose() * f;
    if (!(grad.dot(step) < 0.0)) step = -grad;
    double alpha = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
      const Vector yn = y + alpha * step;
      const Vector fn = eval(yn);
      if (fn.allFinite() && fn.squaredNorm() <= merit + 1e-4 * alpha * 2.0 * grad.dot(step)) {
        y = yn;
        f = fn;
        merit = fn.squaredNorm();
        moved = true;
        break;
      }
    }
    if (!moved) {
      // Gradient-descent fallback.
      const Vector g = -grad;
      alpha = 1.0;
      for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
        const Vector yn = y + alpha * g;
        const Vector fn = eval(yn);
        if (fn.allFinite() && fn.squaredNorm() < merit) {
          y = yn;
          f = fn;
          merit = fn.squaredNorm();
          moved = true;
          break;
        }
      }
    }
    if (!moved) break;
  }
  res.iterations = it;
  const LieBracket crit = detail::torus_act(y, mu);
  Matrix diff = proj_sp(moment_map_gl(crit), j);
  diff.diagonal() -= bp.beta;
  res.residual = diff.norm();
  res.y_diag = a_omega_diag(y);
  res.a_diag = res.y_diag->array().exp().matrix();
  res.mu_critical = crit;
  res.status = res.residual <= opt.residual_tol ? MinimalStatus::found : MinimalStatus::not_converged;
  return res;
}

} // namespace aks
