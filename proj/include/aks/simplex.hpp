#pragma once

// Dense two-phase tableau simplex for  max c^T x  s.t.  A x = b, x >= 0.
// Bland's rule throughout; problems here have at most a few dozen columns.

#include "aks/linalg.hpp"

#include <limits>
#include <vector>

namespace aks {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double value = 0.0;
};

namespace detail {

class Tableau {
public:
  Tableau(Matrix t, std::vector<int> basis, double eps) : t_(std::move(t)), basis_(std::move(basis)), eps_(eps) {}

  // Last row holds reduced costs of a minimization; last column holds the rhs.
  // Columns >= allowed_cols never enter.
  bool optimize(Eigen::Index allowed_cols) {
    const Eigen::Index m = t_.rows() - 1;
    for (int guard = 0; guard < 100000; ++guard) {
      Eigen::Index enter = -1;
      for (Eigen::Index c = 0; c < allowed_cols; ++c)
        if (t_(m, c) < -eps_) {
          enter = c;
          break;
        }
      if (enter < 0) return true;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < m; ++r)
        if (t_(r, enter) > eps_) best = std::min(best, t_(r, t_.cols() - 1) / t_(r, enter));
      Eigen::Index leave = -1;
      for (Eigen::Index r = 0; r < m; ++r) {
        if (t_(r, enter) <= eps_ || t_(r, t_.cols() - 1) / t_(r, enter) > best + eps_) continue;
        if (leave < 0 || basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)]) leave = r;
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error("simplex: iteration limit exceeded");
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i)
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(c);
  }

  void drop_row(Eigen::Index r) {
    Matrix t(t_.rows() - 1, t_.cols());
    t << t_.topRows(r), t_.bottomRows(t_.rows() - r - 1);
    t_ = std::move(t);
    basis_.erase(basis_.begin() + r);
  }

  Matrix& table() { return t_; }
  std::vector<int>& basis() { return basis_; }

private:
  Matrix t_;
  std::vector<int> basis_;
  double eps_;
};

} // namespace detail

inline LpResult simplex_maximize(const Matrix& a, const Vector& b, const Vector& c, double eps = 1e-11) {
  const Eigen::Index m = a.rows(), n = a.cols();
  detail::require(b.size() == m && c.size() == n, "simplex: dimension mismatch");
  // Phase 1 on [A | I] with artificials.
  Matrix t = Matrix::Zero(m + 1, n + m + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) {
    const double s = b(r) < 0 ? -1.0 : 1.0;
    t.row(r).head(n) = s * a.row(r);
    t(r, n + r) = 1.0;
    t(r, n + m) = s * b(r);
    basis[static_cast<std::size_t>(r)] = static_cast<int>(n + r);
  }
  for (Eigen::Index r = 0; r < m; ++r) t.row(m) -= t.row(r);
  t.block(m, n, 1, m).setZero();
  detail::Tableau tab(std::move(t), std::move(basis), eps);
  tab.optimize(n + m);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-tab.table()(tab.table().rows() - 1, n + m) > 1e-9 * scale) return {LpStatus::infeasible, {}, 0.0};

  // Drive artificials out; rows with no eligible pivot are redundant.
  for (Eigen::Index r = 0; r < tab.table().rows() - 1;) {
    if (tab.basis()[static_cast<std::size_t>(r)] < n) {
      ++r;
      continue;
    }
    Eigen::Index col = -1;
    for (Eigen::Index k = 0; k < n; ++k)
      if (std::abs(tab.table()(r, k)) > 1e-9) {
        col = k;
        break;
      }
    if (col < 0) {
      tab.drop_row(r);
      continue;
    }
    tab.pivot(r, col);
    ++r;
  }

  // Phase 2: minimize -c^T x.
  Matrix& tt = tab.table();
  const Eigen::Index rows = tt.rows() - 1;
  tt.row(rows).setZero();
  tt.block(rows, 0, 1, n) = -c.transpose();
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int bv = tab.basis()[static_cast<std::size_t>(r)];
    if (tt(rows, bv) != 0.0) tt.row(rows) -= tt(rows, bv) * tt.row(r);
  }
  if (!tab.optimize(n)) return {LpStatus::unbounded, {}, 0.0};
  Vector x = Vector::Zero(n);
  for (Eigen::Index r = 0; r < rows; ++r) x(tab.basis()[static_cast<std::size_t>(r)]) = tt(r, tt.cols() - 1);
  return {LpStatus::optimal, x, c.dot(x)};
}

} // namespace aks
