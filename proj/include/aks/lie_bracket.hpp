#pragma once

// Structure-constant representation of Lie brackets on R^n and the elementary
// operations built on it: evaluation, adjoint maps, the lower central series,
// unimodularity, change of basis and the derivation algebra.

#include "aks/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

namespace aks {

/// One structure constant [e_i, e_j] ∋ c e_k. Indices are 1-based with i < j.
struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;

  friend bool operator==(const StructureConstant&, const StructureConstant&) = default;
};

/// Sparse antisymmetric bracket mu on R^dim.
///
/// Only i < j is stored; [e_j, e_i] = -[e_i, e_j] is implied. Entries with c == 0
/// are dropped. A repeated (i, j, k) key is rejected instead of being summed.
/// The Jacobi identity is not enforced here; see jacobi_defect().
class LieBracket {
public:
  LieBracket() = default;

  LieBracket(int dim, std::vector<StructureConstant> entries) : dim_(dim) {
    detail::require(dim > 0, "LieBracket: dimension must be positive");
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : entries) {
      if (e.i < 1 || e.i > dim || e.j < 1 || e.j > dim || e.k < 1 || e.k > dim) {
        std::ostringstream os;
        os << "LieBracket: index out of range 1.." << dim << " in (" << e.i << "," << e.j << "," << e.k << ")";
        throw Error(os.str());
      }
      if (e.i >= e.j) {
        std::ostringstream os;
        os << "LieBracket: entry (" << e.i << "," << e.j << "," << e.k << ") must have i < j";
        throw Error(os.str());
      }
      if (!std::isfinite(e.c)) throw Error("LieBracket: non-finite structure constant");
      if (!seen.insert({e.i, e.j, e.k}).second) {
        std::ostringstream os;
        os << "LieBracket: duplicate structure constant (" << e.i << "," << e.j << "," << e.k << ")";
        throw Error(os.str());
      }
      if (e.c != 0.0) entries_.push_back(e);
    }
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
      return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
    });
    build_ad();
  }

  /// Zero bracket of the given dimension.
  static LieBracket abelian(int dim) { return LieBracket(dim, {}); }

  /// Bracket from the dense images [e_a, e_b] (0-based); values with |c| <= drop are discarded.
  static LieBracket from_adjoints(const std::vector<Matrix>& ad, double drop) {
    const int n = static_cast<int>(ad.size());
    std::vector<StructureConstant> out;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int k = 0; k < n; ++k) {
          const double c = ad[a](k, b);
          if (std::abs(c) > drop) out.push_back({a + 1, b + 1, k + 1, c});
        }
    return LieBracket(n, std::move(out));
  }

  int dim() const { return dim_; }
  const std::vector<StructureConstant>& entries() const { return entries_; }
  bool is_abelian() const { return entries_.empty(); }

  /// ad(e_a) as a dense matrix, 0-based: column b is [e_a, e_b].
  const Matrix& ad_basis(int a) const { return ad_.at(static_cast<std::size_t>(a)); }

  /// [e_a, e_b] for 0-based basis indices.
  Vector bracket_basis(int a, int b) const { return ad_basis(a).col(b); }

  /// Bilinear extension mu(x, y).
  Vector operator()(const Vector& x, const Vector& y) const {
    detail::require(x.size() == dim_ && y.size() == dim_, "bracket: dimension mismatch");
    Vector out = Vector::Zero(dim_);
    for (const auto& e : entries_) {
      const double w = x(e.i - 1) * y(e.j - 1) - x(e.j - 1) * y(e.i - 1);
      out(e.k - 1) += e.c * w;
    }
    return out;
  }

  LieBracket scaled(double s) const {
    std::vector<StructureConstant> out = entries_;
    for (auto& e : out) e.c *= s;
    return LieBracket(dim_, std::move(out));
  }

private:
  void build_ad() {
    ad_.assign(static_cast<std::size_t>(dim_), Matrix::Zero(dim_, dim_));
    for (const auto& e : entries_) {
      ad_[static_cast<std::size_t>(e.i - 1)](e.k - 1, e.j - 1) += e.c;
      ad_[static_cast<std::size_t>(e.j - 1)](e.k - 1, e.i - 1) -= e.c;
    }
  }

  int dim_ = 0;
  std::vector<StructureConstant> entries_;
  std::vector<Matrix> ad_;
};

inline Vector bracket_eval(const LieBracket& mu, const Vector& x, const Vector& y) { return mu(x, y); }

/// Max over i<j<k of the norm of [[e_i,e_j],e_k] + cyclic.
inline double jacobi_defect(const LieBracket& mu) {
  const int n = mu.dim();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const Vector ec = basis_vector(n, c), ea = basis_vector(n, a), eb = basis_vector(n, b);
        const Vector s = mu(mu.bracket_basis(a, b), ec) + mu(mu.bracket_basis(b, c), ea) + mu(mu.bracket_basis(c, a), eb);
        worst = std::max(worst, s.norm());
      }
  return worst;
}

/// ad_x; column j is mu(x, e_j).
inline Matrix ad_matrix(const LieBracket& mu, const Vector& x) {
  detail::require(x.size() == mu.dim(), "ad_matrix: dimension mismatch");
  Matrix out = Matrix::Zero(mu.dim(), mu.dim());
  for (int a = 0; a < mu.dim(); ++a)
    if (x(a) != 0.0) out += x(a) * mu.ad_basis(a);
  return out;
}

/// ||mu||^2 summed over all ordered pairs, i.e. 2 * sum_{i<j,k} c^2.
inline double mu_norm_sq(const LieBracket& mu) {
  double s = 0.0;
  for (const auto& e : mu.entries()) s += e.c * e.c;
  return 2.0 * s;
}

inline double mu_norm(const LieBracket& mu) { return std::sqrt(mu_norm_sq(mu)); }

/// Smallest k with C^{k+1}(mu) = 0, or nullopt when the lower central series stalls.
inline std::optional<int> nilpotency_step(const LieBracket& mu) {
  const int n = mu.dim();
  Matrix span = Matrix::Identity(n, n);
  const double scale = std::max(1.0, mu_norm(mu));
  for (int step = 1; step <= n + 1; ++step) {
    Matrix images(n, n * span.cols());
    for (int a = 0; a < n; ++a) images.middleCols(a * span.cols(), span.cols()) = mu.ad_basis(a) * span;
    const Matrix next = column_span(images, kRankRelTol, 1e-12 * scale);
    if (next.cols() == 0) return step;
    if (next.cols() >= span.cols()) return std::nullopt;
    span = next;
  }
  return std::nullopt;
}

struct UnimodularCheck {
  bool unimodular = false;
  double defect = 0.0;  // max_i |tr ad(e_i)|
};

inline UnimodularCheck is_unimodular(const LieBracket& mu, double tol = 1e-9) {
  double worst = 0.0;
  for (int a = 0; a < mu.dim(); ++a) worst = std::max(worst, std::abs(mu.ad_basis(a).trace()));
  return {worst <= tol, worst};
}

/// The vector H with <H, x> = tr ad_x (mean curvature vector for the canonical metric).
inline Vector trace_vector(const LieBracket& mu) {
  Vector h(mu.dim());
  for (int a = 0; a < mu.dim(); ++a) h(a) = mu.ad_basis(a).trace();
  return h;
}

/// g . mu (x, y) = g mu(g^{-1} x, g^{-1} y). Constants with |c| <= drop are discarded.
inline LieBracket act_basis_change(const Matrix& g, const LieBracket& mu, double drop = 1e-14) {
  const int n = mu.dim();
  detail::require(g.rows() == n && g.cols() == n, "act_basis_change: dimension mismatch");
  Eigen::FullPivLU<Matrix> lu(g);
  const double gscale = std::max(1.0, max_abs(g));
  detail::require(std::abs(g.determinant()) > 1e-12 * std::pow(gscale, n) && lu.isInvertible(),
                  "act_basis_change: singular change of basis");
  const Matrix gi = lu.inverse();
  // ad'(e_a) = g (sum_p gi(p,a) ad(e_p)) gi
  std::vector<Matrix> ad(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    Matrix m = Matrix::Zero(n, n);
    for (int p = 0; p < n; ++p)
      if (gi(p, a) != 0.0) m += gi(p, a) * mu.ad_basis(p);
    ad[static_cast<std::size_t>(a)] = g * m * gi;
  }
  const double scale = std::max(1.0, mu_norm(mu)) * gscale * gscale * gscale;
  return LieBracket::from_adjoints(ad, std::max(drop, 1e-15 * scale));
}

/// Diagonal change of basis a = diag(a_1..a_n): c_{ij}^k -> a_k / (a_i a_j) c_{ij}^k.
inline LieBracket act_diagonal(const Vector& a, const LieBracket& mu) {
  detail::require(a.size() == mu.dim(), "act_diagonal: dimension mismatch");
  std::vector<StructureConstant> out = mu.entries();
  for (auto& e : out) e.c *= a(e.k - 1) / (a(e.i - 1) * a(e.j - 1));
  return LieBracket(mu.dim(), std::move(out));
}

namespace detail {

/// Rows: the k-th component of D[e_i,e_j] - [D e_i, e_j] - [e_i, D e_j] for i<j,
/// as a linear functional of vec(D) (column-major).
inline Matrix leibniz_system(const LieBracket& mu) {
  const int n = mu.dim();
  const int pairs = n * (n - 1) / 2;
  Matrix sys = Matrix::Zero(static_cast<Eigen::Index>(pairs) * n, static_cast<Eigen::Index>(n) * n);
  auto var = [n](int row, int col) { return static_cast<Eigen::Index>(col) * n + row; };
  Eigen::Index r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vector bij = mu.bracket_basis(i, j);
      for (int k = 0; k < n; ++k, ++r) {
        for (int l = 0; l < n; ++l)
          if (bij(l) != 0.0) sys(r, var(k, l)) += bij(l);  // (D [e_i,e_j])_k
        for (int a = 0; a < n; ++a) {
          const double cjk = mu.ad_basis(a)(k, j);  // [e_a, e_j]_k, coefficient of D(a,i)
          if (cjk != 0.0) sys(r, var(a, i)) -= cjk;
          const double cik = mu.ad_basis(i)(k, a);  // [e_i, e_a]_k, coefficient of D(a,j)
          if (cik != 0.0) sys(r, var(a, j)) -= cik;
        }
      }
    }
  return sys;
}

inline Matrix unvec(const Vector& v, int n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

} // namespace detail

/// Basis of Der(mu) = {D : D[x,y] = [Dx,y] + [x,Dy]}.
inline std::vector<Matrix> derivation_basis(const LieBracket& mu) {
  const int n = mu.dim();
  const Matrix sys = detail::leibniz_system(mu);
  const Matrix ns = sys.rows() == 0 ? Matrix::Identity(n * n, n * n)
                                    : nullspace(sys, kRankRelTol, 1e-13 * std::max(1.0, mu_norm(mu)));
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(ns.cols()));
  for (Eigen::Index c = 0; c < ns.cols(); ++c) out.push_back(detail::unvec(ns.col(c), n));
  return out;
}

} // namespace aks
