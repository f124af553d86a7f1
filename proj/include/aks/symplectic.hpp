#pragma once

// Two-forms, the almost complex structure J of a compatible pair, the
// (anti-)complexified projections, the diagonal subalgebra a_omega of sp
// adapted to the canonical form, Darboux normalization and the Nijenhuis tensor.

#include "aks/lie_bracket.hpp"

#include <optional>
#include <sstream>
#include <vector>

namespace aks {

/// One coefficient of omega = sum c e_i^* ^ e_j^*. Indices are 1-based with i < j.
struct FormEntry {
  int i = 0;
  int j = 0;
  double c = 0.0;

  friend bool operator==(const FormEntry&, const FormEntry&) = default;
};

/// Skew bilinear form on R^dim stored sparsely; dim must be even.
class TwoForm {
public:
  TwoForm() = default;

  TwoForm(int dim, std::vector<FormEntry> entries) : dim_(dim) {
    detail::require(dim > 0 && dim % 2 == 0, "TwoForm: dimension must be even and positive");
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& e : entries) {
      if (e.i < 1 || e.j > dim || e.i >= e.j) {
        std::ostringstream os;
        os << "TwoForm: entry (" << e.i << "," << e.j << ") must satisfy 1 <= i < j <= " << dim;
        throw Error(os.str());
      }
      if (m(e.i - 1, e.j - 1) != 0.0) {
        std::ostringstream os;
        os << "TwoForm: duplicate entry (" << e.i << "," << e.j << ")";
        throw Error(os.str());
      }
      if (!std::isfinite(e.c)) throw Error("TwoForm: non-finite coefficient");
      m(e.i - 1, e.j - 1) = e.c;
      m(e.j - 1, e.i - 1) = -e.c;
      if (e.c != 0.0) entries_.push_back(e);
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  }

  /// Form with omega(e_a, e_b) = m(a, b); entries with |m| <= drop are discarded.
  static TwoForm from_matrix(const Matrix& m, double drop = 1e-14) {
    detail::require(m.rows() == m.cols(), "TwoForm: matrix must be square");
    std::vector<FormEntry> out;
    for (int a = 0; a < m.rows(); ++a)
      for (int b = a + 1; b < m.cols(); ++b)
        if (std::abs(m(a, b)) > drop) out.push_back({a + 1, b + 1, m(a, b)});
    return TwoForm(static_cast<int>(m.rows()), std::move(out));
  }

  int dim() const { return dim_; }
  const std::vector<FormEntry>& entries() const { return entries_; }

  /// Dense matrix with omega(x, y) = x^T M y.
  Matrix matrix() const {
    Matrix m = Matrix::Zero(dim_, dim_);
    for (const auto& e : entries_) {
      m(e.i - 1, e.j - 1) = e.c;
      m(e.j - 1, e.i - 1) = -e.c;
    }
    return m;
  }

  double operator()(const Vector& x, const Vector& y) const {
    detail::require(x.size() == dim_ && y.size() == dim_, "TwoForm: dimension mismatch");
    double s = 0.0;
    for (const auto& e : entries_) s += e.c * (x(e.i - 1) * y(e.j - 1) - x(e.j - 1) * y(e.i - 1));
    return s;
  }

private:
  int dim_ = 0;
  std::vector<FormEntry> entries_;
};

/// omega_cn = sum_{i=1..n} e_i^* ^ e_{2n+1-i}^*.
inline TwoForm canonical_form(int half_dim) {
  detail::require(half_dim > 0, "canonical_form: half dimension must be positive");
  std::vector<FormEntry> out;
  for (int i = 1; i <= half_dim; ++i) out.push_back({i, 2 * half_dim + 1 - i, 1.0});
  return TwoForm(2 * half_dim, std::move(out));
}

inline bool is_nondegenerate(const TwoForm& omega, double tol = 1e-9) {
  return std::abs(omega.matrix().determinant()) > tol;
}

/// Max over basis triples of |omega([x,y],z) + omega([y,z],x) + omega([z,x],y)|.
inline double closedness_defect(const TwoForm& omega, const LieBracket& mu) {
  detail::require(omega.dim() == mu.dim(), "closedness_defect: dimension mismatch");
  const int n = mu.dim();
  const Matrix w = omega.matrix();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const double s = mu.bracket_basis(a, b).dot(w.col(c)) + mu.bracket_basis(b, c).dot(w.col(a)) +
                         mu.bracket_basis(c, a).dot(w.col(b));
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

/// (g . omega)(x, y) = omega(g^{-1} x, g^{-1} y).
inline TwoForm act_form(const Matrix& g, const TwoForm& omega, double drop = 1e-14) {
  detail::require(g.rows() == omega.dim() && g.cols() == omega.dim(), "act_form: dimension mismatch");
  Eigen::FullPivLU<Matrix> lu(g);
  detail::require(lu.isInvertible(), "act_form: singular change of basis");
  const Matrix gi = lu.inverse();
  return TwoForm::from_matrix(gi.transpose() * omega.matrix() * gi, drop);
}

struct AlmostComplexStructure {
  Matrix j;
  /// ||J^2 + Id||_max; zero for a compatible triple.
  double compatibility_defect = 0.0;
};

/// J with omega(X, Y) = <JX, Y>; metric is the Gram matrix of <,> (canonical if absent).
inline AlmostComplexStructure j_operator(const TwoForm& omega, const std::optional<Matrix>& metric = std::nullopt) {
  const int n = omega.dim();
  const Matrix w = omega.matrix();
  detail::require(is_nondegenerate(omega, 1e-12), "j_operator: degenerate two-form");
  Matrix j;
  if (metric) {
    detail::require(metric->rows() == n && metric->cols() == n, "j_operator: metric dimension mismatch");
    Eigen::LLT<Matrix> llt(*metric);
    detail::require(llt.info() == Eigen::Success && max_abs(*metric - metric->transpose()) <= 1e-12,
                    "j_operator: metric must be symmetric positive definite");
    j = llt.solve(w.transpose());
  } else {
    j = w.transpose();
  }
  const double defect = max_abs(j * j + Matrix::Identity(n, n));
  return {j, defect};
}

/// T^c = (T - J T J) / 2.
inline Matrix complexified_part(const Matrix& t, const AlmostComplexStructure& j) {
  return 0.5 * (t - j.j * t * j.j);
}

/// T^ac = (T + J T J) / 2.
inline Matrix anti_complexified_part(const Matrix& t, const AlmostComplexStructure& j) {
  return 0.5 * (t + j.j * t * j.j);
}

/// Orthogonal projection of a symmetric map onto sp: (S + J S J) / 2.
inline Matrix proj_sp(const Matrix& s, const AlmostComplexStructure& j) {
  detail::require(s.rows() == j.j.rows() && s.cols() == j.j.cols(), "proj_sp: dimension mismatch");
  detail::require(max_abs(s - s.transpose()) <= 1e-9 * std::max(1.0, max_abs(s)),
                  "proj_sp: input must be symmetric");
  return anti_complexified_part(s, j);
}

/// Orthonormal basis of a_omega = {diag(-x_1, ..., -x_n, x_n, ..., x_1)} for omega_cn.
/// Element m is (E_{2n-m,2n-m} - E_{m,m}) / sqrt(2) (0-based m).
inline std::vector<Matrix> a_omega_basis(int dim) {
  detail::require(dim > 0 && dim % 2 == 0, "a_omega_basis: dimension must be even");
  std::vector<Matrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int m = 0; m < dim / 2; ++m) {
    Matrix b = Matrix::Zero(dim, dim);
    b(m, m) = -s;
    b(dim - 1 - m, dim - 1 - m) = s;
    out.push_back(b);
  }
  return out;
}

/// Coordinates of the a_omega component of a diagonal vector d (0-based pairs m <-> dim-1-m).
inline Vector a_omega_coords(const Vector& diag) {
  const Eigen::Index n = diag.size();
  Vector out(n / 2);
  for (Eigen::Index m = 0; m < n / 2; ++m) out(m) = (diag(n - 1 - m) - diag(m)) / std::sqrt(2.0);
  return out;
}

/// Diagonal of sum_m y_m * a_omega_basis[m].
inline Vector a_omega_diag(const Vector& coords) {
  const Eigen::Index n = 2 * coords.size();
  Vector d(n);
  for (Eigen::Index m = 0; m < coords.size(); ++m) {
    d(m) = -coords(m) / std::sqrt(2.0);
    d(n - 1 - m) = coords(m) / std::sqrt(2.0);
  }
  return d;
}

/// Returns invertible g with omega(g^{-1} x, g^{-1} y) = omega_cn(x, y).
///
/// Symplectic Gram-Schmidt: the next conjugate pair is the (a, b) maximizing
/// |omega(v_a, v_b)| among the remaining vectors, ties broken lexicographically.
/// The k-th pair fills slots k and 2n+1-k.
inline Matrix darboux_normalize(const TwoForm& omega, double tol = 1e-12) {
  const int n = omega.dim();
  const Matrix w = omega.matrix();
  detail::require(is_nondegenerate(omega, tol), "darboux_normalize: degenerate two-form");
  std::vector<Vector> vs;
  for (int a = 0; a < n; ++a) vs.push_back(basis_vector(n, a));
  std::vector<int> remaining(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) remaining[static_cast<std::size_t>(a)] = a;
  Matrix frame = Matrix::Zero(n, n);
  for (int slot = 0; slot < n / 2; ++slot) {
    int best_a = -1, best_b = -1;
    double best = 0.0;
    for (std::size_t p = 0; p < remaining.size(); ++p)
      for (std::size_t q = p + 1; q < remaining.size(); ++q) {
        const int a = remaining[p], b = remaining[q];
        const double v = std::abs(vs[a].dot(w * vs[b]));
        if (v > best * (1.0 + 1e-12)) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    detail::require(best_a >= 0 && best > tol, "darboux_normalize: degenerate two-form");
    const Vector u = vs[best_a];
    const Vector v = vs[best_b] / u.dot(w * vs[best_b]);
    std::erase(remaining, best_a);
    std::erase(remaining, best_b);
    for (int r : remaining) {
      const Vector x = vs[r];
      vs[r] = x - x.dot(w * v) * u + x.dot(w * u) * v;
    }
    frame.col(slot) = u;
    frame.col(n - 1 - slot) = v;
  }
  return frame.inverse();
}

/// N_J(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y].
inline Vector nijenhuis(const LieBracket& mu, const AlmostComplexStructure& j, const Vector& x, const Vector& y) {
  const Matrix& J = j.j;
  return mu(J * x, J * y) - J * mu(J * x, y) - J * mu(x, J * y) - mu(x, y);
}

} // namespace aks
