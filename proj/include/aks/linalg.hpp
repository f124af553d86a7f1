#pragma once

// Small dense linear algebra helpers shared by every module.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aks {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown for malformed input (dimension mismatch, degenerate forms, bad indices).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Relative cutoff used for rank decisions (singular values below rel * largest are zero).
inline constexpr double kRankRelTol = 1e-10;

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

inline double rank_cutoff(const Vector& sv, double rel, double abs_floor) {
  const double largest = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  return std::max(rel * largest, abs_floor);
}

} // namespace detail

/// Numerical rank from singular values; values <= max(rel*largest, abs_floor) count as zero.
inline int numerical_rank(const Matrix& m, double rel = kRankRelTol, double abs_floor = 1e-13) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  const double cut = detail::rank_cutoff(sv, rel, abs_floor);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

/// Orthonormal basis (as columns) of the null space of m.
inline Matrix nullspace(const Matrix& m, double rel = kRankRelTol, double abs_floor = 1e-13) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cut = detail::rank_cutoff(sv, rel, abs_floor);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return svd.matrixV().rightCols(cols - r);
}

/// Orthonormal basis (as columns) of the column span of m.
inline Matrix column_span(const Matrix& m, double rel = kRankRelTol, double abs_floor = 1e-13) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  const double cut = detail::rank_cutoff(sv, rel, abs_floor);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

/// Trace inner product <<A,B>> = tr(A B^T).
inline double trace_inner(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Symmetric part (A + A^T)/2.
inline Matrix sym(const Matrix& a) { return 0.5 * (a + a.transpose()); }

inline Vector basis_vector(int dim, int index0) {
  Vector v = Vector::Zero(dim);
  v(index0) = 1.0;
  return v;
}

} // namespace aks
