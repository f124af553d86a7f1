#pragma once

// Algebras used across the suites, written out by hand.

#include "aks/catalog.hpp"

#include <cmath>

namespace fx {

using aks::LieBracket;
using aks::Matrix;
using aks::StructureConstant;
using aks::TwoForm;
using aks::Vector;

inline LieBracket n11() { return LieBracket(6, {{1, 2, 4, 1}, {1, 4, 5, 1}, {2, 3, 6, 1}, {2, 4, 6, 1}}); }
inline LieBracket n13() { return LieBracket(6, {{1, 2, 4, 1}, {1, 3, 5, 1}, {1, 4, 6, 1}, {2, 3, 6, 1}}); }
inline LieBracket n18() { return LieBracket(6, {{1, 2, 4, 1}, {1, 3, 5, 1}, {2, 3, 6, 1}}); }

/// omega_1(lambda) on n11.
inline TwoForm n11_omega1(double lambda) { return TwoForm(6, {{1, 6, 1}, {2, 5, 1}, {2, 6, lambda}, {3, 4, -1}}); }

/// omega_2(lambda) on n13.
inline TwoForm n13_omega2(double lambda) { return TwoForm(6, {{1, 6, 1}, {2, 4, lambda}, {2, 5, 1}, {3, 5, 1}}); }

/// omega_2(t) on n18.
inline TwoForm n18_omega2(double t) {
  return TwoForm(6, {{1, 5, 1}, {1, 6, t}, {2, 5, -t}, {2, 6, 1}, {3, 4, -2 * t}});
}

/// n11 with omega_1(lambda) in a nice Darboux basis, lambda != 0.
inline LieBracket n11_nice(double l) {
  return LieBracket(6, {{1, 2, 4, -l / 2}, {1, 3, 5, -l / 4}, {1, 4, 5, -l / 2},
                        {2, 3, 5, -l / 2}, {2, 3, 6, l / 4}, {2, 4, 6, -l / 2}});
}

/// n11 with omega_1(0) in a nice Darboux basis.
inline LieBracket n11_lambda0() { return LieBracket(6, {{1, 2, 3, 0.5}, {1, 2, 4, -1}, {1, 4, 5, -1}, {2, 3, 6, 1}, {2, 4, 6, -0.5}}); }

/// Critical bracket of n11 at lambda = 0.
inline LieBracket n11_lambda0_critical() {
  const double a = std::sqrt(6.0) / 12, b = std::sqrt(2.0) / 4;
  return LieBracket(6, {{1, 2, 3, a}, {1, 2, 4, -b}, {1, 4, 5, -2 * a}, {2, 3, 6, b}, {2, 4, 6, -a}});
}

inline LieBracket einstein() {
  return LieBracket(6, {{1, 2, 1, 1}, {1, 3, 1, 1}, {1, 4, 6, -2}, {1, 6, 5, -2},
                        {2, 5, 5, -2}, {2, 6, 6, -1}, {3, 4, 4, 2}, {3, 6, 6, 1}});
}

/// The 8-dimensional nilpotent example with omega_cn.
inline LieBracket dim8() {
  const double q = std::sqrt(14.0) / 14;
  return LieBracket(8, {{1, 2, 4, q}, {2, 5, 8, q}, {2, 6, 3, q}, {3, 7, 4, q}, {5, 7, 6, -q}, {6, 7, 1, -q}, {7, 8, 3, q}});
}

inline Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

inline Vector vec(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d;
}

/// E_ij with 0-based indices.
inline Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline const aks::Catalog& catalog() {
  static const aks::Catalog cat = aks::Catalog::load(aks::default_catalog_path());
  return cat;
}

inline aks::Algebra entry(const std::string& id, const aks::ParamMap& sample = {}) {
  const auto& e = catalog().at(id);
  return e.instantiate(sample.empty() ? e.samples.front() : sample);
}

} // namespace fx
