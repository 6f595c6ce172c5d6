#pragma once

#include <vector>

#include "spectral/eigensolve.hpp"

namespace spectral {

/// Computable stand-in for a GL-conjugacy class: characteristic polynomial
/// plus the rank sequence of (T - lambda_i)^m for every eigenvalue. Two
/// matrices are declared conjugate iff all fields agree (within eig_tol on
/// the float backend).
template <typename T>
struct ConjClassInvariant {
  std::size_t n = 0;
  UniPoly<T> char_poly;
  std::vector<T> eigenvalues;                      // ascending (Re, Im)
  std::vector<int> multiplicities;                 // algebraic
  std::vector<std::vector<std::size_t>> rank_seq;  // [i][m-1] = rank (T - lambda_i)^m

  /// Rank of any representative: n unless 0 is an eigenvalue, in which case
  /// it is the recorded rank of (T - 0)^1.
  std::size_t rank(const ToleranceConfig& tol = {}) const {
    double scale = 1.0;
    if constexpr (!scalar_traits<T>::is_exact)
      for (const auto& v : eigenvalues) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
      bool zero_eig = scalar_traits<T>::is_exact
                          ? scalar_traits<T>::is_zero(eigenvalues[i])
                          : scalar_traits<T>::abs_approx(eigenvalues[i]) <= tol.eig_tol * scale;
      if (zero_eig) return rank_seq[i].empty() ? n : rank_seq[i][0];
    }
    return n;
  }
};

template <typename T>
ConjClassInvariant<T> conj_class(const Matrix<T>& m, const ToleranceConfig& tol = {}) {
  if (!m.is_square()) throw Error("conj_class: matrix not square");
  ConjClassInvariant<T> out;
  out.n = m.rows();
  out.char_poly = charpoly(m);
  for (const auto& [lam, mult] : eigen(m, tol)) {
    Matrix<T> shifted = m;
    for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= lam;
    std::vector<std::size_t> ranks;
    Matrix<T> pw = shifted;
    for (std::size_t e = 1; e <= m.rows(); ++e) {
      std::size_t r = rank(pw, tol);
      if (!ranks.empty() && r > ranks.back())
        throw Error("conj_class: rank sequence not non-increasing");
      ranks.push_back(r);
      if (e < m.rows()) pw = pw * shifted;
    }
    out.eigenvalues.push_back(lam);
    out.multiplicities.push_back(mult);
    out.rank_seq.push_back(std::move(ranks));
  }
  return out;
}

namespace detail {

template <typename T>
bool scalars_close(const T& a, const T& b, double tol_abs) {
  if constexpr (scalar_traits<T>::is_exact)
    return a == b;
  else
    return std::abs(a - b) <= tol_abs;
}

}  // namespace detail

template <typename T>
bool same_class(const ConjClassInvariant<T>& a, const ConjClassInvariant<T>& b,
                const ToleranceConfig& tol = {}) {
  if (a.n != b.n) return false;
  if (a.eigenvalues.size() != b.eigenvalues.size()) return false;
  double scale = 1.0;
  if constexpr (!scalar_traits<T>::is_exact) {
    for (const auto& c : a.char_poly.coeffs()) scale = std::max(scale, std::abs(c));
    for (const auto& v : a.eigenvalues) scale = std::max(scale, std::abs(v));
  }
  if (a.char_poly.degree() != b.char_poly.degree()) return false;
  for (int i = 0; i <= a.char_poly.degree(); ++i)
    if (!detail::scalars_close(a.char_poly.coeff(static_cast<std::size_t>(i)),
                               b.char_poly.coeff(static_cast<std::size_t>(i)),
                               tol.eig_tol * scale))
      return false;
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    if (!detail::scalars_close(a.eigenvalues[i], b.eigenvalues[i], tol.eig_tol * scale))
      return false;
    if (a.multiplicities[i] != b.multiplicities[i]) return false;
    if (a.rank_seq[i] != b.rank_seq[i]) return false;
  }
  return true;
}

/// Convenience: conjugacy test straight from two matrices.
template <typename T>
bool conjugate(const Matrix<T>& a, const Matrix<T>& b, const ToleranceConfig& tol = {}) {
  return same_class(conj_class(a, tol), conj_class(b, tol), tol);
}

}  // namespace spectral
