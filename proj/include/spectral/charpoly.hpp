#pragma once

#include <utility>

#include "spectral/matrix.hpp"
#include "spectral/unipoly.hpp"

namespace spectral {

/// Characteristic polynomial and adjugate by the Faddeev-LeVerrier recurrence.
/// The only divisions are by the integers 1..n, so the result is exact on the
/// exact backend. Returns (monic charpoly of degree n, adj(M)).
template <typename T>
std::pair<UniPoly<T>, Matrix<T>> charpoly_adjugate(const Matrix<T>& m) {
  if (!m.is_square()) throw Error("charpoly: matrix not square");
  const std::size_t n = m.rows();
  std::vector<T> c(n + 1, scalar_traits<T>::zero());
  c[n] = scalar_traits<T>::one();  // p = lambda^n + c_1 lambda^{n-1} + ... + c_n
  if (n == 0) return {UniPoly<T>::from_coeffs(std::move(c)), Matrix<T>(0, 0)};

  Matrix<T> b = Matrix<T>::identity(n);  // B_0
  Matrix<T> b_prev = b;
  for (std::size_t k = 1; k <= n; ++k) {
    b_prev = b;
    Matrix<T> a = m * b_prev;  // A_k
    T ck = -(a.trace() / scalar_traits<T>::from_int(static_cast<long>(k)));
    c[n - k] = ck;
    b = a;
    for (std::size_t i = 0; i < n; ++i) b(i, i) += ck;  // B_k = A_k + c_k I
  }
  // adj(M) = (-1)^{n-1} B_{n-1}
  Matrix<T> adj = (n % 2 == 0) ? -b_prev : b_prev;
  return {UniPoly<T>::from_coeffs(std::move(c)), adj};
}

template <typename T>
UniPoly<T> charpoly(const Matrix<T>& m) {
  return charpoly_adjugate(m).first;
}

template <typename T>
Matrix<T> adjugate(const Matrix<T>& m) {
  return charpoly_adjugate(m).second;
}

}  // namespace spectral
