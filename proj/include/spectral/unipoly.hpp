#pragma once

#include <Eigen/Eigenvalues>
#include <utility>
#include <vector>

#include "spectral/matrix.hpp"

namespace spectral {

/// Univariate polynomial with coefficients stored ascending; the zero
/// polynomial has an empty coefficient list and degree -1.
template <typename T>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(T constant) {
    if (!scalar_traits<T>::is_zero(constant)) c_.push_back(std::move(constant));
  }
  static UniPoly from_coeffs(std::vector<T> coeffs) {
    UniPoly p;
    p.c_ = std::move(coeffs);
    p.trim();
    return p;
  }
  static UniPoly variable() {
    return from_coeffs({scalar_traits<T>::zero(), scalar_traits<T>::one()});
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }

  T coeff(std::size_t i) const {
    return i < c_.size() ? c_[i] : scalar_traits<T>::zero();
  }
  const std::vector<T>& coeffs() const { return c_; }

  T leading() const {
    if (c_.empty()) throw Error("UniPoly: leading coefficient of zero polynomial");
    return c_.back();
  }

  T eval(const T& x) const {
    T acc = scalar_traits<T>::zero();
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * scalar_traits<T>::from_int(static_cast<long>(i));
    return from_coeffs(std::move(d));
  }

  UniPoly operator-() const {
    UniPoly out = *this;
    for (auto& v : out.c_) v = -v;
    return out;
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<T> c(std::max(a.c_.size(), b.c_.size()), scalar_traits<T>::zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return from_coeffs(std::move(c));
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, scalar_traits<T>::zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (scalar_traits<T>::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return from_coeffs(std::move(c));
  }
  friend UniPoly operator*(const UniPoly& a, const T& s) {
    UniPoly out = a;
    for (auto& v : out.c_) v *= s;
    out.trim();
    return out;
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

  /// Division with remainder over the coefficient field.
  friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw Error("UniPoly: division by zero polynomial");
    UniPoly r = a;
    std::vector<T> q(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0,
                     scalar_traits<T>::zero());
    T lb = b.leading();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
      T f = r.leading() / lb;
      q[shift] = f;
      std::vector<T> sub(shift + b.c_.size(), scalar_traits<T>::zero());
      for (std::size_t i = 0; i < b.c_.size(); ++i) sub[shift + i] = f * b.c_[i];
      r = r - from_coeffs(std::move(sub));
    }
    return {from_coeffs(std::move(q)), r};
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    UniPoly out = *this;
    T inv = scalar_traits<T>::one() / leading();
    for (auto& v : out.c_) v *= inv;
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && scalar_traits<T>::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

/// Exact quotient; throws if the division leaves a remainder.
template <typename T>
UniPoly<T> exact_div(const UniPoly<T>& a, const UniPoly<T>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw Error("UniPoly: exact_div has nonzero remainder");
  return q;
}

/// Monic gcd by the Euclidean algorithm (coefficient field).
template <typename T>
UniPoly<T> gcd(const UniPoly<T>& a, const UniPoly<T>& b) {
  UniPoly<T> x = a.monic(), y = b.monic();
  while (!y.is_zero()) {
    auto [q, r] = divmod(x, y);
    x = y;
    y = r.monic();
  }
  return x;
}

/// Newton interpolation through (nodes[i], values[i]); nodes must be distinct.
template <typename T>
UniPoly<T> interpolate(const std::vector<T>& nodes, const std::vector<T>& values) {
  if (nodes.size() != values.size()) throw Error("interpolate: size mismatch");
  const std::size_t n = nodes.size();
  if (n == 0) return UniPoly<T>();
  std::vector<T> dd = values;  // divided differences, computed in place
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
  UniPoly<T> p(dd[0]);
  UniPoly<T> basis(scalar_traits<T>::one());
  for (std::size_t i = 1; i < n; ++i) {
    basis = basis * UniPoly<T>::from_coeffs({-nodes[i - 1], scalar_traits<T>::one()});
    p = p + basis * dd[i];
  }
  return p;
}

/// Roots of a nonconstant complex polynomial via the companion matrix.
inline std::vector<Complex> companion_roots(const UniPoly<Complex>& p) {
  int d = p.degree();
  if (d < 1) return {};
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
  Complex lead = p.leading();
  for (int i = 0; i < d; ++i) {
    if (i + 1 < d) c(i + 1, i) = 1.0;
    c(i, d - 1) = -p.coeff(static_cast<std::size_t>(i)) / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + d);
  return roots;
}

}  // namespace spectral
