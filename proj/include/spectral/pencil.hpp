#pragma once

#include <optional>
#include <utility>

#include "spectral/bipoly.hpp"
#include "spectral/linalg.hpp"

namespace spectral {

/// Linear matrix pencil M(zeta, eta) = (A0 + A1 zeta | B0 + B1 eta), a square
/// matrix of size n = k + l presenting a 1-dimensional sheaf as a cokernel.
template <typename T>
struct Pencil {
  std::size_t k = 0, l = 0;
  Matrix<T> a0, a1;  // n x k
  Matrix<T> b0, b1;  // n x l

  std::size_t n() const { return k + l; }

  void validate() const {
    std::size_t nn = k + l;
    if (a0.rows() != nn || a0.cols() != k || a1.rows() != nn || a1.cols() != k ||
        b0.rows() != nn || b0.cols() != l || b1.rows() != nn || b1.cols() != l)
      throw Error("Pencil: block shape mismatch");
  }

  Matrix<T> eval(const T& z, const T& e) const {
    Matrix<T> az = a0 + a1 * z;
    Matrix<T> be = b0 + b1 * e;
    return hstack(az, be);
  }
};

/// Normalized pencil: M(zeta, eta) = [[X - zeta, F], [G, Y - eta]], i.e. the
/// pencil with (A1 | B1) = -Identity. The Poisson phase-space point.
template <typename T>
struct Quadruple {
  std::size_t k = 0, l = 0;
  Matrix<T> x;  // k x k
  Matrix<T> y;  // l x l
  Matrix<T> f;  // k x l
  Matrix<T> g;  // l x k

  void validate() const {
    if (x.rows() != k || x.cols() != k || y.rows() != l || y.cols() != l ||
        f.rows() != k || f.cols() != l || g.rows() != l || g.cols() != k)
      throw Error("Quadruple: block shape mismatch");
  }

  Pencil<T> embed() const {
    Pencil<T> p;
    p.k = k;
    p.l = l;
    std::size_t nn = k + l;
    p.a0 = Matrix<T>(nn, k);
    p.a0.set_block(0, 0, x);
    p.a0.set_block(k, 0, g);
    p.a1 = Matrix<T>(nn, k);
    for (std::size_t i = 0; i < k; ++i) p.a1(i, i) = -scalar_traits<T>::one();
    p.b0 = Matrix<T>(nn, l);
    p.b0.set_block(0, 0, f);
    p.b0.set_block(k, 0, y);
    p.b1 = Matrix<T>(nn, l);
    for (std::size_t i = 0; i < l; ++i) p.b1(k + i, i) = -scalar_traits<T>::one();
    return p;
  }

  Matrix<T> eval(const T& z, const T& e) const {
    std::size_t nn = k + l;
    Matrix<T> m(nn, nn);
    m.set_block(0, 0, x);
    for (std::size_t i = 0; i < k; ++i) m(i, i) -= z;
    m.set_block(0, k, f);
    m.set_block(k, 0, g);
    m.set_block(k, k, y);
    for (std::size_t i = 0; i < l; ++i) m(k + i, k + i) -= e;
    return m;
  }
};

/// Left-multiplies by gauge = -(A1|B1)^{-1}, bringing the pencil to quadruple
/// form. Throws PointAtInfinityOnSupportError when det(A1|B1) = 0, which means
/// (inf, inf) lies on the support; use mobius_shift to move it first.
template <typename T>
std::pair<Quadruple<T>, Matrix<T>> normalize(const Pencil<T>& p,
                                             const ToleranceConfig& tol = {}) {
  p.validate();
  Matrix<T> ab1 = hstack(p.a1, p.b1);
  Matrix<T> gauge;
  try {
    gauge = -inverse(ab1, tol);
  } catch (const SingularMatrixError&) {
    throw PointAtInfinityOnSupportError(
        "normalize: det(A1|B1) = 0, the point (inf, inf) lies on the support");
  }
  Matrix<T> a0 = gauge * p.a0;
  Matrix<T> b0 = gauge * p.b0;
  Quadruple<T> q;
  q.k = p.k;
  q.l = p.l;
  q.x = a0.block(0, 0, p.k, p.k);
  q.g = a0.block(p.k, 0, p.l, p.k);
  q.f = b0.block(0, 0, p.k, p.l);
  q.y = b0.block(p.k, 0, p.l, p.l);
  return {q, gauge};
}

/// The full group action (g, h1, h2): M(zeta,eta) -> g (A(zeta) h1^{-1} | B(eta) h2^{-1}).
template <typename T>
Pencil<T> act_full(const Pencil<T>& p, const Matrix<T>& g, const Matrix<T>& h1,
                   const Matrix<T>& h2, const ToleranceConfig& tol = {}) {
  Matrix<T> h1i, h2i;
  try {
    h1i = inverse(h1, tol);
    h2i = inverse(h2, tol);
    if (rank(g, tol) < g.rows()) throw SingularMatrixError("g");
  } catch (const SingularMatrixError&) {
    throw SingularGroupElementError("act_full: group element is singular");
  }
  Pencil<T> out;
  out.k = p.k;
  out.l = p.l;
  out.a0 = g * p.a0 * h1i;
  out.a1 = g * p.a1 * h1i;
  out.b0 = g * p.b0 * h2i;
  out.b1 = g * p.b1 * h2i;
  return out;
}

/// Residual action on quadruples: (g,h).(X,Y,F,G) = (gXg^{-1}, hYh^{-1}, gFh^{-1}, hGg^{-1}).
template <typename T>
Quadruple<T> act_K(const Quadruple<T>& q, const Matrix<T>& g, const Matrix<T>& h,
                   const ToleranceConfig& tol = {}) {
  Matrix<T> gi, hi;
  try {
    gi = inverse(g, tol);
    hi = inverse(h, tol);
  } catch (const SingularMatrixError&) {
    throw SingularGroupElementError("act_K: group element is singular");
  }
  Quadruple<T> out;
  out.k = q.k;
  out.l = q.l;
  out.x = g * q.x * gi;
  out.y = h * q.y * hi;
  out.f = g * q.f * hi;
  out.g = h * q.g * gi;
  return out;
}

/// zeta -> (a zeta + b) / (c zeta + d) on one P1 factor, ad - bc != 0.
template <typename T>
struct MobiusMap {
  T a, b, c, d;

  static MobiusMap identity() {
    return {scalar_traits<T>::one(), scalar_traits<T>::zero(), scalar_traits<T>::zero(),
            scalar_traits<T>::one()};
  }
  static MobiusMap shift(const T& s) {
    return {scalar_traits<T>::one(), s, scalar_traits<T>::zero(), scalar_traits<T>::one()};
  }
  static MobiusMap chart_swap() {
    return {scalar_traits<T>::zero(), scalar_traits<T>::one(), scalar_traits<T>::one(),
            scalar_traits<T>::zero()};
  }
};

/// Pulls the pencil back along the product automorphism given by a Mobius map
/// in each factor: the columns A(zeta), B(eta) are substituted and cleared of
/// denominators, so A1' = c A0 + a A1 and A0' = d A0 + b A1 (same for B).
/// This is the tool for relocating the support when (inf, inf) lies on it;
/// a pure shift never changes (A1|B1) and cannot do that job.
template <typename T>
Pencil<T> mobius_transform(const Pencil<T>& p, const MobiusMap<T>& zm, const MobiusMap<T>& em) {
  if (scalar_traits<T>::is_zero(zm.a * zm.d - zm.b * zm.c) ||
      scalar_traits<T>::is_zero(em.a * em.d - em.b * em.c))
    throw Error("mobius_transform: map is not invertible");
  Pencil<T> out = p;
  out.a0 = p.a0 * zm.d + p.a1 * zm.b;
  out.a1 = p.a0 * zm.c + p.a1 * zm.a;
  out.b0 = p.b0 * em.d + p.b1 * em.b;
  out.b1 = p.b0 * em.c + p.b1 * em.a;
  return out;
}

/// Affine reparametrization zeta -> zeta + dz, eta -> eta + de.
template <typename T>
Pencil<T> mobius_shift(const Pencil<T>& p, const T& dz, const T& de) {
  return mobius_transform(p, MobiusMap<T>::shift(dz), MobiusMap<T>::shift(de));
}

/// det M(zeta, eta) as an exact bidegree-(<=k, <=l) polynomial, computed by
/// evaluation on the integer grid {0..k} x {0..l} and tensor interpolation.
/// Throws ZeroDeterminantError when identically zero.
template <typename T>
BiPoly<T> spectral_det(const Pencil<T>& p) {
  p.validate();
  std::vector<T> zn, en;
  for (std::size_t i = 0; i <= p.k; ++i) zn.push_back(scalar_traits<T>::from_int(static_cast<long>(i)));
  for (std::size_t j = 0; j <= p.l; ++j) en.push_back(scalar_traits<T>::from_int(static_cast<long>(j)));
  std::vector<std::vector<T>> vals(zn.size(), std::vector<T>(en.size()));
  for (std::size_t i = 0; i < zn.size(); ++i)
    for (std::size_t j = 0; j < en.size(); ++j) vals[i][j] = det(p.eval(zn[i], en[j]));
  BiPoly<T> d = interpolate2(zn, en, vals);
  if (d.is_zero())
    throw ZeroDeterminantError("spectral_det: det M vanishes identically");
  return d;
}

template <typename T>
BiPoly<T> spectral_det(const Quadruple<T>& q) {
  return spectral_det(q.embed());
}

namespace detail {

// Interpolated (n-1)x(n-1) minor of the pencil with one row and one column
// deleted; bidegree is bounded by (k, l), so the spectral grid suffices.
template <typename T>
BiPoly<T> pencil_minor(const Pencil<T>& p, std::size_t del_row, std::size_t del_col) {
  std::vector<T> zn, en;
  for (std::size_t i = 0; i <= p.k; ++i) zn.push_back(scalar_traits<T>::from_int(static_cast<long>(i)));
  for (std::size_t j = 0; j <= p.l; ++j) en.push_back(scalar_traits<T>::from_int(static_cast<long>(j)));
  std::vector<std::vector<T>> vals(zn.size(), std::vector<T>(en.size()));
  const std::size_t n = p.n();
  for (std::size_t i = 0; i < zn.size(); ++i)
    for (std::size_t j = 0; j < en.size(); ++j) {
      Matrix<T> m = p.eval(zn[i], en[j]);
      Matrix<T> sub(n - 1, n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == del_row) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == del_col) continue;
          sub(rr, cc) = m(r, c);
          ++cc;
        }
        ++rr;
      }
      vals[i][j] = det(sub);
    }
  return interpolate2(zn, en, vals);
}

}  // namespace detail

/// Minimal polynomial of the pencil: det M divided by the gcd of all
/// (n-1)x(n-1) minors (the largest invariant factor). Exact backend only.
template <typename T>
BiPoly<T> minimal_polynomial(const Pencil<T>& p) {
  if constexpr (!scalar_traits<T>::is_exact) {
    throw BackendUnsupportedError("minimal_polynomial: exact backend only");
  } else {
    BiPoly<T> d = spectral_det(p);
    const std::size_t n = p.n();
    if (n <= 1) return d;
    BiPoly<T> g;  // gcd of minors, zero = "nothing yet"
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        g = bipoly_gcd(g, detail::pencil_minor(p, r, c));
        if (!g.is_zero() && g.degree_zeta() == 0 && g.degree_eta() == 0)
          return d;  // gcd is a unit
      }
    }
    if (g.is_zero())
      throw Error("minimal_polynomial: all (n-1)-minors vanish identically");
    return exact_div(d, g);
  }
}

template <typename T>
BiPoly<T> minimal_polynomial(const Quadruple<T>& q) {
  return minimal_polynomial(q.embed());
}

/// The spectral-curve bundle: literal determinant, squarefree part, and (on
/// the exact backend) the minimal polynomial of the support scheme.
template <typename T>
struct SpectralCurve {
  BiPoly<T> det_poly;
  std::optional<BiPoly<T>> squarefree;
  std::optional<BiPoly<T>> minimal;
};

template <typename T>
SpectralCurve<T> spectral_curve(const Pencil<T>& p) {
  SpectralCurve<T> out;
  out.det_poly = spectral_det(p);
  if constexpr (scalar_traits<T>::is_exact) {
    out.squarefree = squarefree_part(out.det_poly);
    out.minimal = minimal_polynomial(p);
  }
  return out;
}

}  // namespace spectral
