#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/multiprecision/gmp.hpp>
#include <limits>
#include <optional>
#include <vector>

#include "spectral/charpoly.hpp"
#include "spectral/linalg.hpp"
#include "spectral/unipoly.hpp"

namespace spectral {

namespace detail {

inline bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

inline bool complex_less(const GaussianRational& a, const GaussianRational& b) {
  if (a.re() != b.re()) return a.re() < b.re();
  return a.im() < b.im();
}

using Integer = boost::multiprecision::mpz_int;
using BigFloat = boost::multiprecision::number<boost::multiprecision::gmp_float<300>>;

inline Integer denominator_of(const GaussianRational& a) {
  return boost::multiprecision::lcm(boost::multiprecision::denominator(a.re()),
                                    boost::multiprecision::denominator(a.im()));
}

// Exact square root of a nonnegative rational, when it is rational.
inline std::optional<Rational> sqrt_rational(const Rational& x) {
  if (x < 0) return std::nullopt;
  Integer num = boost::multiprecision::numerator(x);
  Integer den = boost::multiprecision::denominator(x);
  Integer sn = boost::multiprecision::sqrt(num);
  Integer sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

// Exact square root inside Q(i), when it exists.
inline std::optional<GaussianRational> sqrt_gaussian(const GaussianRational& z) {
  if (z.im() == 0) {
    if (z.re() >= 0) {
      if (auto s = sqrt_rational(z.re())) return GaussianRational(*s);
      return std::nullopt;
    }
    if (auto s = sqrt_rational(-z.re())) return GaussianRational(Rational(0), *s);
    return std::nullopt;
  }
  auto norm = sqrt_rational(z.norm2());
  if (!norm) return std::nullopt;
  auto u = sqrt_rational((z.re() + *norm) / 2);
  if (!u || *u == 0) return std::nullopt;
  return GaussianRational(*u, z.im() / (2 * *u));
}

struct CBig {
  BigFloat re, im;
  CBig operator+(const CBig& o) const { return {re + o.re, im + o.im}; }
  CBig operator-(const CBig& o) const { return {re - o.re, im - o.im}; }
  CBig operator*(const CBig& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  CBig operator/(const CBig& o) const {
    BigFloat n = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
  }
  BigFloat abs2() const { return re * re + im * im; }
};

inline BigFloat to_bigfloat(const Rational& r) {
  return BigFloat(boost::multiprecision::numerator(r)) /
         BigFloat(boost::multiprecision::denominator(r));
}

inline Integer round_bigfloat(const BigFloat& x) {
  return boost::multiprecision::floor(x + BigFloat(0.5)).convert_to<Integer>();
}

// All Gaussian-rational roots of a squarefree monic polynomial over Q(i), or
// nullopt if some root lies outside Q(i). Degrees 1 and 2 are solved exactly
// (linear root; quadratic formula with an exact Q(i) square root). Higher
// degrees: the root denominators divide the coefficient-denominator lcm D, so
// candidates are Newton-refined in high precision, scaled by D, rounded to
// Gaussian integers, verified exactly and deflated exactly.
inline std::optional<std::vector<GaussianRational>> gaussian_roots_squarefree(
    const UniPoly<GaussianRational>& s_in) {
  std::vector<GaussianRational> found;
  UniPoly<GaussianRational> s = s_in.monic();
  while (s.degree() >= 3) {
    Integer d(1);
    for (const auto& c : s.coeffs()) d = boost::multiprecision::lcm(d, denominator_of(c));
    BigFloat dbig(d);
    std::vector<CBig> coeffs, dcoeffs;
    for (const auto& c : s.coeffs()) coeffs.push_back({to_bigfloat(c.re()), to_bigfloat(c.im())});
    {
      UniPoly<GaussianRational> sd = s.derivative();
      for (const auto& c : sd.coeffs()) dcoeffs.push_back({to_bigfloat(c.re()), to_bigfloat(c.im())});
    }
    auto horner = [](const std::vector<CBig>& cs, const CBig& x) {
      CBig acc{BigFloat(0), BigFloat(0)};
      for (std::size_t i = cs.size(); i-- > 0;) acc = acc * x + cs[i];
      return acc;
    };
    // double-precision seeds from the companion matrix of s (values of the
    // coefficients are moderate even when their denominators are huge)
    std::vector<Complex> seeds;
    {
      std::vector<Complex> cf;
      for (const auto& c : s.coeffs()) cf.push_back(c.to_complex());
      seeds = companion_roots(UniPoly<Complex>::from_coeffs(cf));
    }
    bool progressed = false;
    for (const Complex& seed : seeds) {
      CBig z{BigFloat(seed.real()), BigFloat(seed.imag())};
      bool diverged = false;
      for (int it = 0; it < 200; ++it) {
        CBig fv = horner(coeffs, z);
        if (fv.abs2() == 0) break;
        CBig dv = horner(dcoeffs, z);
        if (dv.abs2() == 0) {
          diverged = true;
          break;
        }
        CBig step = fv / dv;
        z = z - step;
        if (step.abs2() < BigFloat("1e-500")) break;
      }
      if (diverged) continue;
      Integer gre = round_bigfloat(z.re * dbig);
      Integer gim = round_bigfloat(z.im * dbig);
      for (long dr = 0; dr <= 2 && !progressed; ++dr)
        for (long di = 0; di <= 2 && !progressed; ++di) {
          Integer cre = gre + (dr == 0 ? 0 : (dr == 1 ? 1 : -1));
          Integer cim = gim + (di == 0 ? 0 : (di == 1 ? 1 : -1));
          GaussianRational cand(Rational(cre, d), Rational(cim, d));
          if (s.eval(cand).is_zero()) {
            found.push_back(cand);
            s = exact_div(s, UniPoly<GaussianRational>::from_coeffs(
                                 {-cand, GaussianRational(1)}));
            progressed = true;
          }
        }
      if (progressed) break;
    }
    if (!progressed) return std::nullopt;
  }
  if (s.degree() == 2) {
    GaussianRational b = s.coeff(1), c = s.coeff(0);
    auto disc = sqrt_gaussian(b * b - GaussianRational(4) * c);
    if (!disc) return std::nullopt;
    GaussianRational half(Rational(1, 2));
    found.push_back((-b + *disc) * half);
    found.push_back((-b - *disc) * half);
  } else if (s.degree() == 1) {
    found.push_back(-s.coeff(0));
  }
  return found;
}

struct ComplexCluster {
  Complex rep;
  std::vector<std::size_t> members;  // indices into the original value list
};

// Greedy clustering of complex values within an absolute tolerance scaled by
// the largest magnitude; clusters come out sorted ascending by (Re, Im).
inline std::vector<ComplexCluster> cluster_complex(const std::vector<Complex>& vals,
                                                   double eig_tol) {
  std::vector<std::size_t> order(vals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return complex_less(vals[a], vals[b]);
  });
  double scale = 1.0;
  for (const auto& v : vals) scale = std::max(scale, std::abs(v));
  std::vector<ComplexCluster> out;
  for (std::size_t idx : order) {
    const Complex& v = vals[idx];
    if (!out.empty() && std::abs(v - out.back().rep) <= eig_tol * scale) {
      auto& cl = out.back();
      double cnt = static_cast<double>(cl.members.size());
      cl.rep = (cl.rep * cnt + v) / (cnt + 1.0);
      cl.members.push_back(idx);
    } else {
      out.push_back({v, {idx}});
    }
  }
  return out;
}

}  // namespace detail

/// Eigenvalues with algebraic multiplicities, sorted ascending by (Re, Im).
/// Float backend: QR iteration, then clustering within eig_tol. Exact backend:
/// requires the characteristic polynomial to split over the Gaussian
/// rationals; throws NonSplittingError otherwise.
template <typename T>
std::vector<std::pair<T, int>> eigen(const Matrix<T>& m, const ToleranceConfig& tol = {}) {
  if (!m.is_square()) throw Error("eigen: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  if constexpr (scalar_traits<T>::is_exact) {
    UniPoly<T> p = charpoly(m);
    UniPoly<T> s = exact_div(p, gcd(p, p.derivative()));
    auto roots = detail::gaussian_roots_squarefree(s);
    if (!roots)
      throw NonSplittingError(
          "eigen: characteristic polynomial does not split over the Gaussian rationals");
    std::sort(roots->begin(), roots->end(),
              [](const T& a, const T& b) { return detail::complex_less(a, b); });
    std::vector<std::pair<T, int>> out;
    UniPoly<T> rem = p;
    int total = 0;
    for (const T& r : *roots) {
      int mult = 0;
      UniPoly<T> lin = UniPoly<T>::from_coeffs({-r, scalar_traits<T>::one()});
      for (;;) {
        auto [q, rr] = divmod(rem, lin);
        if (!rr.is_zero()) break;
        rem = q;
        ++mult;
      }
      out.emplace_back(r, mult);
      total += mult;
    }
    if (total != static_cast<int>(n))
      throw NonSplittingError("eigen: characteristic polynomial does not split");
    return out;
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), false);
    std::vector<Complex> vals(es.eigenvalues().data(), es.eigenvalues().data() + n);
    auto clusters = detail::cluster_complex(vals, tol.eig_tol);
    std::vector<std::pair<Complex, int>> out;
    for (const auto& cl : clusters) out.emplace_back(cl.rep, static_cast<int>(cl.members.size()));
    return out;
  }
}

/// Eigendecomposition M = V diag V^{-1} with eigenvalues in ascending (Re, Im)
/// order and V's columns grouped accordingly. Requires a diagonalizable input.
template <typename T>
struct Diagonalization {
  std::vector<T> eigenvalues;       // one per block, ascending
  std::vector<int> multiplicities;  // block sizes
  Matrix<T> v;
  Matrix<T> v_inv;

  std::size_t block_offset(std::size_t i) const {
    std::size_t off = 0;
    for (std::size_t j = 0; j < i; ++j) off += static_cast<std::size_t>(multiplicities[j]);
    return off;
  }
};

template <typename T>
Diagonalization<T> diagonalize(const Matrix<T>& m, const ToleranceConfig& tol = {}) {
  const std::size_t n = m.rows();
  Diagonalization<T> out;
  Matrix<T> v(n, n);
  // eigenspaces via kernels of the shifted matrix: exact on the exact backend
  // and a well-conditioned orthonormal basis (SVD) on the float backend, which
  // stays reliable for repeated eigenvalues
  auto eigs = eigen(m, tol);
  double scale = m.frobenius_approx();
  std::size_t col = 0;
  for (const auto& [lam, mult] : eigs) {
    Matrix<T> shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lam;
    // the eigenvalue shift can cancel m entirely (scalar blocks), so rank
    // decisions are measured against the scale of m itself
    Matrix<T> ker = kernel(shifted, tol, std::max(scale, 1.0));
    if (static_cast<int>(ker.cols()) != mult)
      throw NotDiagonalizableError("diagonalize: geometric multiplicity deficit");
    v.set_block(0, col, ker);
    col += ker.cols();
    out.eigenvalues.push_back(lam);
    out.multiplicities.push_back(mult);
  }
  try {
    out.v_inv = inverse(v, tol);
  } catch (const SingularMatrixError&) {
    throw NotDiagonalizableError("diagonalize: eigenvector matrix is singular");
  }
  out.v = std::move(v);
  return out;
}

}  // namespace spectral
