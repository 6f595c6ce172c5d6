#pragma once

#include <vector>

#include "spectral/eigensolve.hpp"
#include "spectral/pencil.hpp"

namespace spectral {

namespace detail {

// Visits all size-k subsets of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i-- > 0) {
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

// gcd over zeta of all maximal minors of the linear column block
// S(zeta) = S0 + zeta * S1 (size n x w). Nonconstant gcd <=> the block drops
// rank at some zeta0. Exact backend.
template <typename T>
UniPoly<T> column_block_minor_gcd(const Matrix<T>& s0, const Matrix<T>& s1) {
  const std::size_t n = s0.rows(), w = s0.cols();
  std::vector<T> nodes;
  for (std::size_t i = 0; i <= w; ++i) nodes.push_back(scalar_traits<T>::from_int(static_cast<long>(i)));
  UniPoly<T> g;
  bool done = false;
  for_each_subset(n, w, [&](const std::vector<std::size_t>& rows) {
    if (done) return;
    std::vector<T> vals;
    for (const T& z : nodes) {
      Matrix<T> sub(w, w);
      for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) sub(i, j) = s0(rows[i], j) + z * s1(rows[i], j);
      vals.push_back(det(sub));
    }
    g = gcd(g, interpolate(nodes, vals));
    if (!g.is_zero() && g.degree() == 0) done = true;
  });
  return g;
}

}  // namespace detail

/// Result of the bipurity test. A vertical witness is a pair (zeta0, v) with
/// (X - zeta0)v = 0 and Gv = 0, killing M(zeta0, eta) for all eta; horizontal
/// witnesses are (eta0, w) with (Y - eta0)w = 0 and Fw = 0.
template <typename T>
struct BipurityReport {
  bool vertical_ok = true;
  bool horizontal_ok = true;
  std::vector<std::pair<T, Matrix<T>>> vertical_witnesses;
  std::vector<std::pair<T, Matrix<T>>> horizontal_witnesses;
};

namespace detail {

// One direction of the bipurity test on the column block [D - t I; C] with
// D square (w x w) stacked over C (r x w).
template <typename T>
void bipurity_direction(const Matrix<T>& d, const Matrix<T>& c, const ToleranceConfig& tol,
                        bool& ok, std::vector<std::pair<T, Matrix<T>>>& witnesses) {
  const std::size_t w = d.rows();
  auto stacked_kernel = [&](const T& t) {
    Matrix<T> sh = d;
    for (std::size_t i = 0; i < w; ++i) sh(i, i) -= t;
    return kernel(vstack(sh, c), tol);
  };
  if constexpr (scalar_traits<T>::is_exact) {
    Matrix<T> s0 = vstack(d, c);
    Matrix<T> s1(s0.rows(), w);
    for (std::size_t i = 0; i < w; ++i) s1(i, i) = -scalar_traits<T>::one();
    UniPoly<T> g = column_block_minor_gcd(s0, s1);
    ok = !g.is_zero() && g.degree() == 0;
    if (ok) return;
    if (!g.is_zero()) {
      UniPoly<T> s = exact_div(g, gcd(g, g.derivative()));
      if (auto roots = gaussian_roots_squarefree(s)) {
        for (const T& t : *roots) {
          Matrix<T> ker = stacked_kernel(t);
          if (ker.cols() > 0) witnesses.emplace_back(t, ker);
        }
      }
    } else {
      // identically rank-deficient block: any eigenvalue of D witnesses
      try {
        for (const auto& [lam, mult] : eigen(d, tol)) {
          Matrix<T> ker = stacked_kernel(lam);
          if (ker.cols() > 0) witnesses.emplace_back(lam, ker);
        }
      } catch (const NonSplittingError&) {
      }
    }
  } else {
    ok = true;
    for (const auto& [lam, mult] : eigen(d, tol)) {
      Matrix<T> ker = stacked_kernel(lam);
      if (ker.cols() > 0) {
        ok = false;
        witnesses.emplace_back(lam, ker);
      }
    }
  }
}

}  // namespace detail

/// Tests for subsheaves supported on vertical ({zeta0} x P1) or horizontal
/// (P1 x {eta0}) lines. A returned witness certifies non-bipurity; on the
/// exact backend the flags are computed from minor gcds even when the
/// witnesses themselves are not representable over Q(i).
template <typename T>
BipurityReport<T> bipurity_check(const Quadruple<T>& q, const ToleranceConfig& tol = {}) {
  q.validate();
  BipurityReport<T> out;
  detail::bipurity_direction(q.x, q.g, tol, out.vertical_ok, out.vertical_witnesses);
  detail::bipurity_direction(q.y, q.f, tol, out.horizontal_ok, out.horizontal_witnesses);
  return out;
}

enum class FibreDirection { vertical, horizontal };

/// Fibre of the section subbundle at one parameter value: the column span of
/// [X - zeta0; G] (sections vanishing on {zeta0} x P1) or of [F; Y - eta0],
/// inside the n-dimensional section space. The fibre has dimension k (resp.
/// l) for every parameter value iff the sheaf is bipure in that direction.
/// nullopt takes the chart at infinity, where the block is constant.
template <typename T>
struct SubbundleFibre {
  FibreDirection direction = FibreDirection::vertical;
  std::optional<T> point;  // nullopt = infinity
  Matrix<T> basis;         // n x dim column basis of the fibre
};

template <typename T>
SubbundleFibre<T> subbundle_fibre(const Quadruple<T>& q, FibreDirection dir,
                                  const std::optional<T>& point,
                                  const ToleranceConfig& tol = {}) {
  q.validate();
  Pencil<T> p = q.embed();
  SubbundleFibre<T> out;
  out.direction = dir;
  out.point = point;
  Matrix<T> block;
  if (dir == FibreDirection::vertical)
    block = point ? (p.a0 + p.a1 * (*point)) : p.a1;
  else
    block = point ? (p.b0 + p.b1 * (*point)) : p.b1;
  auto [c, e] = cr_factorization(block, tol);
  out.basis = c;
  return out;
}

/// Fibrewise subbundle verification: dim V_{zeta0} = k and dim W_{eta0} = l
/// at every sampled parameter value.
template <typename T>
bool geometric_resolution_check(const Quadruple<T>& q,
                                const std::vector<std::optional<T>>& zeta_samples,
                                const std::vector<std::optional<T>>& eta_samples,
                                const ToleranceConfig& tol = {}) {
  for (const auto& z : zeta_samples)
    if (subbundle_fibre(q, FibreDirection::vertical, z, tol).basis.cols() != q.k) return false;
  for (const auto& e : eta_samples)
    if (subbundle_fibre(q, FibreDirection::horizontal, e, tol).basis.cols() != q.l) return false;
  return true;
}

struct CurveSamples {
  std::vector<std::pair<Complex, Complex>> points;       // (zeta, eta) on the curve
  std::vector<std::pair<Complex, int>> degree_drops;     // zeta -> l - deg_eta det M(zeta, .)
};

/// For each zeta on the grid, the eta-roots of det M(zeta, .). Float backend.
inline CurveSamples sample_curve(const Pencil<Complex>& p, const std::vector<Complex>& zeta_grid,
                                 const ToleranceConfig& tol = {}) {
  p.validate();
  CurveSamples out;
  std::vector<Complex> en;
  for (std::size_t j = 0; j <= p.l; ++j) en.push_back(Complex(static_cast<double>(j), 0));
  for (const Complex& z : zeta_grid) {
    std::vector<Complex> vals;
    for (const Complex& e : en) vals.push_back(det(p.eval(z, e)));
    UniPoly<Complex> pe = interpolate(en, vals);
    // numeric degree: drop trailing coefficients below the relative threshold
    double maxc = 0;
    for (const auto& c : pe.coeffs()) maxc = std::max(maxc, std::abs(c));
    int deg = -1;
    for (int i = pe.degree(); i >= 0; --i)
      if (std::abs(pe.coeff(static_cast<std::size_t>(i))) > tol.rank_rel_tol * maxc) {
        deg = i;
        break;
      }
    std::vector<Complex> trimmed;
    for (int i = 0; i <= deg; ++i) trimmed.push_back(pe.coeff(static_cast<std::size_t>(i)));
    UniPoly<Complex> peff = UniPoly<Complex>::from_coeffs(trimmed);
    int drop = static_cast<int>(p.l) - std::max(deg, 0);
    if (drop > 0) out.degree_drops.emplace_back(z, drop);
    for (const Complex& root : companion_roots(peff)) out.points.emplace_back(z, root);
  }
  return out;
}

}  // namespace spectral
