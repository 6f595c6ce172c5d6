#pragma once

#include <algorithm>
#include <vector>

#include "spectral/conjclass.hpp"
#include "spectral/pencil.hpp"

namespace spectral {

/// R(zeta) = Y + sum_i R_i / (zeta - zeta_i): an l x l matrix-valued rational
/// map with poles at the zeta_i. Finite avatar of a negative-loop-algebra
/// element.
template <typename T>
struct RationalMap {
  Matrix<T> y;                      // l x l
  std::vector<T> poles;             // pairwise distinct, ascending (Re, Im)
  std::vector<Matrix<T>> residues;  // l x l each

  std::size_t l() const { return y.rows(); }

  void validate() const {
    if (poles.size() != residues.size()) throw Error("RationalMap: pole/residue mismatch");
    for (const auto& r : residues)
      if (r.rows() != y.rows() || r.cols() != y.cols())
        throw Error("RationalMap: residue shape mismatch");
    for (std::size_t i = 0; i < poles.size(); ++i)
      for (std::size_t j = i + 1; j < poles.size(); ++j)
        if (poles[i] == poles[j]) throw Error("RationalMap: poles must be distinct");
  }

  Matrix<T> eval(const T& z) const {
    Matrix<T> out = y;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      T d = z - poles[i];
      if (scalar_traits<T>::is_zero(d)) throw Error("RationalMap: evaluation at a pole");
      out += residues[i] * (scalar_traits<T>::one() / d);
    }
    return out;
  }
};

namespace detail {

// Deterministic off-pole sample points for round-trip verification. Pole
// avoidance is approximate so float poles carrying roundoff noise still get
// skipped.
template <typename T>
std::vector<T> sample_points(const std::vector<T>& poles, std::size_t count) {
  std::vector<T> out;
  const T offset = scalar_traits<T>::from_int(3) / scalar_traits<T>::from_int(8);
  long v = 2;
  while (out.size() < count) {
    T cand = scalar_traits<T>::from_int(v) + offset;
    bool hits = false;
    for (const T& p : poles)
      if (scalar_traits<T>::abs_approx(p - cand) <=
          1e-6 * std::max(1.0, scalar_traits<T>::abs_approx(cand)))
        hits = true;
    if (!hits) out.push_back(cand);
    ++v;
  }
  return out;
}

}  // namespace detail

/// R(zeta) = Y + G (zeta - X)^{-1} F for diagonalizable X: poles at the
/// eigenvalues of X, residues R_i = G_i F_i. The construction is verified
/// against direct evaluation at 10 off-pole sample points (exact equality /
/// 1e-10 relative).
template <typename T>
RationalMap<T> to_rational_map(const Quadruple<T>& q, const ToleranceConfig& tol = {}) {
  auto d = diagonalize(q.x, tol);
  Matrix<T> fp = d.v_inv * q.f;
  Matrix<T> gp = q.g * d.v;
  RationalMap<T> out;
  out.y = q.y;
  for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
    std::size_t off = d.block_offset(i), m = static_cast<std::size_t>(d.multiplicities[i]);
    out.poles.push_back(d.eigenvalues[i]);
    out.residues.push_back(gp.block(0, off, q.l, m) * fp.block(off, 0, m, q.l));
  }
  for (const T& z : detail::sample_points(out.poles, 10)) {
    Matrix<T> zi = Matrix<T>::identity(q.k) * z - q.x;
    Matrix<T> direct = q.y + q.g * inverse(zi, tol) * q.f;
    Matrix<T> viares = out.eval(z);
    Matrix<T> diff = direct - viares;
    if constexpr (scalar_traits<T>::is_exact) {
      if (!diff.is_zero()) throw Error("to_rational_map: residue expansion mismatch");
    } else {
      double scale = std::max(1.0, direct.frobenius_approx());
      if (diff.frobenius_approx() > 1e-10 * scale)
        throw Error("to_rational_map: residue expansion mismatch beyond 1e-10");
    }
  }
  return out;
}

/// Inverse construction: X = blockdiag(zeta_i I_{k_i}) with k_i = rank R_i,
/// and R_i = G_i F_i by a rank-revealing factorization with ordered pivots.
/// An empty pole list yields the degenerate k = 0 quadruple.
template <typename T>
Quadruple<T> from_rational_map(const RationalMap<T>& r, const ToleranceConfig& tol = {}) {
  r.validate();
  std::vector<std::size_t> order(r.poles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detail::complex_less(r.poles[a], r.poles[b]);
  });
  const std::size_t l = r.l();
  std::vector<Matrix<T>> fs, gs;
  std::vector<T> lams;
  std::vector<std::size_t> ks;
  std::size_t k = 0;
  for (std::size_t oi : order) {
    auto [c, e] = cr_factorization(r.residues[oi], tol);  // residue = c * e
    lams.push_back(r.poles[oi]);
    ks.push_back(c.cols());
    gs.push_back(c);
    fs.push_back(e);
    k += c.cols();
  }
  Quadruple<T> q;
  q.k = k;
  q.l = l;
  q.x = Matrix<T>(k, k);
  q.f = Matrix<T>(k, l);
  q.g = Matrix<T>(l, k);
  std::size_t off = 0;
  for (std::size_t i = 0; i < lams.size(); ++i) {
    for (std::size_t d = 0; d < ks[i]; ++d) q.x(off + d, off + d) = lams[i];
    q.f.set_block(off, 0, fs[i]);
    q.g.set_block(0, off, gs[i]);
    off += ks[i];
  }
  q.y = r.y;
  return q;
}

/// The semi-reduced orbit data: class of Y, pole list, and classes of the
/// residues, with the ranks k_i = rank Q_i recorded.
template <typename T>
struct OrbitSpec {
  ConjClassInvariant<T> q0;  // class of Y
  std::vector<T> poles;      // ascending
  std::vector<ConjClassInvariant<T>> classes;
  std::vector<std::size_t> ranks;  // k_i = rank Q_i

  std::size_t total_rank() const {
    std::size_t s = 0;
    for (std::size_t r : ranks) s += r;
    return s;
  }
};

template <typename T>
OrbitSpec<T> orbit_invariants(const RationalMap<T>& r, const ToleranceConfig& tol = {}) {
  r.validate();
  OrbitSpec<T> out;
  out.q0 = conj_class(r.y, tol);
  std::vector<std::size_t> order(r.poles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detail::complex_less(r.poles[a], r.poles[b]);
  });
  for (std::size_t oi : order) {
    out.poles.push_back(r.poles[oi]);
    out.classes.push_back(conj_class(r.residues[oi], tol));
    out.ranks.push_back(rank(r.residues[oi], tol));
  }
  return out;
}

/// Definitional membership: two rational maps lie on the same semi-reduced
/// orbit iff their OrbitSpecs agree.
template <typename T>
bool same_orbit(const OrbitSpec<T>& a, const OrbitSpec<T>& b, const ToleranceConfig& tol = {}) {
  if (a.poles.size() != b.poles.size()) return false;
  if (!same_class(a.q0, b.q0, tol)) return false;
  double scale = 1.0;
  if constexpr (!scalar_traits<T>::is_exact)
    for (const auto& p : a.poles) scale = std::max(scale, std::abs(p));
  for (std::size_t i = 0; i < a.poles.size(); ++i) {
    if (!detail::scalars_close(a.poles[i], b.poles[i], tol.eig_tol * scale)) return false;
    if (a.ranks[i] != b.ranks[i]) return false;
    if (!same_class(a.classes[i], b.classes[i], tol)) return false;
  }
  return true;
}

enum class BoundaryDirection { eta_infinity, zeta_infinity };

/// First-order data of the sheaf along the divisor at infinity: intersection
/// points with multiplicities, the conjugacy classes of the moment-map blocks,
/// and the slopes (their eigenvalues) of the curve branches.
template <typename T>
struct BoundaryData {
  BoundaryDirection direction = BoundaryDirection::eta_infinity;
  std::vector<std::pair<T, int>> points;            // (pole, multiplicity)
  std::vector<ConjClassInvariant<T>> first_order;   // classes of F_i G_i (resp. G^j F^j)
  std::vector<std::vector<T>> slopes;               // eigenvalues with multiplicity per block
};

template <typename T>
BoundaryData<T> boundary_data(const Quadruple<T>& q, BoundaryDirection dir,
                              const ToleranceConfig& tol = {}) {
  BoundaryData<T> out;
  out.direction = dir;
  const bool eta_inf = (dir == BoundaryDirection::eta_infinity);
  auto d = diagonalize(eta_inf ? q.x : q.y, tol);
  Matrix<T> fp, gp;
  if (eta_inf) {
    fp = d.v_inv * q.f;  // rows blocked by X eigenvalues
    gp = q.g * d.v;
  } else {
    fp = q.f * d.v;  // columns blocked by Y eigenvalues
    gp = d.v_inv * q.g;
  }
  for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
    std::size_t off = d.block_offset(i), m = static_cast<std::size_t>(d.multiplicities[i]);
    Matrix<T> small, big;
    if (eta_inf) {
      Matrix<T> fi = fp.block(off, 0, m, q.l);
      Matrix<T> gi = gp.block(0, off, q.l, m);
      small = fi * gi;  // k_i x k_i
      big = gi * fi;    // l x l
    } else {
      Matrix<T> gj = gp.block(off, 0, m, q.k);
      Matrix<T> fj = fp.block(0, off, q.k, m);
      small = gj * fj;  // l_j x l_j
      big = fj * gj;    // k x k
    }
    // charpoly(small) * lambda^(big - small) = charpoly(big), the standard AB/BA identity
    UniPoly<T> ps = charpoly(small), pb = charpoly(big);
    std::size_t gap = big.rows() - small.rows();
    double scale = 1.0;
    if constexpr (!scalar_traits<T>::is_exact)
      for (const auto& c : pb.coeffs()) scale = std::max(scale, std::abs(c));
    for (int j = 0; j <= pb.degree(); ++j) {
      T expect = (j < static_cast<int>(gap)) ? scalar_traits<T>::zero()
                                             : ps.coeff(static_cast<std::size_t>(j) - gap);
      if (!detail::scalars_close(pb.coeff(static_cast<std::size_t>(j)), expect,
                                 tol.eig_tol * scale))
        throw Error("boundary_data: AB/BA characteristic polynomial identity failed");
    }
    out.points.emplace_back(d.eigenvalues[i], static_cast<int>(m));
    out.first_order.push_back(conj_class(small, tol));
    std::vector<T> sl;
    for (const auto& [lam, mult] : eigen(small, tol))
      for (int c = 0; c < mult; ++c) sl.push_back(lam);
    out.slopes.push_back(std::move(sl));
  }
  return out;
}

/// The K-action is free and proper at q iff rank F_i = rank G_i = k_i for all
/// eigenvalue blocks of X.
template <typename T>
bool free_properness_check(const Quadruple<T>& q, const ToleranceConfig& tol = {}) {
  auto d = diagonalize(q.x, tol);
  Matrix<T> fp = d.v_inv * q.f;
  Matrix<T> gp = q.g * d.v;
  for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
    std::size_t off = d.block_offset(i), m = static_cast<std::size_t>(d.multiplicities[i]);
    if (rank(fp.block(off, 0, m, q.l), tol) != m) return false;
    if (rank(gp.block(0, off, q.l, m), tol) != m) return false;
  }
  return true;
}

}  // namespace spectral
