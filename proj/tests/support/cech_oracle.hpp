#pragma once

// Brute-force Cech cohomology of line bundles on P1 x P1, independent of the
// closed-form basis ranges in spectral/cohomology.hpp. Each P1 factor carries
// the two-chart cover {zeta != inf} (chart 0) and {zeta != 0} (chart 1); the
// surface complex is the total complex of the tensor product of the two
// factor complexes. Everything decomposes by Laurent bidegree (a, b), so
// coboundary matrices are built per bidegree on truncated Laurent monomials
// and ranks are summed over a window.

#include <array>
#include <optional>
#include <vector>

#include "spectral/cohomology.hpp"
#include "spectral/linalg.hpp"

namespace cech_oracle {

using spectral::BiPoly;
using spectral::Complex;
using spectral::GaussianRational;
using spectral::Matrix;
using spectral::Twist;

using GQ = GaussianRational;

// Chart membership of the monomial zeta^a as a section of O(d) on one P1:
// chart 0 contains the point 0 (needs a >= 0), chart 1 contains inf
// (needs a <= d), the chart overlap imposes nothing.
inline bool on_chart(int d, int a, int chart) { return chart == 0 ? a >= 0 : a <= d; }

// Per-bidegree total complex for the twist (p, q):
//   D0 = C0z x C0e, D1 = (C1z x C0e) + (C0z x C1e), D2 = C1z x C1e,
// with slots dropped when the monomial is not a section on that chart.
struct BidegreeComplex {
  std::array<bool, 2> zc{}, ec{};             // chart presence per factor
  std::vector<std::pair<int, int>> d0_slots;  // (zeta chart, eta chart)
  std::vector<std::pair<int, int>> d1_slots;  // (part, chart): part 0 = C1z x C0e
  Matrix<GQ> delta0, delta1;                  // d1 x d0 and 1 x d1

  std::size_t d0() const { return d0_slots.size(); }
  std::size_t d1() const { return d1_slots.size(); }
};

inline BidegreeComplex build_complex(Twist t, int a, int b) {
  BidegreeComplex c;
  c.zc = {on_chart(t.p, a, 0), on_chart(t.p, a, 1)};
  c.ec = {on_chart(t.q, b, 0), on_chart(t.q, b, 1)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (c.zc[static_cast<std::size_t>(i)] && c.ec[static_cast<std::size_t>(j)])
        c.d0_slots.emplace_back(i, j);
  for (int j = 0; j < 2; ++j)
    if (c.ec[static_cast<std::size_t>(j)]) c.d1_slots.emplace_back(0, j);
  for (int i = 0; i < 2; ++i)
    if (c.zc[static_cast<std::size_t>(i)]) c.d1_slots.emplace_back(1, i);

  auto d0_index = [&](int i, int j) -> std::optional<std::size_t> {
    for (std::size_t s = 0; s < c.d0_slots.size(); ++s)
      if (c.d0_slots[s] == std::make_pair(i, j)) return s;
    return std::nullopt;
  };
  c.delta0 = Matrix<GQ>(c.d1(), c.d0());
  for (std::size_t r = 0; r < c.d1(); ++r) {
    auto [part, idx] = c.d1_slots[r];
    if (part == 0) {
      // (delta_z u) x v on the eta chart idx: u(chart 1) - u(chart 0)
      if (auto s = d0_index(1, idx)) c.delta0(r, *s) += GQ(1);
      if (auto s = d0_index(0, idx)) c.delta0(r, *s) -= GQ(1);
    } else {
      // u x (delta_e v) on the zeta chart idx
      if (auto s = d0_index(idx, 1)) c.delta0(r, *s) += GQ(1);
      if (auto s = d0_index(idx, 0)) c.delta0(r, *s) -= GQ(1);
    }
  }
  // total-complex differential: D(u x v) = du x v + (-1)^{|u|} u x dv
  c.delta1 = Matrix<GQ>(1, c.d1());
  for (std::size_t s = 0; s < c.d1(); ++s) {
    auto [part, idx] = c.d1_slots[s];
    GQ sign = (part == 0)
                  ? GQ(idx == 1 ? -1 : 1)   // -(u1 x delta_e v): +A(0) - A(1)
                  : GQ(idx == 1 ? 1 : -1);  // (delta_z u) x v1: -B(0) + B(1)
    c.delta1(0, s) = sign;
  }
  return c;
}

inline std::array<long, 3> dims_at(Twist t, int a, int b) {
  BidegreeComplex c = build_complex(t, a, b);
  long r0 = static_cast<long>(rank(c.delta0));
  long r1 = static_cast<long>(rank(c.delta1));
  long d0 = static_cast<long>(c.d0()), d1 = static_cast<long>(c.d1());
  return {d0 - r0, (d1 - r1) - r0, 1 - r1};
}

// Window wide enough for all twists with |p|, |q| <= bound and multiplication
// entries of bidegree <= bound.
inline int window(int bound) { return 2 * bound + 4; }

inline std::array<long, 3> line_bundle_dims(Twist t, int w = 12) {
  std::array<long, 3> out{0, 0, 0};
  for (int a = -w; a <= w; ++a)
    for (int b = -w; b <= w; ++b) {
      auto d = dims_at(t, a, b);
      out[0] += d[0];
      out[1] += d[1];
      out[2] += d[2];
    }
  return out;
}

// Canonical cocycle of the (a, b) basis class in the given degree, as slot
// coordinates. Degree 0: the constant pattern; degree 1: the monomial on the
// zeta-overlap (resp. eta-overlap) tensor the constant pattern; degree 2: the
// monomial on the double overlap.
inline Matrix<GQ> canonical_cocycle(const BidegreeComplex& c, int degree, bool zeta_type) {
  if (degree == 0) {
    Matrix<GQ> v(c.d0(), 1);
    for (std::size_t s = 0; s < c.d0(); ++s) v(s, 0) = GQ(1);
    return v;
  }
  if (degree == 1) {
    Matrix<GQ> v(c.d1(), 1);
    for (std::size_t s = 0; s < c.d1(); ++s) {
      auto [part, idx] = c.d1_slots[s];
      if (zeta_type && part == 0) v(s, 0) = GQ(1);
      if (!zeta_type && part == 1) v(s, 0) = GQ(1);
    }
    return v;
  }
  Matrix<GQ> v(1, 1);
  v(0, 0) = GQ(1);
  return v;
}

// Transports a cocycle between complexes with possibly different slot
// presence: source slots must all be present in the destination.
inline Matrix<GQ> transport(const Matrix<GQ>& v, const BidegreeComplex& from,
                            const BidegreeComplex& to, int degree) {
  auto move = [&](const auto& from_slots, const auto& to_slots) {
    Matrix<GQ> out(to_slots.size(), 1);
    for (std::size_t s = 0; s < from_slots.size(); ++s) {
      if (v(s, 0).is_zero()) continue;
      bool placed = false;
      for (std::size_t r = 0; r < to_slots.size(); ++r)
        if (to_slots[r] == from_slots[s]) {
          out(r, 0) = v(s, 0);
          placed = true;
        }
      if (!placed) throw spectral::Error("cech_oracle: illegal transport");
    }
    return out;
  };
  if (degree == 0) return move(from.d0_slots, to.d0_slots);
  if (degree == 1) return move(from.d1_slots, to.d1_slots);
  return v;
}

// Solves [generator | coboundary image] x = z exactly. Returns the generator
// coefficient, or nullopt if z is not in the span (which would mean the
// chain-map bookkeeping is broken).
inline std::optional<GQ> class_coefficient(const Matrix<GQ>& generator,
                                           const Matrix<GQ>& coboundary, const Matrix<GQ>& z) {
  std::size_t rows = z.rows();
  std::size_t cols = 1 + coboundary.cols();
  Matrix<GQ> aug(rows, cols + 1);
  aug.set_block(0, 0, generator);
  aug.set_block(0, 1, coboundary);
  aug.set_block(0, cols, z);
  Matrix<GQ> work = aug;
  auto pivots = rref(work);
  // inconsistent iff a pivot lands in the rhs column
  for (std::size_t p : pivots)
    if (p == cols) return std::nullopt;
  // read the generator coefficient from the rref solution (generator column
  // is either a pivot column or free; free means coefficient 0 works)
  for (std::size_t r = 0; r < pivots.size(); ++r)
    if (pivots[r] == 0) return work(r, cols);
  return GQ(0);
}

struct OracleSpace {
  std::vector<std::pair<int, int>> basis;  // (a, b), discovered by window scan
  std::optional<std::size_t> index_of(int a, int b) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i] == std::make_pair(a, b)) return i;
    return std::nullopt;
  }
};

inline OracleSpace oracle_space(Twist t, int degree, int w = 12) {
  OracleSpace s;
  for (int a = -w; a <= w; ++a)
    for (int b = -w; b <= w; ++b) {
      auto d = dims_at(t, a, b);
      long dim = d[static_cast<std::size_t>(degree)];
      if (dim < 0 || dim > 1) throw spectral::Error("cech_oracle: bidegree dim not 0/1");
      if (dim == 1) s.basis.emplace_back(a, b);
    }
  return s;
}

struct OracleMap {
  Matrix<GQ> mat;
  OracleSpace src, dst;
};

// Induced multiplication map H^degree(O(src)) -> H^degree(O(dst)) computed on
// actual Cech cocycles: multiply the canonical representative, then decompose
// in the destination complex against the generator and the coboundary image.
inline OracleMap oracle_induced_map(const BiPoly<GQ>& entry, Twist src, Twist dst, int degree,
                                    int w = 12) {
  OracleMap out;
  out.src = oracle_space(src, degree, w);
  out.dst = oracle_space(dst, degree, w);
  out.mat = Matrix<GQ>(out.dst.basis.size(), out.src.basis.size());
  for (std::size_t col = 0; col < out.src.basis.size(); ++col) {
    auto [a, b] = out.src.basis[col];
    BidegreeComplex sc = build_complex(src, a, b);
    bool zeta_type = (degree == 1) && (a < 0);
    Matrix<GQ> v = canonical_cocycle(sc, degree, zeta_type);
    for (int c = 0; c <= entry.degree_zeta(); ++c)
      for (int d = 0; d <= entry.degree_eta(); ++d) {
        GQ coeff = entry.coeff(c, d);
        if (coeff.is_zero()) continue;
        int aa = a + c, bb = b + d;
        BidegreeComplex tc = build_complex(dst, aa, bb);
        Matrix<GQ> z = transport(v, sc, tc, degree) * coeff;
        auto dims = dims_at(dst, aa, bb);
        Matrix<GQ> cob = (degree == 0) ? Matrix<GQ>(tc.d0(), 0)
                         : (degree == 1) ? tc.delta0
                                         : tc.delta1;
        if (dims[static_cast<std::size_t>(degree)] == 1) {
          bool dst_zeta_type = (degree == 1) && (aa < 0);
          Matrix<GQ> gen = canonical_cocycle(tc, degree, dst_zeta_type);
          auto alpha = class_coefficient(gen, cob, z);
          if (!alpha) throw spectral::Error("cech_oracle: image not in class span");
          if (auto row = out.dst.index_of(aa, bb))
            out.mat(*row, col) += *alpha;
          else
            throw spectral::Error("cech_oracle: basis bookkeeping mismatch");
        } else {
          // class space is zero there: the image must be a coboundary
          auto alpha = class_coefficient(Matrix<GQ>(z.rows(), 1), cob, z);
          if (!alpha) throw spectral::Error("cech_oracle: nonzero class where H = 0");
        }
      }
  }
  return out;
}

}  // namespace cech_oracle
