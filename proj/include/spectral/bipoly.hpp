#pragma once

#include <utility>
#include <vector>

#include "spectral/unipoly.hpp"

namespace spectral {

/// Bivariate polynomial in (zeta, eta), stored as a dense coefficient table.
/// The zero polynomial has bidegree (-1, -1) and an empty table.
template <typename T>
class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(T constant) {
    if (!scalar_traits<T>::is_zero(constant)) {
      dz_ = de_ = 0;
      c_ = {std::move(constant)};
    }
  }

  static BiPoly from_table(int dz, int de, std::vector<T> table) {
    BiPoly p;
    p.dz_ = dz;
    p.de_ = de;
    p.c_ = std::move(table);
    if (p.c_.size() != static_cast<std::size_t>((dz + 1) * (de + 1)))
      throw Error("BiPoly: table size mismatch");
    p.trim();
    return p;
  }

  /// Builds from coefficients along the main variable: zc[a] is the eta-poly
  /// multiplying zeta^a.
  static BiPoly from_zeta_coeffs(const std::vector<UniPoly<T>>& zc) {
    int dz = static_cast<int>(zc.size()) - 1;
    int de = -1;
    for (const auto& p : zc) de = std::max(de, p.degree());
    if (dz < 0 || de < 0) return BiPoly();
    std::vector<T> table(static_cast<std::size_t>((dz + 1) * (de + 1)),
                         scalar_traits<T>::zero());
    for (int a = 0; a <= dz; ++a)
      for (int b = 0; b <= zc[static_cast<std::size_t>(a)].degree(); ++b)
        table[static_cast<std::size_t>(a * (de + 1) + b)] =
            zc[static_cast<std::size_t>(a)].coeff(static_cast<std::size_t>(b));
    return from_table(dz, de, std::move(table));
  }

  std::vector<UniPoly<T>> to_zeta_coeffs() const {
    std::vector<UniPoly<T>> out;
    for (int a = 0; a <= dz_; ++a) {
      std::vector<T> row;
      for (int b = 0; b <= de_; ++b) row.push_back(coeff(a, b));
      out.push_back(UniPoly<T>::from_coeffs(std::move(row)));
    }
    return out;
  }

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return dz_ <= 0 && de_ <= 0; }
  int degree_zeta() const { return dz_; }
  int degree_eta() const { return de_; }

  T coeff(int a, int b) const {
    if (a < 0 || b < 0 || a > dz_ || b > de_) return scalar_traits<T>::zero();
    return c_[static_cast<std::size_t>(a * (de_ + 1) + b)];
  }

  T eval(const T& z, const T& e) const {
    // Horner in zeta over Horner in eta.
    T acc = scalar_traits<T>::zero();
    for (int a = dz_; a >= 0; --a) {
      T row = scalar_traits<T>::zero();
      for (int b = de_; b >= 0; --b) row = row * e + coeff(a, b);
      acc = acc * z + row;
    }
    return acc;
  }

  /// Substitutes zeta = z0, returning a polynomial in eta.
  UniPoly<T> eval_zeta(const T& z0) const {
    std::vector<T> out(static_cast<std::size_t>(de_ + 1), scalar_traits<T>::zero());
    T pw = scalar_traits<T>::one();
    for (int a = 0; a <= dz_; ++a) {
      for (int b = 0; b <= de_; ++b) out[static_cast<std::size_t>(b)] += coeff(a, b) * pw;
      pw *= z0;
    }
    return UniPoly<T>::from_coeffs(std::move(out));
  }

  UniPoly<T> eval_eta(const T& e0) const {
    std::vector<T> out(static_cast<std::size_t>(dz_ + 1), scalar_traits<T>::zero());
    T pw = scalar_traits<T>::one();
    for (int b = 0; b <= de_; ++b) {
      for (int a = 0; a <= dz_; ++a) out[static_cast<std::size_t>(a)] += coeff(a, b) * pw;
      pw *= e0;
    }
    return UniPoly<T>::from_coeffs(std::move(out));
  }

  BiPoly derivative_zeta() const {
    if (dz_ < 1) return BiPoly();
    std::vector<T> table(static_cast<std::size_t>(dz_ * (de_ + 1)), scalar_traits<T>::zero());
    for (int a = 1; a <= dz_; ++a)
      for (int b = 0; b <= de_; ++b)
        table[static_cast<std::size_t>((a - 1) * (de_ + 1) + b)] =
            coeff(a, b) * scalar_traits<T>::from_int(a);
    return from_table(dz_ - 1, de_, std::move(table));
  }

  BiPoly derivative_eta() const {
    if (de_ < 1) return BiPoly();
    std::vector<T> table(static_cast<std::size_t>((dz_ + 1) * de_), scalar_traits<T>::zero());
    for (int a = 0; a <= dz_; ++a)
      for (int b = 1; b <= de_; ++b)
        table[static_cast<std::size_t>(a * de_ + (b - 1))] =
            coeff(a, b) * scalar_traits<T>::from_int(b);
    return from_table(dz_, de_ - 1, std::move(table));
  }

  BiPoly operator-() const {
    BiPoly out = *this;
    for (auto& v : out.c_) v = -v;
    return out;
  }

  friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    int dz = std::max(a.dz_, b.dz_), de = std::max(a.de_, b.de_);
    if (dz < 0) return BiPoly();
    std::vector<T> table(static_cast<std::size_t>((dz + 1) * (de + 1)),
                         scalar_traits<T>::zero());
    for (int x = 0; x <= dz; ++x)
      for (int y = 0; y <= de; ++y)
        table[static_cast<std::size_t>(x * (de + 1) + y)] = a.coeff(x, y) + b.coeff(x, y);
    return from_table(dz, de, std::move(table));
  }
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero() || b.is_zero()) return BiPoly();
    int dz = a.dz_ + b.dz_, de = a.de_ + b.de_;
    std::vector<T> table(static_cast<std::size_t>((dz + 1) * (de + 1)),
                         scalar_traits<T>::zero());
    for (int x = 0; x <= a.dz_; ++x)
      for (int y = 0; y <= a.de_; ++y) {
        T av = a.coeff(x, y);
        if (scalar_traits<T>::is_zero(av)) continue;
        for (int u = 0; u <= b.dz_; ++u)
          for (int v = 0; v <= b.de_; ++v)
            table[static_cast<std::size_t>((x + u) * (de + 1) + (y + v))] += av * b.coeff(u, v);
      }
    return from_table(dz, de, std::move(table));
  }
  friend BiPoly operator*(const BiPoly& a, const T& s) {
    BiPoly out = a;
    for (auto& v : out.c_) v *= s;
    out.trim();
    return out;
  }
  friend bool operator==(const BiPoly& a, const BiPoly& b) {
    return a.dz_ == b.dz_ && a.de_ == b.de_ && a.c_ == b.c_;
  }
  friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

  /// Leading coefficient in the lexicographic (zeta, eta) order.
  T lex_leading() const {
    if (is_zero()) throw Error("BiPoly: lex_leading of zero polynomial");
    for (int b = de_; b >= 0; --b)
      if (!scalar_traits<T>::is_zero(coeff(dz_, b))) return coeff(dz_, b);
    throw Error("BiPoly: untrimmed table");
  }

  /// Scales so the lex-leading coefficient becomes 1.
  BiPoly lex_normalized() const {
    if (is_zero()) return *this;
    return *this * (scalar_traits<T>::one() / lex_leading());
  }

  /// A monomial zeta^a eta^b with the given coefficient.
  static BiPoly monomial(int a, int b, T coeff) {
    if (scalar_traits<T>::is_zero(coeff)) return BiPoly();
    std::vector<T> table(static_cast<std::size_t>((a + 1) * (b + 1)),
                         scalar_traits<T>::zero());
    table.back() = std::move(coeff);
    return from_table(a, b, std::move(table));
  }

 private:
  void trim() {
    auto row_zero = [&](int a) {
      for (int b = 0; b <= de_; ++b)
        if (!scalar_traits<T>::is_zero(c_[static_cast<std::size_t>(a * (de_ + 1) + b)]))
          return false;
      return true;
    };
    while (dz_ >= 0 && row_zero(dz_)) {
      c_.resize(static_cast<std::size_t>(dz_ * (de_ + 1)));
      --dz_;
    }
    if (dz_ < 0) {
      de_ = -1;
      c_.clear();
      return;
    }
    auto col_zero = [&](int b) {
      for (int a = 0; a <= dz_; ++a)
        if (!scalar_traits<T>::is_zero(c_[static_cast<std::size_t>(a * (de_ + 1) + b)]))
          return false;
      return true;
    };
    int new_de = de_;
    while (new_de >= 0 && col_zero(new_de)) --new_de;
    if (new_de != de_) {
      std::vector<T> table(static_cast<std::size_t>((dz_ + 1) * (new_de + 1)));
      for (int a = 0; a <= dz_; ++a)
        for (int b = 0; b <= new_de; ++b)
          table[static_cast<std::size_t>(a * (new_de + 1) + b)] =
              c_[static_cast<std::size_t>(a * (de_ + 1) + b)];
      c_ = std::move(table);
      de_ = new_de;
    }
  }

  int dz_ = -1, de_ = -1;
  std::vector<T> c_;
};

/// Tensor-grid interpolation: values[i][j] = p(zeta_nodes[i], eta_nodes[j])
/// determines p when its bidegree is bounded by the grid.
template <typename T>
BiPoly<T> interpolate2(const std::vector<T>& zeta_nodes, const std::vector<T>& eta_nodes,
                       const std::vector<std::vector<T>>& values) {
  std::vector<UniPoly<T>> rows;  // eta-polynomials per zeta node
  for (std::size_t i = 0; i < zeta_nodes.size(); ++i)
    rows.push_back(interpolate(eta_nodes, values[i]));
  int de = -1;
  for (const auto& r : rows) de = std::max(de, r.degree());
  std::vector<UniPoly<T>> zc;  // index = zeta degree
  for (int b = 0; b <= de; ++b) {
    std::vector<T> col;
    for (std::size_t i = 0; i < zeta_nodes.size(); ++i)
      col.push_back(rows[i].coeff(static_cast<std::size_t>(b)));
    UniPoly<T> pz = interpolate(zeta_nodes, col);
    if (pz.degree() + 1 > static_cast<int>(zc.size()))
      zc.resize(static_cast<std::size_t>(pz.degree() + 1));
    for (int a = 0; a <= pz.degree(); ++a) {
      auto cur = zc[static_cast<std::size_t>(a)];
      zc[static_cast<std::size_t>(a)] =
          cur + UniPoly<T>::from_coeffs([&] {
            std::vector<T> mono(static_cast<std::size_t>(b) + 1, scalar_traits<T>::zero());
            mono.back() = pz.coeff(static_cast<std::size_t>(a));
            return mono;
          }());
    }
  }
  return BiPoly<T>::from_zeta_coeffs(zc);
}

namespace detail {

template <typename T>
UniPoly<T> content_of(const std::vector<UniPoly<T>>& zc) {
  UniPoly<T> g;
  for (const auto& p : zc) g = gcd(g, p);
  return g;
}

template <typename T>
std::vector<UniPoly<T>> primitive_part(const std::vector<UniPoly<T>>& zc,
                                       const UniPoly<T>& content) {
  std::vector<UniPoly<T>> out;
  for (const auto& p : zc) out.push_back(p.is_zero() ? p : exact_div(p, content));
  return out;
}

template <typename T>
int zdeg(const std::vector<UniPoly<T>>& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (!a[static_cast<std::size_t>(i)].is_zero()) return i;
  return -1;
}

// Pseudo-division in the main variable over the ring of eta-polynomials:
// lb^(steps_needed) * a = q * b + r. Returns (q, r, e) with e the exponent
// actually applied, padded so e = deg a - deg b + 1.
template <typename T>
struct PseudoDiv {
  std::vector<UniPoly<T>> q, r;
  int e;
};

template <typename T>
PseudoDiv<T> pseudo_divmod(std::vector<UniPoly<T>> a, const std::vector<UniPoly<T>>& b) {
  int db = zdeg(b);
  if (db < 0) throw Error("pseudo_divmod: division by zero");
  int da = zdeg(a);
  const UniPoly<T>& lb = b[static_cast<std::size_t>(db)];
  int target = std::max(0, da - db + 1);
  std::vector<UniPoly<T>> q(static_cast<std::size_t>(std::max(0, da - db) + 1));
  int steps = 0;
  while (zdeg(a) >= db && zdeg(a) >= 0) {
    int dr = zdeg(a);
    UniPoly<T> lead = a[static_cast<std::size_t>(dr)];
    int shift = dr - db;
    // q = lb*q + lead * zeta^shift;  a = lb*a - lead * zeta^shift * b
    for (auto& qi : q) qi = qi * lb;
    q[static_cast<std::size_t>(shift)] = q[static_cast<std::size_t>(shift)] + lead;
    for (auto& ai : a) ai = ai * lb;
    for (int i = 0; i <= db; ++i)
      a[static_cast<std::size_t>(shift + i)] =
          a[static_cast<std::size_t>(shift + i)] - lead * b[static_cast<std::size_t>(i)];
    ++steps;
  }
  // Pad so the implied exponent is exactly target.
  UniPoly<T> pad(scalar_traits<T>::one());
  for (int i = steps; i < target; ++i) pad = pad * lb;
  if (!(pad == UniPoly<T>(scalar_traits<T>::one()))) {
    for (auto& qi : q) qi = qi * pad;
    for (auto& ai : a) ai = ai * pad;
  }
  return {std::move(q), std::move(a), target};
}

}  // namespace detail

/// Exact quotient of bivariate polynomials; throws when not divisible.
template <typename T>
BiPoly<T> exact_div(const BiPoly<T>& p, const BiPoly<T>& q) {
  if (q.is_zero()) throw Error("BiPoly: division by zero");
  if (p.is_zero()) return p;
  auto a = p.to_zeta_coeffs();
  auto b = q.to_zeta_coeffs();
  int db = detail::zdeg(b);
  if (db == 0) {
    // Divisor has no zeta part: divide each coefficient by the eta-polynomial.
    std::vector<UniPoly<T>> out;
    for (const auto& ai : a) out.push_back(ai.is_zero() ? ai : exact_div(ai, b[0]));
    return BiPoly<T>::from_zeta_coeffs(out);
  }
  auto pd = detail::pseudo_divmod(a, b);
  for (const auto& ri : pd.r)
    if (!ri.is_zero()) throw Error("BiPoly: exact_div has nonzero remainder");
  UniPoly<T> lbe(scalar_traits<T>::one());
  const UniPoly<T>& lb = b[static_cast<std::size_t>(db)];
  for (int i = 0; i < pd.e; ++i) lbe = lbe * lb;
  std::vector<UniPoly<T>> out;
  for (const auto& qi : pd.q) out.push_back(qi.is_zero() ? qi : exact_div(qi, lbe));
  return BiPoly<T>::from_zeta_coeffs(out);
}

/// Gcd of exact bivariate polynomials via a pseudo-remainder sequence in the
/// main variable zeta with primitive-part extraction at each step; the result
/// is normalized so its lex (zeta, eta) leading coefficient is 1. Throws
/// BackendUnsupportedError on the float backend.
template <typename T>
BiPoly<T> bipoly_gcd(const BiPoly<T>& p, const BiPoly<T>& q) {
  if constexpr (!scalar_traits<T>::is_exact) {
    throw BackendUnsupportedError("bipoly_gcd: exact backend only");
  } else {
    if (p.is_zero()) return q.lex_normalized();
    if (q.is_zero()) return p.lex_normalized();
    auto a = p.to_zeta_coeffs();
    auto b = q.to_zeta_coeffs();
    UniPoly<T> ca = detail::content_of(a), cb = detail::content_of(b);
    UniPoly<T> cg = gcd(ca, cb);
    a = detail::primitive_part(a, ca);
    b = detail::primitive_part(b, cb);
    if (detail::zdeg(a) < detail::zdeg(b)) std::swap(a, b);
    while (true) {
      auto pd = detail::pseudo_divmod(a, b);
      bool rzero = true;
      for (const auto& ri : pd.r)
        if (!ri.is_zero()) {
          rzero = false;
          break;
        }
      if (rzero) break;
      UniPoly<T> cr = detail::content_of(pd.r);
      a = std::move(b);
      b = detail::primitive_part(pd.r, cr);
      int db = detail::zdeg(b);
      b.resize(static_cast<std::size_t>(db + 1));
      if (db == 0) break;  // primitive zeta-constant: the zeta-part gcd is trivial
    }
    BiPoly<T> gcd_pp;
    if (detail::zdeg(b) == 0 && !b.empty() && b[0].is_constant())
      gcd_pp = BiPoly<T>(scalar_traits<T>::one());
    else
      gcd_pp = BiPoly<T>::from_zeta_coeffs(b);
    BiPoly<T> lifted = BiPoly<T>::from_zeta_coeffs({cg});
    return (gcd_pp * lifted).lex_normalized();
  }
}

namespace detail {

template <typename T>
UniPoly<T> squarefree_uni(const UniPoly<T>& p) {
  if (p.degree() < 1) return UniPoly<T>(scalar_traits<T>::one());
  return exact_div(p, gcd(p, p.derivative())).monic();
}

}  // namespace detail

/// Squarefree part (exact backend), lex-normalized.
template <typename T>
BiPoly<T> squarefree_part(const BiPoly<T>& p) {
  if constexpr (!scalar_traits<T>::is_exact) {
    throw BackendUnsupportedError("squarefree_part: exact backend only");
  } else {
    if (p.is_zero()) return p;
    auto zc = p.to_zeta_coeffs();
    UniPoly<T> c = detail::content_of(zc);
    auto pp = detail::primitive_part(zc, c);
    BiPoly<T> main_part = BiPoly<T>::from_zeta_coeffs(pp);
    BiPoly<T> sf_main(scalar_traits<T>::one());
    if (main_part.degree_zeta() >= 1)
      sf_main = exact_div(main_part, bipoly_gcd(main_part, main_part.derivative_zeta()));
    BiPoly<T> sf_cont = BiPoly<T>::from_zeta_coeffs({detail::squarefree_uni(c)});
    return (sf_main * sf_cont).lex_normalized();
  }
}

}  // namespace spectral
