#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spectral/conjclass.hpp"
#include "spectral/pencil.hpp"

namespace spectral {

/// Gradient of a function on quadruples, under the pairing convention
/// df(delta) = tr(dx dX) + tr(dy dY) + tr(df dF) + tr(dg dG); hence dx is
/// k x k, dy is l x l, df is l x k and dg is k x l.
template <typename T>
struct QGrad {
  Matrix<T> dx, dy, df, dg;

  static QGrad zeros(std::size_t k, std::size_t l) {
    return {Matrix<T>(k, k), Matrix<T>(l, l), Matrix<T>(l, k), Matrix<T>(k, l)};
  }
  QGrad& operator+=(const QGrad& o) {
    dx += o.dx;
    dy += o.dy;
    df += o.df;
    dg += o.dg;
    return *this;
  }
  QGrad& operator*=(const T& s) {
    dx *= s;
    dy *= s;
    df *= s;
    dg *= s;
    return *this;
  }
};

/// A smooth function on the quadruple phase space together with its exact
/// gradient in the pairing convention above.
template <typename T>
struct HamiltonianFn {
  std::string name;
  std::function<T(const Quadruple<T>&)> value;
  std::function<QGrad<T>(const Quadruple<T>&)> gradient;
};

/// Poisson bracket: Lie-Poisson on each of the X and Y factors plus the
/// canonical structure on (F, G), normalized so {F_ab, G_cd} = delta_ad delta_bc.
template <typename T>
T bracket(const HamiltonianFn<T>& f, const HamiltonianFn<T>& g, const Quadruple<T>& at) {
  QGrad<T> df = f.gradient(at), dg = g.gradient(at);
  T lie_x = (at.x * commutator(df.dx, dg.dx)).trace();
  T lie_y = (at.y * commutator(df.dy, dg.dy)).trace();
  T canonical = (df.df * dg.dg - dg.df * df.dg).trace();
  return lie_x + lie_y + canonical;
}

/// Only the canonical (F, G) part of the bracket: the symplectic-leaf bracket
/// with X and Y frozen.
template <typename T>
T bracket_fg(const HamiltonianFn<T>& f, const HamiltonianFn<T>& g, const Quadruple<T>& at) {
  QGrad<T> df = f.gradient(at), dg = g.gradient(at);
  return (df.df * dg.dg - dg.df * df.dg).trace();
}

// ---------------------------------------------------------------------------
// Spectral Hamiltonians.

/// det M and the full adjugate of M as bivariate polynomials, both obtained
/// from one Faddeev-LeVerrier run per grid point. The adjugate entries are
/// (n-1)-minors, so the spectral grid bounds their bidegree.
template <typename T>
struct SpectralData {
  std::size_t k = 0, l = 0;
  BiPoly<T> det;
  std::vector<std::vector<BiPoly<T>>> adj;  // n x n

  /// Gradient of the coefficient H_ab = [zeta^a eta^b] det M. The adjugate
  /// blocks are exactly the partial derivatives: d(det M) = tr(adj M dM).
  QGrad<T> coefficient_gradient(int a, int b) const {
    const std::size_t n = k + l;
    QGrad<T> out = QGrad<T>::zeros(k, l);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        T c = adj[i][j].coeff(a, b);
        if (scalar_traits<T>::is_zero(c)) continue;
        if (i < k && j < k)
          out.dx(i, j) += c;
        else if (i >= k && j >= k)
          out.dy(i - k, j - k) += c;
        else if (i >= k && j < k)
          out.df(i - k, j) += c;
        else
          out.dg(i, j - k) += c;
      }
    return out;
  }
};

template <typename T>
SpectralData<T> spectral_data(const Quadruple<T>& q) {
  q.validate();
  SpectralData<T> out;
  out.k = q.k;
  out.l = q.l;
  const std::size_t n = q.k + q.l;
  std::vector<T> zn, en;
  for (std::size_t i = 0; i <= q.k; ++i) zn.push_back(scalar_traits<T>::from_int(static_cast<long>(i)));
  for (std::size_t j = 0; j <= q.l; ++j) en.push_back(scalar_traits<T>::from_int(static_cast<long>(j)));
  std::vector<std::vector<T>> dvals(zn.size(), std::vector<T>(en.size()));
  std::vector<std::vector<std::vector<std::vector<T>>>> avals(
      n, std::vector<std::vector<std::vector<T>>>(
             n, std::vector<std::vector<T>>(zn.size(), std::vector<T>(en.size()))));
  for (std::size_t zi = 0; zi < zn.size(); ++zi)
    for (std::size_t ej = 0; ej < en.size(); ++ej) {
      auto [p, adj] = charpoly_adjugate(q.eval(zn[zi], en[ej]));
      T dv = p.coeff(0);
      if (n % 2) dv = -dv;  // det = (-1)^n p(0)
      dvals[zi][ej] = dv;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) avals[i][j][zi][ej] = adj(i, j);
    }
  out.det = interpolate2(zn, en, dvals);
  if (out.det.is_zero()) throw ZeroDeterminantError("spectral_data: det M vanishes identically");
  out.adj.assign(n, std::vector<BiPoly<T>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.adj[i][j] = interpolate2(zn, en, avals[i][j]);
  return out;
}

/// H_ab(q) = coefficient of zeta^a eta^b in det M(zeta, eta), with exact
/// gradient from the adjugate. Requires 0 <= a <= k and 0 <= b <= l.
template <typename T>
HamiltonianFn<T> spectral_hamiltonian(int a, int b) {
  HamiltonianFn<T> h;
  h.name = "H_" + std::to_string(a) + "_" + std::to_string(b);
  h.value = [a, b](const Quadruple<T>& q) -> T {
    if (a < 0 || b < 0 || a > static_cast<int>(q.k) || b > static_cast<int>(q.l))
      throw Error("spectral_hamiltonian: index out of range");
    return spectral_det(q).coeff(a, b);
  };
  h.gradient = [a, b](const Quadruple<T>& q) -> QGrad<T> {
    if (a < 0 || b < 0 || a > static_cast<int>(q.k) || b > static_cast<int>(q.l))
      throw Error("spectral_hamiltonian: index out of range");
    return spectral_data(q).coefficient_gradient(a, b);
  };
  return h;
}

// ---------------------------------------------------------------------------
// Trace-word Hamiltonians (test fodder for the Poisson axioms).

namespace detail {

template <typename T>
const Matrix<T>& letter_of(const Quadruple<T>& q, char c) {
  switch (c) {
    case 'X': return q.x;
    case 'Y': return q.y;
    case 'F': return q.f;
    case 'G': return q.g;
    default: throw Error("trace_word: letters must be X, Y, F or G");
  }
}

}  // namespace detail

/// coeff * tr(W) for a word W over {X, Y, F, G} whose product is square.
/// Gradients are the cyclic derivatives of the trace.
template <typename T>
HamiltonianFn<T> trace_word(const std::string& word, T coeff = scalar_traits<T>::one()) {
  if (word.empty()) throw Error("trace_word: empty word");
  HamiltonianFn<T> h;
  h.name = "tr(" + word + ")";
  h.value = [word, coeff](const Quadruple<T>& q) -> T {
    Matrix<T> prod = detail::letter_of(q, word[0]);
    for (std::size_t i = 1; i < word.size(); ++i) prod = prod * detail::letter_of(q, word[i]);
    if (!prod.is_square()) throw Error("trace_word: word product is not square");
    return prod.trace() * coeff;
  };
  h.gradient = [word, coeff](const Quadruple<T>& q) -> QGrad<T> {
    QGrad<T> out = QGrad<T>::zeros(q.k, q.l);
    const std::size_t m = word.size();
    for (std::size_t i = 0; i < m; ++i) {
      // rest = W_{i+1} ... W_{m-1} W_0 ... W_{i-1}; d tr(W) = tr(rest dW_i)
      const Matrix<T>& li = detail::letter_of(q, word[i]);
      Matrix<T> rest = Matrix<T>::identity(li.cols());
      for (std::size_t s = 1; s < m; ++s)
        rest = rest * detail::letter_of(q, word[(i + s) % m]);
      rest *= coeff;
      switch (word[i]) {
        case 'X': out.dx += rest; break;
        case 'Y': out.dy += rest; break;
        case 'F': out.df += rest; break;
        case 'G': out.dg += rest; break;
      }
    }
    return out;
  };
  return h;
}

/// The coordinate function F_ab (resp. G_ab) as a Hamiltonian.
template <typename T>
HamiltonianFn<T> coordinate_f(std::size_t a, std::size_t b) {
  HamiltonianFn<T> h;
  h.name = "F_" + std::to_string(a) + std::to_string(b);
  h.value = [a, b](const Quadruple<T>& q) { return q.f(a, b); };
  h.gradient = [a, b](const Quadruple<T>& q) {
    QGrad<T> out = QGrad<T>::zeros(q.k, q.l);
    out.df(b, a) = scalar_traits<T>::one();
    return out;
  };
  return h;
}

template <typename T>
HamiltonianFn<T> coordinate_g(std::size_t a, std::size_t b) {
  HamiltonianFn<T> h;
  h.name = "G_" + std::to_string(a) + std::to_string(b);
  h.value = [a, b](const Quadruple<T>& q) { return q.g(a, b); };
  h.gradient = [a, b](const Quadruple<T>& q) {
    QGrad<T> out = QGrad<T>::zeros(q.k, q.l);
    out.dg(b, a) = scalar_traits<T>::one();
    return out;
  };
  return h;
}

/// Formal linear combination of trace words. The Poisson bracket of two trace
/// polynomials is again one (cyclic-derivative calculus), so Jacobi-type
/// identities can be checked without differentiating numerically.
template <typename T>
struct TracePolynomial {
  std::vector<std::pair<T, std::string>> terms;

  static TracePolynomial word(const std::string& w, T c = scalar_traits<T>::one()) {
    TracePolynomial p;
    p.terms.emplace_back(std::move(c), w);
    return p;
  }

  T eval(const Quadruple<T>& q) const {
    T acc = scalar_traits<T>::zero();
    for (const auto& [c, w] : terms) {
      Matrix<T> prod = detail::letter_of(q, w[0]);
      for (std::size_t i = 1; i < w.size(); ++i) prod = prod * detail::letter_of(q, w[i]);
      acc += prod.trace() * c;
    }
    return acc;
  }

  HamiltonianFn<T> to_hamiltonian() const {
    if (terms.empty()) {
      HamiltonianFn<T> h;
      h.name = "0";
      h.value = [](const Quadruple<T>&) { return scalar_traits<T>::zero(); };
      h.gradient = [](const Quadruple<T>& q) { return QGrad<T>::zeros(q.k, q.l); };
      return h;
    }
    HamiltonianFn<T> h = trace_word<T>(terms[0].second, terms[0].first);
    for (std::size_t i = 1; i < terms.size(); ++i)
      h = hsum(h, trace_word<T>(terms[i].second, terms[i].first));
    return h;
  }
};

/// Symbolic Poisson bracket of trace polynomials. For each pair of letter
/// occurrences the cyclic remainders concatenate into new trace words:
/// the (F, G) pairs give the canonical part and the (X, X), (Y, Y) pairs the
/// Lie-Poisson parts with an X (resp. Y) prepended.
template <typename T>
TracePolynomial<T> trace_poly_bracket(const TracePolynomial<T>& a, const TracePolynomial<T>& b) {
  auto rest = [](const std::string& w, std::size_t i) {
    return w.substr(i + 1) + w.substr(0, i);
  };
  TracePolynomial<T> out;
  for (const auto& [ca, wa] : a.terms)
    for (const auto& [cb, wb] : b.terms) {
      T c = ca * cb;
      for (std::size_t i = 0; i < wa.size(); ++i)
        for (std::size_t j = 0; j < wb.size(); ++j) {
          char la = wa[i], lb = wb[j];
          if (la == 'F' && lb == 'G')
            out.terms.emplace_back(c, rest(wa, i) + rest(wb, j));
          else if (la == 'G' && lb == 'F')
            out.terms.emplace_back(-c, rest(wb, j) + rest(wa, i));
          else if (la == 'X' && lb == 'X') {
            out.terms.emplace_back(c, "X" + rest(wa, i) + rest(wb, j));
            out.terms.emplace_back(-c, "X" + rest(wb, j) + rest(wa, i));
          } else if (la == 'Y' && lb == 'Y') {
            out.terms.emplace_back(c, "Y" + rest(wa, i) + rest(wb, j));
            out.terms.emplace_back(-c, "Y" + rest(wb, j) + rest(wa, i));
          }
        }
    }
  return out;
}

template <typename T>
HamiltonianFn<T> hsum(const HamiltonianFn<T>& f, const HamiltonianFn<T>& g) {
  HamiltonianFn<T> h;
  h.name = f.name + "+" + g.name;
  h.value = [f, g](const Quadruple<T>& q) { return f.value(q) + g.value(q); };
  h.gradient = [f, g](const Quadruple<T>& q) {
    QGrad<T> a = f.gradient(q);
    a += g.gradient(q);
    return a;
  };
  return h;
}

template <typename T>
HamiltonianFn<T> hscale(const HamiltonianFn<T>& f, T s) {
  HamiltonianFn<T> h;
  h.name = "c*" + f.name;
  h.value = [f, s](const Quadruple<T>& q) { return f.value(q) * s; };
  h.gradient = [f, s](const Quadruple<T>& q) {
    QGrad<T> a = f.gradient(q);
    a *= s;
    return a;
  };
  return h;
}

template <typename T>
HamiltonianFn<T> hprod(const HamiltonianFn<T>& f, const HamiltonianFn<T>& g) {
  HamiltonianFn<T> h;
  h.name = f.name + "*" + g.name;
  h.value = [f, g](const Quadruple<T>& q) { return f.value(q) * g.value(q); };
  h.gradient = [f, g](const Quadruple<T>& q) {
    QGrad<T> a = f.gradient(q);
    QGrad<T> b = g.gradient(q);
    a *= g.value(q);
    b *= f.value(q);
    a += b;
    return a;
  };
  return h;
}

// ---------------------------------------------------------------------------
// Hamiltonian flow.

enum class FlowMode { full, leaf };

struct Trajectory {
  std::vector<double> times;
  std::vector<Quadruple<Complex>> states;
  std::vector<std::string> monitor_names;
  std::vector<std::vector<Complex>> monitor_values;  // one row per recorded time

  /// Largest relative drift of monitor m over the run.
  double max_rel_drift(std::size_t m) const {
    double out = 0;
    Complex base = monitor_values.front()[m];
    double scale = std::max(1.0, std::abs(base));
    for (const auto& row : monitor_values)
      out = std::max(out, std::abs(row[m] - base) / scale);
    return out;
  }
  double max_rel_drift_over(const std::string& prefix) const {
    double out = 0;
    for (std::size_t m = 0; m < monitor_names.size(); ++m)
      if (monitor_names[m].rfind(prefix, 0) == 0) out = std::max(out, max_rel_drift(m));
    return out;
  }
};

namespace detail {

inline QGrad<Complex> flow_vector(const Quadruple<Complex>& q, const HamiltonianFn<Complex>& h,
                                  FlowMode mode) {
  QGrad<Complex> g = h.gradient(q);
  QGrad<Complex> v = QGrad<Complex>::zeros(q.k, q.l);
  if (mode == FlowMode::full) {
    v.dx = commutator(g.dx, q.x);  // dX/dt = [dH/dX, X]
    v.dy = commutator(g.dy, q.y);
  }
  // dF/dt = dH/dG (k x l), dG/dt = -dH/dF (l x k); stored in the matching slots
  v.dg = g.dg;  // holds dF/dt, shape k x l
  v.df = -g.df; // holds dG/dt, shape l x k
  return v;
}

inline Quadruple<Complex> flow_step_add(const Quadruple<Complex>& q, const QGrad<Complex>& v,
                                        double s, FlowMode mode) {
  Quadruple<Complex> out = q;
  Complex cs(s, 0);
  if (mode == FlowMode::full) {
    out.x += v.dx * cs;
    out.y += v.dy * cs;
  }
  out.f += v.dg * cs;
  out.g += v.df * cs;
  return out;
}

}  // namespace detail

/// Fixed-step RK4 integration of the Hamiltonian flow of H. In leaf mode X and
/// Y are frozen and only the canonical (F, G) part moves. The trajectory
/// carries conservation monitors: H itself, every spectral coefficient H_ab,
/// and the Casimirs tr X^m, tr Y^m for m <= max(k, l). Throws
/// StepRejectedError when H drifts more than flow_drift_tol in one step.
inline Trajectory flow(const Quadruple<Complex>& q0, const HamiltonianFn<Complex>& h, double dt,
                       double t_final, FlowMode mode, const ToleranceConfig& tol = {}) {
  if (dt <= 0 || t_final < 0) throw Error("flow: dt must be positive and horizon nonnegative");
  Trajectory traj;
  const std::size_t k = q0.k, l = q0.l;
  const std::size_t mmax = std::max(k, l);
  traj.monitor_names.push_back("H");
  for (std::size_t a = 0; a <= k; ++a)
    for (std::size_t b = 0; b <= l; ++b)
      traj.monitor_names.push_back("H_" + std::to_string(a) + "_" + std::to_string(b));
  for (std::size_t m = 1; m <= mmax; ++m) traj.monitor_names.push_back("trX^" + std::to_string(m));
  for (std::size_t m = 1; m <= mmax; ++m) traj.monitor_names.push_back("trY^" + std::to_string(m));

  auto record = [&](double t, const Quadruple<Complex>& q) {
    std::vector<Complex> row;
    row.push_back(h.value(q));
    BiPoly<Complex> d = spectral_det(q);
    for (std::size_t a = 0; a <= k; ++a)
      for (std::size_t b = 0; b <= l; ++b) row.push_back(d.coeff(static_cast<int>(a), static_cast<int>(b)));
    Matrix<Complex> pw = q.x;
    for (std::size_t m = 1; m <= mmax; ++m) {
      row.push_back(pw.trace());
      if (m < mmax) pw = pw * q.x;
    }
    pw = q.y;
    for (std::size_t m = 1; m <= mmax; ++m) {
      row.push_back(pw.trace());
      if (m < mmax) pw = pw * q.y;
    }
    traj.times.push_back(t);
    traj.states.push_back(q);
    traj.monitor_values.push_back(std::move(row));
  };

  Quadruple<Complex> q = q0;
  record(0.0, q);
  double h0_scale = std::max(1.0, std::abs(traj.monitor_values[0][0]));
  long steps = static_cast<long>(std::llround(t_final / dt));
  for (long s = 0; s < steps; ++s) {
    Complex h_before = h.value(q);
    auto k1 = detail::flow_vector(q, h, mode);
    auto k2 = detail::flow_vector(detail::flow_step_add(q, k1, dt / 2, mode), h, mode);
    auto k3 = detail::flow_vector(detail::flow_step_add(q, k2, dt / 2, mode), h, mode);
    auto k4 = detail::flow_vector(detail::flow_step_add(q, k3, dt, mode), h, mode);
    Quadruple<Complex> next = detail::flow_step_add(q, k1, dt / 6, mode);
    next = detail::flow_step_add(next, k2, dt / 3, mode);
    next = detail::flow_step_add(next, k3, dt / 3, mode);
    next = detail::flow_step_add(next, k4, dt / 6, mode);
    q = next;
    if (std::abs(h.value(q) - h_before) > tol.flow_drift_tol * h0_scale)
      throw StepRejectedError("flow: H drifted more than flow_drift_tol in one step; reduce dt");
    record(static_cast<double>(s + 1) * dt, q);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Moment maps and symplectic-leaf membership.

/// Blocks (F_1 G_1, ..., F_r G_r) after conjugating so X is block-scalar
/// diagonal with eigenvalues ascending. Block i has size k_i x k_i.
template <typename T>
std::vector<Matrix<T>> moment_map_X(const Quadruple<T>& q, const ToleranceConfig& tol = {}) {
  auto d = diagonalize(q.x, tol);
  Matrix<T> fp = d.v_inv * q.f;  // act by (V^{-1}, 1)
  Matrix<T> gp = q.g * d.v;
  std::vector<Matrix<T>> out;
  for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
    std::size_t off = d.block_offset(i), m = static_cast<std::size_t>(d.multiplicities[i]);
    Matrix<T> fi = fp.block(off, 0, m, q.l);
    Matrix<T> gi = gp.block(0, off, q.l, m);
    out.push_back(fi * gi);
  }
  return out;
}

/// Blocks (G^1 F^1, ..., G^s F^s) after conjugating so Y is block-scalar
/// diagonal with eigenvalues ascending. Block j has size l_j x l_j.
template <typename T>
std::vector<Matrix<T>> moment_map_Y(const Quadruple<T>& q, const ToleranceConfig& tol = {}) {
  auto d = diagonalize(q.y, tol);
  Matrix<T> fp = q.f * d.v;      // act by (1, V^{-1})
  Matrix<T> gp = d.v_inv * q.g;
  std::vector<Matrix<T>> out;
  for (std::size_t j = 0; j < d.eigenvalues.size(); ++j) {
    std::size_t off = d.block_offset(j), m = static_cast<std::size_t>(d.multiplicities[j]);
    Matrix<T> gj = gp.block(off, 0, m, q.k);
    Matrix<T> fj = fp.block(0, off, q.k, m);
    out.push_back(gj * fj);
  }
  return out;
}

/// A symplectic-leaf specification: fixed X and Y plus the target conjugacy
/// invariants of the moment-map blocks.
template <typename T>
struct LeafSpec {
  Matrix<T> x, y;
  std::vector<ConjClassInvariant<T>> pis;   // classes of F_i G_i
  std::vector<ConjClassInvariant<T>> rhos;  // classes of G^j F^j

  static LeafSpec from(const Quadruple<T>& q, const ToleranceConfig& tol = {}) {
    LeafSpec s;
    s.x = q.x;
    s.y = q.y;
    for (const auto& b : moment_map_X(q, tol)) s.pis.push_back(conj_class(b, tol));
    for (const auto& b : moment_map_Y(q, tol)) s.rhos.push_back(conj_class(b, tol));
    return s;
  }
};

/// True iff q lies on the leaf: X, Y conjugate to the spec's (else
/// IncompatibleXYError) and every moment-map block in the stated class.
template <typename T>
bool leaf_membership(const Quadruple<T>& q, const LeafSpec<T>& spec,
                     const ToleranceConfig& tol = {}) {
  if (!conjugate(q.x, spec.x, tol) || !conjugate(q.y, spec.y, tol))
    throw IncompatibleXYError("leaf_membership: X or Y not conjugate to the leaf's");
  auto bx = moment_map_X(q, tol);
  if (bx.size() != spec.pis.size()) return false;
  for (std::size_t i = 0; i < bx.size(); ++i)
    if (!same_class(conj_class(bx[i], tol), spec.pis[i], tol)) return false;
  auto by = moment_map_Y(q, tol);
  if (by.size() != spec.rhos.size()) return false;
  for (std::size_t j = 0; j < by.size(); ++j)
    if (!same_class(conj_class(by[j], tol), spec.rhos[j], tol)) return false;
  return true;
}

}  // namespace spectral
