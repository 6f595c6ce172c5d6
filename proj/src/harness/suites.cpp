#include "harness/suites.hpp"

#include <omp.h>

#include <cstdlib>
#include <functional>
#include <sstream>

#include "harness/generator.hpp"
#include "spectral/cohomology.hpp"
#include "spectral/json_io.hpp"
#include "spectral/loop_orbit.hpp"
#include "spectral/poisson.hpp"

namespace spectral::harness {

namespace {

using GQ = GaussianRational;

struct TrialResult {
  bool pass = true;
  std::string message;
  std::map<std::string, double> metrics;

  void fail(const std::string& m) {
    pass = false;
    if (!message.empty()) message += "; ";
    message += m;
  }
  void metric(const std::string& k, double v) {
    auto it = metrics.find(k);
    if (it == metrics.end())
      metrics[k] = v;
    else
      it->second = std::max(it->second, v);
  }
  void require(bool cond, const std::string& m) {
    if (!cond) fail(m);
  }
};

template <typename Fn>
SuiteReport run_trials(const std::string& name, const SuiteOptions& opts,
                       std::uint64_t default_trials, Fn&& body) {
  SuiteReport rep;
  rep.suite = name;
  rep.trials = opts.trials.value_or(default_trials);
  std::vector<TrialResult> results(rep.trials);
  int threads = opts.threads.value_or(max_threads());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < static_cast<long>(rep.trials); ++i) {
    std::uint64_t u = static_cast<std::uint64_t>(i);
    Rng rng(trial_seed(opts.seed, u));
    try {
      body(u, rng, results[u]);
    } catch (const std::exception& e) {
      results[u].fail(std::string("exception: ") + e.what());
    }
  }
  for (std::uint64_t i = 0; i < rep.trials; ++i) {
    const TrialResult& r = results[i];
    if (r.pass)
      ++rep.passes;
    else
      rep.failures.push_back({i, trial_seed(opts.seed, i), r.message});
    for (const auto& [k, v] : r.metrics) {
      auto it = rep.metrics.find(k);
      if (it == rep.metrics.end())
        rep.metrics[k] = v;
      else
        it->second = std::max(it->second, v);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

void acyclicity_trial(std::uint64_t, Rng& rng, TrialResult& out, const SuiteOptions& opts) {
  std::size_t k = 1 + rng.below(3), l = 1 + rng.below(3);
  auto q = random_quadruple<GQ>(rng, k, l);
  auto [h0, h1] = sheaf_cohomology(q, Twist{0, 0}, opts.tol);
  out.require(h0 == 0 && h1 == 0,
              "h*(F) != 0: h0=" + std::to_string(h0) + " h1=" + std::to_string(h1));
}

void hilbert_trial(std::uint64_t, Rng& rng, TrialResult& out, const SuiteOptions& opts) {
  std::size_t k = 1 + rng.below(3), l = 1 + rng.below(3);
  auto q = random_quadruple<GQ>(rng, k, l);
  auto p = hilbert_polynomial(q, opts.tol);  // throws NonLinearHilbert on any mismatch
  out.require(p.coeff(1, 0) == GQ(static_cast<long>(l)) &&
                  p.coeff(0, 1) == GQ(static_cast<long>(k)),
              "fit is linear but not l*x + k*y");
}

void genus_trial(std::uint64_t, Rng& rng, TrialResult& out, const SuiteOptions& opts) {
  int k = static_cast<int>(rng.int_in(1, 4)), l = static_cast<int>(rng.int_in(1, 4));
  BiPoly<GQ> p;
  do {
    std::vector<GQ> table;
    for (int i = 0; i < (k + 1) * (l + 1); ++i)
      table.push_back(GQ(Rational(rng.int_in(-5, 5)), Rational(rng.int_in(-5, 5))));
    p = BiPoly<GQ>::from_table(k, l, std::move(table));
  } while (p.degree_zeta() != k || p.degree_eta() != l);
  MonadComplex<GQ> c;
  c.source.push_back({-k, -l});
  c.target.push_back({0, 0});
  c.entries = {{p}};
  auto h = monad_cohomology(c, Twist{0, 0}, opts.tol);
  long genus = static_cast<long>(k - 1) * (l - 1);
  out.require(h[0] == 1, "h0(O_S) = " + std::to_string(h[0]) + " != 1");
  out.require(h[1] == genus,
              "h1(O_S) = " + std::to_string(h[1]) + " != genus " + std::to_string(genus));
  for (Twist t : {Twist{1, 0}, Twist{0, 1}, Twist{1, 1}, Twist{2, -1}}) {
    auto ht = monad_cohomology(c, t, opts.tol);
    long chi = ht[0] - ht[1];
    long expect = l * t.p + k * t.q + (k + l - k * l);
    out.require(chi == expect, "twisted chi mismatch");
  }
}

Quadruple<GQ> mixed_rank_quadruple(std::uint64_t trial, Rng& rng, std::size_t max_l) {
  std::size_t l = 1 + rng.below(max_l);
  std::size_t k = 1 + rng.below(l);
  GenConstraints cons;
  if (trial % 3 == 1) cons.rank_f = rng.below(k + 1);
  if (trial % 3 == 2) cons.rank_g = rng.below(k + 1);
  return random_quadruple<GQ>(rng, k, l, cons);
}

void rank_theorem_trial(std::uint64_t trial, Rng& rng, TrialResult& out,
                        const SuiteOptions& opts) {
  auto q = mixed_rank_quadruple(trial, rng, 4);
  auto r = rank_theorem_check(q, opts.tol);
  out.require(r.equivalence_holds, "rank condition and vanishing condition disagree");
}

void theorem1_trial(std::uint64_t trial, Rng& rng, TrialResult& out, const SuiteOptions& opts) {
  auto q = mixed_rank_quadruple(trial, rng, 4);
  auto r = theorem1_check(q, opts.tol);
  out.require(r.h0_L_0m1 == 0 && r.h1_L_0m1 == 0, "line-bundle checker acyclicity conditions failed");
  out.require(r.agrees_with_rank_theorem, "line-bundle checker disagrees with the rank equivalence");
}

TracePolynomial<Complex> random_trace_poly(Rng& rng) {
  static const std::vector<std::string> pool{"X",   "Y",   "FG",  "GF", "XFG",
                                             "YGF", "XX",  "YY",  "FYG", "GXF"};
  return TracePolynomial<Complex>::word(pool[rng.below(pool.size())], rng.cnormal());
}

void jacobi_trial(std::uint64_t, Rng& rng, TrialResult& out, const SuiteOptions&) {
  std::size_t k = 1 + rng.below(3), l = 1 + rng.below(3);
  auto q = random_quadruple<Complex>(rng, k, l);
  auto fp = random_trace_poly(rng), gp = random_trace_poly(rng), hp = random_trace_poly(rng);
  auto f = fp.to_hamiltonian(), g = gp.to_hamiltonian(), h = hp.to_hamiltonian();

  double antisym = std::abs(bracket(f, g, q) + bracket(g, f, q));
  out.metric("max_antisymmetry_residual", antisym);
  out.require(antisym <= 1e-9, "antisymmetry residual above 1e-9");

  Complex leib = bracket(f, hprod(g, h), q) -
                 (bracket(f, g, q) * h.value(q) + g.value(q) * bracket(f, h, q));
  out.metric("max_leibniz_residual", std::abs(leib));
  out.require(std::abs(leib) <= 1e-9, "Leibniz residual above 1e-9");

  Complex jac = trace_poly_bracket(fp, trace_poly_bracket(gp, hp)).eval(q) +
                trace_poly_bracket(gp, trace_poly_bracket(hp, fp)).eval(q) +
                trace_poly_bracket(hp, trace_poly_bracket(fp, gp)).eval(q);
  out.metric("max_jacobi_residual", std::abs(jac));
  out.require(std::abs(jac) <= 1e-8, "Jacobi residual above 1e-8");

  Complex canon = bracket(coordinate_f<Complex>(0, 0), coordinate_g<Complex>(0, 0), q);
  out.require(canon == Complex(1.0, 0.0), "{F11, G11} != 1 exactly");
}

void leaf_commute_trial(std::uint64_t, Rng& rng, TrialResult& out, const SuiteOptions&) {
  std::size_t k = 1 + rng.below(3), l = 1 + rng.below(3);
  auto q = random_quadruple<Complex>(rng, k, l);
  // bounded sample points: the bracket is exactly zero, so the numeric
  // residual must not be inflated by large adjugate products
  Complex damp(0.5, 0);
  q.x *= damp;
  q.y *= damp;
  q.f *= damp;
  q.g *= damp;
  auto sd = spectral_data(q);
  std::vector<QGrad<Complex>> grads;
  for (std::size_t a = 0; a <= k; ++a)
    for (std::size_t b = 0; b <= l; ++b)
      grads.push_back(sd.coefficient_gradient(static_cast<int>(a), static_cast<int>(b)));
  for (std::size_t i = 0; i < grads.size(); ++i)
    for (std::size_t j = 0; j < grads.size(); ++j) {
      Complex v = (grads[i].df * grads[j].dg - grads[j].df * grads[i].dg).trace();
      out.metric("max_leaf_bracket", std::abs(v));
      out.require(std::abs(v) <= 1e-9, "leaf bracket of spectral Hamiltonians above 1e-9");
    }
}

void isospectral_trial(std::uint64_t trial, Rng& rng, TrialResult& out,
                       const SuiteOptions& opts) {
  if (trial % 4 == 0) {
    // closed form: k = l = 1, H_00 from (0, 0, 1, 1): f = e^{-t}, g = e^{t}
    Quadruple<Complex> q0;
    q0.k = q0.l = 1;
    q0.x = Matrix<Complex>(1, 1);
    q0.y = Matrix<Complex>(1, 1);
    q0.f = Matrix<Complex>(1, 1, {Complex(1, 0)});
    q0.g = Matrix<Complex>(1, 1, {Complex(1, 0)});
    auto traj = flow(q0, spectral_hamiltonian<Complex>(0, 0), opts.dt, opts.horizon,
                     FlowMode::leaf, opts.tol);
    const auto& qf = traj.states.back();
    double t_final = traj.times.back();
    double err = std::max(std::abs(qf.f(0, 0) - std::exp(-t_final)),
                          std::abs(qf.g(0, 0) - std::exp(t_final)));
    out.metric("max_closed_form_error", err);
    out.require(err <= 1e-8, "closed-form solution mismatch above 1e-8");
    out.metric("max_spectral_drift", traj.max_rel_drift_over("H_"));
    out.require(traj.max_rel_drift_over("H_") <= 1e-6, "spectral drift above 1e-6");
    return;
  }
  std::size_t k = 1 + rng.below(3), l = 1 + rng.below(3);
  auto q = random_quadruple<Complex>(rng, k, l);
  // keep the leaf dynamics inside the fixed-step stability envelope
  Complex damp(0.5, 0);
  q.x *= damp;
  q.y *= damp;
  q.f *= damp;
  q.g *= damp;
  auto h = spectral_hamiltonian<Complex>(static_cast<int>(rng.below(k + 1)),
                                         static_cast<int>(rng.below(l + 1)));
  auto traj = flow(q, h, opts.dt, opts.horizon, FlowMode::leaf, opts.tol);
  double drift = traj.max_rel_drift_over("H_");
  out.metric("max_spectral_drift", drift);
  out.require(drift <= 1e-6, "spectral coefficient drift above 1e-6 in leaf mode");
  double casimir = std::max(traj.max_rel_drift_over("trX"), traj.max_rel_drift_over("trY"));
  out.metric("max_casimir_drift", casimir);
  out.require(casimir <= 1e-8, "Casimir drift above 1e-8");
  // full-mode run: the traces are Casimirs of the full bracket
  auto traj2 = flow(q, trace_word<Complex>("XFG"), opts.dt, opts.horizon, FlowMode::full,
                    ToleranceConfig{opts.tol.rank_rel_tol, opts.tol.eig_tol, 1e-2});
  double casimir_full =
      std::max(traj2.max_rel_drift_over("trX"), traj2.max_rel_drift_over("trY"));
  out.metric("max_casimir_drift_full", casimir_full);
  out.require(casimir_full <= 1e-8, "full-mode Casimir drift above 1e-8");
}

void roundtrip_trial(std::uint64_t, Rng& rng, TrialResult& out, const SuiteOptions& opts) {
  // float round trip through the rational-map presentation
  std::size_t l = 2 + rng.below(2);
  RationalMap<Complex> r;
  r.y = random_matrix<Complex>(rng, l, l);
  std::size_t npoles = 1 + rng.below(3);
  for (std::size_t p = 0; p < npoles; ++p) {
    r.poles.push_back(Complex(static_cast<double>(p) * 2.0 - 2.0,
                              0.5 * static_cast<double>(rng.int_in(-2, 2))));
    r.residues.push_back(random_matrix_of_rank<Complex>(rng, l, l, 1 + rng.below(2), opts.tol));
  }
  auto q = from_rational_map(r, opts.tol);
  auto r2 = to_rational_map(q, opts.tol);
  double max_err = 0;
  for (long s = 0; s < 10; ++s) {
    Complex z(7.0 + static_cast<double>(s), 0.3);
    Matrix<Complex> diff = r.eval(z) - r2.eval(z);
    max_err = std::max(max_err,
                       diff.frobenius_approx() / std::max(1.0, r.eval(z).frobenius_approx()));
  }
  out.metric("max_roundtrip_error", max_err);
  out.require(max_err <= 1e-10, "round trip error above 1e-10");

  // OrbitSpec invariance under one random well-conditioned act_K gauge
  auto base = orbit_invariants(to_rational_map(q, opts.tol), opts.tol);
  Matrix<Complex> g = Matrix<Complex>::identity(q.k) +
                      random_matrix<Complex>(rng, q.k, q.k) * Complex(0.2, 0);
  Matrix<Complex> h = Matrix<Complex>::identity(q.l) +
                      random_matrix<Complex>(rng, q.l, q.l) * Complex(0.2, 0);
  auto moved = orbit_invariants(to_rational_map(act_K(q, g, h, opts.tol), opts.tol), opts.tol);
  ToleranceConfig orbit_tol = opts.tol;
  orbit_tol.eig_tol = std::max(orbit_tol.eig_tol, 1e-8);
  out.require(same_orbit(base, moved, orbit_tol), "OrbitSpec changed under an act_K gauge");

  // exact boundary slopes in the all-simple case: diagonals of FG and GF
  Quadruple<GQ> qe;
  qe.k = 2;
  qe.l = 3;
  qe.x = Matrix<GQ>(2, 2);
  qe.x(0, 0) = GQ(rng.int_in(-5, -1));
  qe.x(1, 1) = GQ(rng.int_in(0, 5));
  qe.y = Matrix<GQ>(3, 3);
  qe.y(0, 0) = GQ(rng.int_in(-6, -3));
  qe.y(1, 1) = GQ(rng.int_in(-2, 2));
  qe.y(2, 2) = GQ(rng.int_in(3, 6));
  qe.f = random_matrix<GQ>(rng, 2, 3);
  qe.g = random_matrix<GQ>(rng, 3, 2);
  Matrix<GQ> fg = qe.f * qe.g, gf = qe.g * qe.f;
  auto be = boundary_data(qe, BoundaryDirection::eta_infinity);
  for (std::size_t i = 0; i < 2; ++i)
    out.require(be.slopes[i].size() == 1 && be.slopes[i][0] == fg(i, i),
                "eta-infinity slope is not the FG diagonal");
  auto bz = boundary_data(qe, BoundaryDirection::zeta_infinity);
  for (std::size_t j = 0; j < 3; ++j)
    out.require(bz.slopes[j].size() == 1 && bz.slopes[j][0] == gf(j, j),
                "zeta-infinity slope is not the GF diagonal");
}

}  // namespace

int max_threads() {
  int omp_max = omp_get_max_threads();
  const char* env = std::getenv("SPECTRAL_PENCIL_THREADS");
  if (!env) return omp_max;
  int v = std::atoi(env);
  if (v < 1) return 1;
  return std::min(v, omp_max);
}

std::vector<std::string> suite_names() {
  return {"acyclicity", "hilbert",      "genus",       "rank-theorem", "theorem1",
          "jacobi",     "leaf-commute", "isospectral", "roundtrip"};
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& opts) {
  using Body = std::function<void(std::uint64_t, Rng&, TrialResult&)>;
  auto with_opts = [&](auto fn) {
    return Body([fn, &opts](std::uint64_t t, Rng& rng, TrialResult& out) {
      fn(t, rng, out, opts);
    });
  };
  struct Entry {
    std::uint64_t default_trials;
    Body body;
  };
  std::map<std::string, Entry> table{
      {"acyclicity", {200, with_opts(acyclicity_trial)}},
      {"hilbert", {100, with_opts(hilbert_trial)}},
      {"genus", {40, with_opts(genus_trial)}},
      {"rank-theorem", {200, with_opts(rank_theorem_trial)}},
      {"theorem1", {200, with_opts(theorem1_trial)}},
      {"jacobi", {50, with_opts(jacobi_trial)}},
      {"leaf-commute", {50, with_opts(leaf_commute_trial)}},
      {"isospectral", {4, with_opts(isospectral_trial)}},
      {"roundtrip", {50, with_opts(roundtrip_trial)}},
  };
  auto it = table.find(name);
  if (it == table.end()) throw Error("run_suite: unknown suite '" + name + "'");
  return run_trials(name, opts, it->second.default_trials, it->second.body);
}

}  // namespace spectral::harness
