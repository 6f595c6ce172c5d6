// spectral-pencil: batch front-end for quadruple generation, theorem
// verification suites, instance inspection and isospectral flows. Consumers
// are scripts and CI; all outputs are JSON (CSV for trajectories and curve
// samples) and byte-deterministic for a fixed configuration.
//
// Exit codes: 0 = all checks passed, 1 = a mathematical check failed,
// 2 = usage or input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "harness/generator.hpp"
#include "harness/suites.hpp"
#include "spectral/cohomology.hpp"
#include "spectral/curve.hpp"
#include "spectral/json_io.hpp"
#include "spectral/loop_orbit.hpp"
#include "spectral/poisson.hpp"

namespace {

using namespace spectral;
using harness::Rng;

using GQ = GaussianRational;

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open output file: " + path);
  out << data;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<int> parse_mults(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = std::stoi(item);
    if (v < 1) throw UsageError("multiplicities must be positive");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty multiplicity list");
  return out;
}

Matrix<Complex> approx_matrix(const Matrix<GQ>& m) {
  Matrix<Complex> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_complex();
  return out;
}

Pencil<Complex> approx_pencil(const Pencil<GQ>& p) {
  Pencil<Complex> out;
  out.k = p.k;
  out.l = p.l;
  out.a0 = approx_matrix(p.a0);
  out.a1 = approx_matrix(p.a1);
  out.b0 = approx_matrix(p.b0);
  out.b1 = approx_matrix(p.b1);
  return out;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::uint64_t seed = 1;
  std::size_t k = 1, l = 1;
  std::string backend = "exact";
  std::optional<std::size_t> rank_f, rank_g;
  std::string diag_x, diag_y;
  bool no_det_check = false;
  std::string out;
};

template <typename T>
std::string run_gen_typed(const GenArgs& a) {
  harness::GenConstraints cons;
  cons.rank_f = a.rank_f;
  cons.rank_g = a.rank_g;
  if (!a.diag_x.empty()) cons.x_mults = parse_mults(a.diag_x);
  if (!a.diag_y.empty()) cons.y_mults = parse_mults(a.diag_y);
  cons.require_det = !a.no_det_check;
  if (cons.x_mults) {
    std::size_t sum = 0;
    for (int m : *cons.x_mults) sum += static_cast<std::size_t>(m);
    if (sum != a.k) throw UsageError("--diag-x multiplicities must sum to k");
  }
  if (cons.y_mults) {
    std::size_t sum = 0;
    for (int m : *cons.y_mults) sum += static_cast<std::size_t>(m);
    if (sum != a.l) throw UsageError("--diag-y multiplicities must sum to l");
  }
  Rng rng(a.seed);
  auto q = harness::random_quadruple<T>(rng, a.k, a.l, cons);
  return quadruple_to_json(q).dump(2) + "\n";
}

int run_gen(const GenArgs& a) {
  std::string text =
      a.backend == "exact" ? run_gen_typed<GQ>(a) : run_gen_typed<Complex>(a);
  write_output(a.out, text);
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;
  double dt = 1e-3, horizon = 1.0;
  std::optional<double> tol_rank, tol_drift;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  harness::SuiteOptions opts;
  opts.seed = a.seed;
  opts.trials = a.trials;
  opts.dt = a.dt;
  opts.horizon = a.horizon;
  if (a.tol_rank) opts.tol.rank_rel_tol = *a.tol_rank;
  if (a.tol_drift) opts.tol.flow_drift_tol = *a.tol_drift;
  opts.tol.validate();
  auto rep = harness::run_suite(a.suite, opts);
  Json j;
  j["suite"] = rep.suite;
  j["seed"] = a.seed;
  j["trials"] = rep.trials;
  j["passes"] = rep.passes;
  j["ok"] = rep.ok();
  Json failures = Json::array();
  for (const auto& f : rep.failures) {
    Json jf;
    jf["trial"] = f.trial;
    jf["seed"] = f.seed;
    jf["message"] = f.message;
    failures.push_back(jf);
  }
  j["failures"] = failures;
  Json metrics;
  for (const auto& [k, v] : rep.metrics) metrics[k] = format_double(v);
  j["metrics"] = metrics;
  write_output(a.out, j.dump(2) + "\n");
  return rep.ok() ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct InspectArgs {
  std::string in, out;
  std::string curve_csv;
  std::size_t curve_grid = 41;
  double curve_range = 2.0;
  std::optional<double> tol_rank;
};

template <typename T>
Json inspect_quadruple(const Quadruple<T>& q, const ToleranceConfig& tol) {
  Json rep;
  rep["k"] = q.k;
  rep["l"] = q.l;
  rep["backend"] = detail::scalar_io<T>::backend_name;
  rep["quadruple"] = quadruple_to_json(q);

  auto curve = spectral_curve(q.embed());
  Json jc;
  jc["det"] = bipoly_to_json(curve.det_poly);
  if (curve.squarefree) jc["squarefree"] = bipoly_to_json(*curve.squarefree);
  if (curve.minimal) jc["minimal"] = bipoly_to_json(*curve.minimal);
  rep["spectral_curve"] = jc;

  hilbert_polynomial(q, tol);  // throws on any nonlinearity
  rep["hilbert"] = Json{{"x_coeff", q.l}, {"y_coeff", q.k}};

  Json table = Json::array();
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y) {
      auto [h0, h1] = sheaf_cohomology(q, Twist{x, y}, tol);
      Json row;
      row["x"] = x;
      row["y"] = y;
      row["h0"] = h0;
      row["h1"] = h1;
      table.push_back(row);
    }
  rep["cohomology"] = table;

  rep["ranks"] = Json{{"rank_F", rank(q.f, tol)}, {"rank_G", rank(q.g, tol)}};

  if (q.k <= q.l) {
    auto rt = rank_theorem_check(q, tol);
    rep["rank_theorem"] = Json{{"rank_F", rt.rank_f},
                               {"rank_G", rt.rank_g},
                               {"h0_F(-1,1)", rt.h0_m11},
                               {"h1_F(1,-1)", rt.h1_1m1},
                               {"rank_condition", rt.rank_condition},
                               {"vanishing_condition", rt.vanishing_condition},
                               {"equivalence_holds", rt.equivalence_holds}};
    auto t1 = theorem1_check(q, tol);
    rep["theorem1"] = Json{{"h0_L(0,-1)", t1.h0_L_0m1},
                           {"h1_L(0,-1)", t1.h1_L_0m1},
                           {"h0_L(-1,0)", t1.h0_L_m10},
                           {"h1_L(1,-2)", t1.h1_L_1m2},
                           {"all_hold", t1.all_hold},
                           {"chi_L", t1.chi_L},
                           {"agrees_with_rank_theorem", t1.agrees_with_rank_theorem}};
  } else {
    rep["rank_theorem"] = Json{{"skipped", "requires k <= l"}};
  }

  auto bp = bipurity_check(q, tol);
  Json jb;
  jb["vertical_ok"] = bp.vertical_ok;
  jb["horizontal_ok"] = bp.horizontal_ok;
  Json vws = Json::array(), hws = Json::array();
  for (const auto& [z, w] : bp.vertical_witnesses) {
    Json e;
    e["zeta"] = detail::scalar_io<T>::to_json(z);
    e["kernel"] = matrix_to_json(w);
    vws.push_back(e);
  }
  for (const auto& [e0, w] : bp.horizontal_witnesses) {
    Json e;
    e["eta"] = detail::scalar_io<T>::to_json(e0);
    e["kernel"] = matrix_to_json(w);
    hws.push_back(e);
  }
  jb["vertical_witnesses"] = vws;
  jb["horizontal_witnesses"] = hws;
  rep["bipurity"] = jb;

  {
    std::vector<std::optional<T>> zs, es;
    for (long v = -2; v <= 2; ++v) {
      zs.push_back(scalar_traits<T>::from_int(v));
      es.push_back(scalar_traits<T>::from_int(v));
    }
    zs.push_back(std::nullopt);
    es.push_back(std::nullopt);
    rep["geometric_resolution"] = geometric_resolution_check(q, zs, es, tol);
  }

  try {
    auto r = to_rational_map(q, tol);
    Json jo;
    jo["rational_map"] = rational_map_to_json(r);
    jo["orbit"] = orbit_spec_to_json(orbit_invariants(r, tol));
    jo["free_proper"] = free_properness_check(q, tol);
    auto be = boundary_data(q, BoundaryDirection::eta_infinity, tol);
    auto bz = boundary_data(q, BoundaryDirection::zeta_infinity, tol);
    auto boundary_json = [](const BoundaryData<T>& b) {
      Json out = Json::array();
      for (std::size_t i = 0; i < b.points.size(); ++i) {
        Json e;
        e["point"] = detail::scalar_io<T>::to_json(b.points[i].first);
        e["multiplicity"] = b.points[i].second;
        Json slopes = Json::array();
        for (const auto& s : b.slopes[i]) slopes.push_back(detail::scalar_io<T>::to_json(s));
        e["slopes"] = slopes;
        e["first_order_class"] = conj_class_to_json(b.first_order[i]);
        out.push_back(e);
      }
      return out;
    };
    jo["boundary_eta_infinity"] = boundary_json(be);
    jo["boundary_zeta_infinity"] = boundary_json(bz);
    rep["loop_orbit"] = jo;
  } catch (const Error& e) {
    rep["loop_orbit"] = Json{{"available", false}, {"reason", e.what()}};
  }
  return rep;
}

int run_inspect(const InspectArgs& a) {
  Json j = parse_json(read_input(a.in));
  ToleranceConfig tol;
  if (a.tol_rank) tol.rank_rel_tol = *a.tol_rank;
  tol.validate();
  std::string backend = backend_of(j);
  Json rep;
  Pencil<Complex> sampling_pencil;
  if (j.contains("A0")) {
    // pencil input: normalize first, report the gauge
    if (backend == "exact") {
      auto p = pencil_from_json<GQ>(j);
      auto [q, gauge] = normalize(p, tol);
      rep = inspect_quadruple(q, tol);
      rep["normalized_from_pencil"] = true;
      rep["gauge"] = matrix_to_json(gauge);
      sampling_pencil = approx_pencil(p);
    } else {
      auto p = pencil_from_json<Complex>(j);
      auto [q, gauge] = normalize(p, tol);
      rep = inspect_quadruple(q, tol);
      rep["normalized_from_pencil"] = true;
      rep["gauge"] = matrix_to_json(gauge);
      sampling_pencil = p;
    }
  } else if (backend == "exact") {
    auto q = quadruple_from_json<GQ>(j);
    q.validate();
    rep = inspect_quadruple(q, tol);
    sampling_pencil = approx_pencil(q.embed());
  } else {
    auto q = quadruple_from_json<Complex>(j);
    q.validate();
    rep = inspect_quadruple(q, tol);
    sampling_pencil = q.embed();
  }
  if (!a.curve_csv.empty()) {
    std::vector<Complex> grid;
    for (std::size_t i = 0; i < a.curve_grid; ++i) {
      double t = a.curve_grid == 1
                     ? 0.0
                     : -a.curve_range + 2 * a.curve_range * static_cast<double>(i) /
                                            static_cast<double>(a.curve_grid - 1);
      grid.emplace_back(t, 0.0);
    }
    auto samples = sample_curve(sampling_pencil, grid, tol);
    write_output(a.curve_csv, curve_samples_to_csv(samples));
    rep["curve_csv"] = a.curve_csv;
    rep["curve_points"] = samples.points.size();
  }
  write_output(a.out, rep.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct FlowArgs {
  std::string in, out, traj_csv;
  int ham_a = 0, ham_b = 0;
  std::string mode = "leaf";
  double dt = 1e-3, horizon = 1.0;
  std::optional<double> tol_drift;
};

int run_flow(const FlowArgs& a) {
  Json j = parse_json(read_input(a.in));
  if (backend_of(j) != "float")
    throw SchemaError("flow integrates on the float backend; supply a float quadruple");
  auto q = quadruple_from_json<Complex>(j);
  q.validate();
  ToleranceConfig tol;
  if (a.tol_drift) tol.flow_drift_tol = *a.tol_drift;
  tol.validate();
  FlowMode mode = a.mode == "full" ? FlowMode::full : FlowMode::leaf;
  auto traj = flow(q, spectral_hamiltonian<Complex>(a.ham_a, a.ham_b), a.dt, a.horizon, mode, tol);
  if (!a.traj_csv.empty()) write_output(a.traj_csv, trajectory_to_csv(traj));
  Json rep;
  rep["steps"] = traj.times.size() - 1;
  rep["mode"] = a.mode;
  rep["hamiltonian"] = "H_" + std::to_string(a.ham_a) + "_" + std::to_string(a.ham_b);
  rep["final_state"] = quadruple_to_json(traj.states.back());
  Json drifts;
  for (std::size_t m = 0; m < traj.monitor_names.size(); ++m)
    drifts[traj.monitor_names[m]] = format_double(traj.max_rel_drift(m));
  rep["max_rel_drift"] = drifts;
  if (!a.traj_csv.empty()) rep["trajectory_csv"] = a.traj_csv;
  write_output(a.out, rep.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix pencils, spectral curves and sheaf cohomology on P1 x P1"};
  app.require_subcommand(1);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "generate a seeded random quadruple as JSON");
  gen->add_option("--seed", ga.seed, "64-bit seed; fully determines the output");
  gen->add_option("--k", ga.k, "block size k")->required();
  gen->add_option("--l", ga.l, "block size l")->required();
  gen->add_option("--backend", ga.backend, "exact | float")
      ->check(CLI::IsMember({"exact", "float"}));
  gen->add_option("--rank-f", ga.rank_f, "force rank of F");
  gen->add_option("--rank-g", ga.rank_g, "force rank of G");
  gen->add_option("--diag-x", ga.diag_x, "diagonalizable X with multiplicities, e.g. 2,1");
  gen->add_option("--diag-y", ga.diag_y, "diagonalizable Y with multiplicities");
  gen->add_flag("--no-det-check", ga.no_det_check, "skip the det M != 0 retry loop");
  gen->add_option("--out", ga.out, "output path (default stdout)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("--suite", va.suite, "suite name")
      ->required()
      ->check(CLI::IsMember(harness::suite_names()));
  verify->add_option("--seed", va.seed, "base seed for trial streams");
  verify->add_option("--trials", va.trials, "number of trials (suite default when omitted)");
  verify->add_option("--dt", va.dt, "flow step size");
  verify->add_option("--horizon", va.horizon, "flow time horizon");
  verify->add_option("--tol-rank", va.tol_rank, "relative rank tolerance");
  verify->add_option("--tol-drift", va.tol_drift, "per-step conservation drift tolerance");
  verify->add_option("--out", va.out, "report path (default stdout)");

  InspectArgs ia;
  auto* inspect = app.add_subcommand("inspect", "full derived-data report for an instance");
  inspect->add_option("--in", ia.in, "quadruple or pencil JSON (default stdin)");
  inspect->add_option("--out", ia.out, "report path (default stdout)");
  inspect->add_option("--curve-csv", ia.curve_csv, "emit curve samples to this CSV path");
  inspect->add_option("--curve-grid", ia.curve_grid, "number of real zeta samples");
  inspect->add_option("--curve-range", ia.curve_range, "sample zeta in [-range, range]");
  inspect->add_option("--tol-rank", ia.tol_rank, "relative rank tolerance");

  FlowArgs fa;
  auto* flow_cmd = app.add_subcommand("flow", "integrate an isospectral Hamiltonian flow");
  flow_cmd->add_option("--in", fa.in, "float quadruple JSON (default stdin)");
  flow_cmd->add_option("--ham-a", fa.ham_a, "zeta index of the spectral Hamiltonian");
  flow_cmd->add_option("--ham-b", fa.ham_b, "eta index of the spectral Hamiltonian");
  flow_cmd->add_option("--mode", fa.mode, "leaf | full")
      ->check(CLI::IsMember({"leaf", "full"}));
  flow_cmd->add_option("--dt", fa.dt, "step size");
  flow_cmd->add_option("--horizon", fa.horizon, "integration time");
  flow_cmd->add_option("--tol-drift", fa.tol_drift, "per-step conservation drift tolerance");
  flow_cmd->add_option("--traj-csv", fa.traj_csv, "trajectory CSV path");
  flow_cmd->add_option("--out", fa.out, "summary report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_gen(ga);
    if (*verify) return run_verify(va);
    if (*inspect) return run_inspect(ia);
    if (*flow_cmd) return run_flow(fa);
    return 2;
  } catch (const UsageError& e) {
    std::cout << Json{{"error", e.what()}, {"type", "usage"}}.dump(2) << "\n";
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cout << Json{{"error", e.what()}, {"type", "schema"}}.dump(2) << "\n";
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cout << Json{{"error", e.what()}, {"type", "math"}}.dump(2) << "\n";
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
