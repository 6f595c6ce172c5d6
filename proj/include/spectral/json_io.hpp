#pragma once

#include <json.hpp>
#include <cstdio>
#include <string>

#include "spectral/conjclass.hpp"
#include "spectral/curve.hpp"
#include "spectral/loop_orbit.hpp"
#include "spectral/pencil.hpp"
#include "spectral/poisson.hpp"

namespace spectral {

using Json = nlohmann::ordered_json;

// Scalar components are serialized as strings: "p/q" (canonical, exact
// backend) or a %.17g decimal (float backend); parsing also accepts plain
// JSON integers. This keeps outputs byte-deterministic for a given config.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string rational_str(const Rational& r) { return r.str(); }

template <typename T>
struct scalar_io;

template <>
struct scalar_io<GaussianRational> {
  static constexpr const char* backend_name = "exact";
  static Json part_to_json(const Rational& r) { return rational_str(r); }
  static Json to_json(const GaussianRational& s) {
    return Json::array({part_to_json(s.re()), part_to_json(s.im())});
  }
  static Rational part_from_json(const Json& j, const std::string& where) {
    try {
      if (j.is_string()) return Rational(j.get<std::string>());
      if (j.is_number_integer()) return Rational(j.get<long long>());
    } catch (const std::exception&) {
    }
    throw SchemaError(where + ": expected a rational string like \"3/4\" or an integer");
  }
  static GaussianRational from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
      throw SchemaError(where + ": expected an [re, im] pair");
    return GaussianRational(part_from_json(j[0], where + "[0]"),
                            part_from_json(j[1], where + "[1]"));
  }
};

template <>
struct scalar_io<Complex> {
  static constexpr const char* backend_name = "float";
  static Json to_json(const Complex& s) {
    return Json::array({format_double(s.real()), format_double(s.imag())});
  }
  static double part_from_json(const Json& j, const std::string& where) {
    if (j.is_string()) {
      try {
        std::size_t pos = 0;
        double v = std::stod(j.get<std::string>(), &pos);
        if (pos == j.get<std::string>().size()) return v;
      } catch (const std::exception&) {
      }
    }
    if (j.is_number()) return j.get<double>();
    throw SchemaError(where + ": expected a decimal string or number");
  }
  static Complex from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
      throw SchemaError(where + ": expected an [re, im] pair");
    return Complex(part_from_json(j[0], where + "[0]"),
                   part_from_json(j[1], where + "[1]"));
  }
};

}  // namespace detail

template <typename T>
Json matrix_to_json(const Matrix<T>& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(detail::scalar_io<T>::to_json(m(i, j)));
  return out;
}

template <typename T>
Matrix<T> matrix_from_json(const Json& j, std::size_t rows, std::size_t cols,
                           const std::string& where) {
  if (!j.is_array() || j.size() != rows * cols)
    throw SchemaError(where + ": expected " + std::to_string(rows * cols) +
                      " row-major [re, im] entries");
  Matrix<T> m(rows, cols);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t jj = 0; jj < cols; ++jj, ++idx)
      m(i, jj) = detail::scalar_io<T>::from_json(j[idx], where + "[" + std::to_string(idx) + "]");
  return m;
}

template <typename T>
Json quadruple_to_json(const Quadruple<T>& q) {
  Json out;
  out["k"] = q.k;
  out["l"] = q.l;
  out["backend"] = detail::scalar_io<T>::backend_name;
  out["X"] = matrix_to_json(q.x);
  out["Y"] = matrix_to_json(q.y);
  out["F"] = matrix_to_json(q.f);
  out["G"] = matrix_to_json(q.g);
  return out;
}

inline std::size_t size_field(const Json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_number_unsigned())
    throw SchemaError(std::string(name) + ": expected a nonnegative integer");
  return j[name].get<std::size_t>();
}

template <typename T>
Quadruple<T> quadruple_from_json(const Json& j) {
  Quadruple<T> q;
  q.k = size_field(j, "k");
  q.l = size_field(j, "l");
  for (const char* f : {"X", "Y", "F", "G"})
    if (!j.contains(f)) throw SchemaError(std::string(f) + ": missing matrix field");
  q.x = matrix_from_json<T>(j["X"], q.k, q.k, "X");
  q.y = matrix_from_json<T>(j["Y"], q.l, q.l, "Y");
  q.f = matrix_from_json<T>(j["F"], q.k, q.l, "F");
  q.g = matrix_from_json<T>(j["G"], q.l, q.k, "G");
  return q;
}

template <typename T>
Json pencil_to_json(const Pencil<T>& p) {
  Json out;
  out["k"] = p.k;
  out["l"] = p.l;
  out["backend"] = detail::scalar_io<T>::backend_name;
  out["A0"] = matrix_to_json(p.a0);
  out["A1"] = matrix_to_json(p.a1);
  out["B0"] = matrix_to_json(p.b0);
  out["B1"] = matrix_to_json(p.b1);
  return out;
}

template <typename T>
Pencil<T> pencil_from_json(const Json& j) {
  Pencil<T> p;
  p.k = size_field(j, "k");
  p.l = size_field(j, "l");
  std::size_t n = p.k + p.l;
  for (const char* f : {"A0", "A1", "B0", "B1"})
    if (!j.contains(f)) throw SchemaError(std::string(f) + ": missing matrix field");
  p.a0 = matrix_from_json<T>(j["A0"], n, p.k, "A0");
  p.a1 = matrix_from_json<T>(j["A1"], n, p.k, "A1");
  p.b0 = matrix_from_json<T>(j["B0"], n, p.l, "B0");
  p.b1 = matrix_from_json<T>(j["B1"], n, p.l, "B1");
  return p;
}

template <typename T>
Json bipoly_to_json(const BiPoly<T>& p) {
  Json out;
  out["deg_zeta"] = p.degree_zeta();
  out["deg_eta"] = p.degree_eta();
  Json coeffs = Json::array();
  for (int a = 0; a <= p.degree_zeta(); ++a)
    for (int b = 0; b <= p.degree_eta(); ++b) {
      T c = p.coeff(a, b);
      if (scalar_traits<T>::is_zero(c)) continue;
      Json entry;
      entry["zeta"] = a;
      entry["eta"] = b;
      entry["value"] = detail::scalar_io<T>::to_json(c);
      coeffs.push_back(entry);
    }
  out["coeffs"] = coeffs;
  return out;
}

template <typename T>
Json conj_class_to_json(const ConjClassInvariant<T>& c) {
  Json out;
  out["n"] = c.n;
  Json cp = Json::array();
  for (int i = 0; i <= c.char_poly.degree(); ++i)
    cp.push_back(detail::scalar_io<T>::to_json(c.char_poly.coeff(static_cast<std::size_t>(i))));
  out["charpoly"] = cp;
  Json eigs = Json::array();
  for (std::size_t i = 0; i < c.eigenvalues.size(); ++i) {
    Json e;
    e["value"] = detail::scalar_io<T>::to_json(c.eigenvalues[i]);
    e["multiplicity"] = c.multiplicities[i];
    e["rank_seq"] = c.rank_seq[i];
    eigs.push_back(e);
  }
  out["eigenvalues"] = eigs;
  return out;
}

template <typename T>
Json rational_map_to_json(const RationalMap<T>& r) {
  Json out;
  out["l"] = r.l();
  out["backend"] = detail::scalar_io<T>::backend_name;
  out["Y"] = matrix_to_json(r.y);
  Json poles = Json::array(), residues = Json::array();
  // deterministic ascending pole order
  std::vector<std::size_t> order(r.poles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detail::complex_less(r.poles[a], r.poles[b]);
  });
  for (std::size_t oi : order) {
    poles.push_back(detail::scalar_io<T>::to_json(r.poles[oi]));
    residues.push_back(matrix_to_json(r.residues[oi]));
  }
  out["poles"] = poles;
  out["residues"] = residues;
  return out;
}

template <typename T>
RationalMap<T> rational_map_from_json(const Json& j) {
  RationalMap<T> r;
  std::size_t l = size_field(j, "l");
  if (!j.contains("Y")) throw SchemaError("Y: missing matrix field");
  r.y = matrix_from_json<T>(j["Y"], l, l, "Y");
  if (!j.contains("poles") || !j["poles"].is_array())
    throw SchemaError("poles: expected an array");
  if (!j.contains("residues") || !j["residues"].is_array() ||
      j["residues"].size() != j["poles"].size())
    throw SchemaError("residues: expected one matrix per pole");
  for (std::size_t i = 0; i < j["poles"].size(); ++i) {
    r.poles.push_back(detail::scalar_io<T>::from_json(j["poles"][i], "poles"));
    r.residues.push_back(
        matrix_from_json<T>(j["residues"][i], l, l, "residues[" + std::to_string(i) + "]"));
  }
  return r;
}

template <typename T>
Json orbit_spec_to_json(const OrbitSpec<T>& s) {
  Json out;
  out["Q0"] = conj_class_to_json(s.q0);
  Json poles = Json::array(), classes = Json::array();
  for (const auto& p : s.poles) poles.push_back(detail::scalar_io<T>::to_json(p));
  for (const auto& c : s.classes) classes.push_back(conj_class_to_json(c));
  out["poles"] = poles;
  out["classes"] = classes;
  out["ranks"] = s.ranks;
  return out;
}

inline std::string backend_of(const Json& j) {
  if (!j.contains("backend") || !j["backend"].is_string())
    throw SchemaError("backend: expected \"exact\" or \"float\"");
  std::string b = j["backend"].get<std::string>();
  if (b != "exact" && b != "float")
    throw SchemaError("backend: expected \"exact\" or \"float\", got \"" + b + "\"");
  return b;
}

// CSV emission: header "zeta_re,zeta_im,eta_re,eta_im".
inline std::string curve_samples_to_csv(const CurveSamples& s) {
  std::string out = "zeta_re,zeta_im,eta_re,eta_im\n";
  for (const auto& [z, e] : s.points)
    out += format_double(z.real()) + "," + format_double(z.imag()) + "," +
           format_double(e.real()) + "," + format_double(e.imag()) + "\n";
  return out;
}

// Trajectory CSV: t, the norms of X and Y, the flowed Hamiltonian, every
// spectral coefficient monitor, and the drift of each Casimir trace.
inline std::string trajectory_to_csv(const Trajectory& t) {
  std::string out = "t,norm_X,norm_Y";
  std::vector<std::size_t> value_cols, drift_cols;
  for (std::size_t m = 0; m < t.monitor_names.size(); ++m) {
    const std::string& name = t.monitor_names[m];
    if (name.rfind("tr", 0) == 0) {
      out += "," + name + "_drift";
      drift_cols.push_back(m);
    } else {
      out += "," + name + "_re," + name + "_im";
      value_cols.push_back(m);
    }
  }
  out += "\n";
  for (std::size_t row = 0; row < t.times.size(); ++row) {
    out += format_double(t.times[row]);
    out += "," + format_double(t.states[row].x.frobenius_approx());
    out += "," + format_double(t.states[row].y.frobenius_approx());
    for (std::size_t m : value_cols) {
      out += "," + format_double(t.monitor_values[row][m].real());
      out += "," + format_double(t.monitor_values[row][m].imag());
    }
    for (std::size_t m : drift_cols)
      out += "," + format_double(std::abs(t.monitor_values[row][m] - t.monitor_values[0][m]));
    out += "\n";
  }
  return out;
}

}  // namespace spectral
