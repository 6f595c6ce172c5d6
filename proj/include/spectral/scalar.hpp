#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <complex>
#include <cstdint>
#include <string>

#include "spectral/errors.hpp"

namespace spectral {

using Rational = boost::multiprecision::mpq_rational;
using Complex = std::complex<double>;

/// Exact complex scalar: a Gaussian rational re + im*i with arbitrary-precision
/// rational components. All arithmetic is exact.
class GaussianRational {
 public:
  GaussianRational() : re_(0), im_(0) {}
  GaussianRational(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational re, Rational im = Rational(0))
      : re_(std::move(re)), im_(std::move(im)) {}
  GaussianRational(long num_re, long den_re, long num_im, long den_im)
      : re_(Rational(num_re, den_re)), im_(Rational(num_im, den_im)) {}

  static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }

  GaussianRational conj() const { return GaussianRational(re_, -im_); }

  // |z|^2 as an exact rational.
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  std::complex<double> to_complex() const {
    return {re_.convert_to<double>(), im_.convert_to<double>()};
  }

  GaussianRational operator-() const { return GaussianRational(-re_, -im_); }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    Rational n2 = o.norm2();
    if (n2 == 0) throw Error("GaussianRational: division by zero");
    Rational r = (re_ * o.re_ + im_ * o.im_) / n2;
    Rational i = (im_ * o.re_ - re_ * o.im_) / n2;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

 private:
  Rational re_, im_;
};

/// Thresholds used by every floating-point decision in the library.
/// Rank decisions use rank_rel_tol * (largest singular value); singular values
/// exactly at the threshold count as nonzero.
struct ToleranceConfig {
  double rank_rel_tol = 1e-9;
  double eig_tol = 1e-9;
  double flow_drift_tol = 1e-6;

  void validate() const {
    if (!(rank_rel_tol > 0) || !(eig_tol > 0) || !(flow_drift_tol > 0))
      throw Error("ToleranceConfig: all tolerances must be strictly positive");
  }
};

template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<GaussianRational> {
  static constexpr bool is_exact = true;
  static GaussianRational zero() { return GaussianRational(); }
  static GaussianRational one() { return GaussianRational(1); }
  static GaussianRational from_int(long v) { return GaussianRational(v); }
  static bool is_zero(const GaussianRational& a) { return a.is_zero(); }
  static GaussianRational conj(const GaussianRational& a) { return a.conj(); }
  static std::complex<double> approx(const GaussianRational& a) { return a.to_complex(); }
  static double abs_approx(const GaussianRational& a) { return std::abs(a.to_complex()); }
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool is_exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static bool is_zero(const Complex& a) { return a.real() == 0.0 && a.imag() == 0.0; }
  static Complex conj(const Complex& a) { return std::conj(a); }
  static std::complex<double> approx(const Complex& a) { return a; }
  static double abs_approx(const Complex& a) { return std::abs(a); }
};

}  // namespace spectral
