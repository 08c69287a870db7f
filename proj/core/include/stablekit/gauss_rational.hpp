#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <string>

namespace stablekit {

using Rational = mpq_class;

// Exact element of Q(i).
class GaussRat {
 public:
  GaussRat() : re_(0), im_(0) {}
  GaussRat(long v) : re_(v), im_(0) {}  // NOLINT(runtime/explicit)
  GaussRat(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussRat i() { return GaussRat(0, 1); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  GaussRat conj() const { return GaussRat(re_, -im_); }
  Rational norm() const { return re_ * re_ + im_ * im_; }
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  double abs() const { return std::abs(to_complex()); }

  GaussRat operator-() const { return GaussRat(-re_, -im_); }
  GaussRat& operator+=(const GaussRat& o);
  GaussRat& operator-=(const GaussRat& o);
  GaussRat& operator*=(const GaussRat& o);
  GaussRat& operator/=(const GaussRat& o);

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  GaussRat pow(unsigned e) const;

  // "a/b" strings for the real and imaginary parts.
  std::string re_string() const { return re_.get_str(); }
  std::string im_string() const { return im_.get_str(); }
  std::string to_string() const;

 private:
  Rational re_;
  Rational im_;
};

Rational parse_rational(const std::string& s);

// Continued-fraction reconstruction of a double with bounded denominator.
// Returns false when no candidate within tol exists.
bool rationalize(double x, long max_den, double tol, Rational& out);
bool rationalize(std::complex<double> z, long max_den, double tol, GaussRat& out);

// Coefficient-field traits shared by exact and floating algorithms.
template <class K>
struct Field;

template <>
struct Field<GaussRat> {
  static constexpr bool exact = true;
  static bool is_zero(const GaussRat& x, double /*tol*/ = 0) { return x.is_zero(); }
  static GaussRat conj(const GaussRat& x) { return x.conj(); }
  static double magnitude(const GaussRat& x) { return x.abs(); }
  static double real(const GaussRat& x) { return x.re().get_d(); }
  static double imag(const GaussRat& x) { return x.im().get_d(); }
  static GaussRat from_int(long v) { return GaussRat(v); }
  static GaussRat from_rational(const Rational& r) { return GaussRat(r); }
  static std::complex<double> to_cd(const GaussRat& x) { return x.to_complex(); }
  static GaussRat imaginary_unit() { return GaussRat::i(); }
  static GaussRat real_part(const GaussRat& x) { return GaussRat(x.re()); }
};

template <class T>
struct Field<std::complex<T>> {
  static constexpr bool exact = false;
  static bool is_zero(const std::complex<T>& x, double tol = 0) {
    return std::abs(x) <= static_cast<T>(tol);
  }
  static std::complex<T> conj(const std::complex<T>& x) { return std::conj(x); }
  static double magnitude(const std::complex<T>& x) { return static_cast<double>(std::abs(x)); }
  static double real(const std::complex<T>& x) { return static_cast<double>(x.real()); }
  static double imag(const std::complex<T>& x) { return static_cast<double>(x.imag()); }
  static std::complex<T> from_int(long v) { return std::complex<T>(static_cast<T>(v), 0); }
  static std::complex<T> from_rational(const Rational& r) {
    return std::complex<T>(static_cast<T>(r.get_d()), 0);
  }
  static std::complex<double> to_cd(const std::complex<T>& x) {
    return {static_cast<double>(x.real()), static_cast<double>(x.imag())};
  }
  static std::complex<T> imaginary_unit() { return std::complex<T>(0, 1); }
  static std::complex<T> real_part(const std::complex<T>& x) { return {x.real(), 0}; }
};

// Converts an exact coefficient into field K.
template <class K>
K coerce(const GaussRat& x) {
  if constexpr (Field<K>::exact) {
    return x;
  } else {
    using T = typename K::value_type;
    if constexpr (std::is_same_v<T, double>) {
      return K(x.re().get_d(), x.im().get_d());
    } else {
      // Extended precision: divide in T to keep the extra bits.
      auto conv = [](const Rational& r) {
        return static_cast<T>(r.get_num().get_d()) / static_cast<T>(r.get_den().get_d());
      };
      return K(conv(x.re()), conv(x.im()));
    }
  }
}

}  // namespace stablekit
