#include "stablekit/gauss_rational.hpp"

#include <stdexcept>

namespace stablekit {

GaussRat& GaussRat::operator+=(const GaussRat& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussRat& GaussRat::operator*=(const GaussRat& o) {
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = r;
  im_ = i;
  return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
  Rational n = o.norm();
  if (sgn(n) == 0) throw std::domain_error("division by zero in Q(i)");
  Rational r = (re_ * o.re_ + im_ * o.im_) / n;
  Rational i = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = r;
  im_ = i;
  return *this;
}

GaussRat GaussRat::pow(unsigned e) const {
  GaussRat result(1), base = *this;
  while (e) {
    if (e & 1u) result *= base;
    base *= base;
    e >>= 1u;
  }
  return result;
}

std::string GaussRat::to_string() const {
  if (is_real()) return re_.get_str();
  std::string im_part;
  if (im_ == 1) im_part = "i";
  else if (im_ == -1) im_part = "-i";
  else im_part = im_.get_str() + "*i";
  if (sgn(re_) == 0) return im_part;
  if (im_part[0] == '-') return "(" + re_.get_str() + im_part + ")";
  return "(" + re_.get_str() + "+" + im_part + ")";
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  return r;
}

bool rationalize(double x, long max_den, double tol, Rational& out) {
  if (!std::isfinite(x)) return false;
  // Convergents p/q of the continued fraction of x.
  long double v = x;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    long double a = std::floor(v);
    if (std::fabs(a) > 1e15L) break;
    mpz_class ai = static_cast<long>(a);
    mpz_class p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rational cand(p1, q1);
    cand.canonicalize();
    if (std::fabs(cand.get_d() - x) <= tol) {
      out = cand;
      return true;
    }
    long double frac = v - a;
    if (frac < 1e-18L) break;
    v = 1.0L / frac;
  }
  return false;
}

bool rationalize(std::complex<double> z, long max_den, double tol, GaussRat& out) {
  Rational re, im;
  if (!rationalize(z.real(), max_den, tol, re)) return false;
  if (!rationalize(z.imag(), max_den, tol, im)) return false;
  out = GaussRat(re, im);
  return true;
}

}  // namespace stablekit
