#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "stablekit/polynomial.hpp"

namespace stablekit {

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Power series sum c_k t^k known modulo t^order. When used for a Puiseux
// branch, t = x^{1/ramification}.
template <class K>
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(std::vector<K> coeffs, int order, int ramification = 1)
      : c_(std::move(coeffs)), order_(order), ram_(ramification) {
    if (static_cast<int>(c_.size()) > order_) c_.resize(order_);
  }
  static TruncatedSeries constant(const K& a, int order) { return TruncatedSeries({a}, order); }
  static TruncatedSeries variable(int order) {
    return TruncatedSeries({K{}, Field<K>::from_int(1)}, order);
  }

  int order() const { return order_; }
  int ramification() const { return ram_; }
  void set_ramification(int m) { ram_ = m; }
  const std::vector<K>& coeffs() const { return c_; }

  K operator[](int k) const {
    if (k >= order_) throw TruncationError("coefficient beyond truncation order");
    return k < static_cast<int>(c_.size()) ? c_[k] : K{};
  }
  void set(int k, const K& v) {
    if (k >= order_) throw TruncationError("coefficient beyond truncation order");
    if (k >= static_cast<int>(c_.size())) c_.resize(k + 1, K{});
    c_[k] = v;
  }

  // Index of the first coefficient exceeding tol, or order() when none does.
  int valuation(double tol = 0) const {
    for (int k = 0; k < static_cast<int>(c_.size()); ++k)
      if (!Field<K>::is_zero(c_[k], tol)) return k;
    return order_;
  }

  TruncatedSeries truncated(int order) const {
    return TruncatedSeries(c_, std::min(order, order_), ram_);
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    int T = std::min(a.order_, b.order_);
    std::vector<K> c(T, K{});
    for (int k = 0; k < T; ++k) c[k] = a.get(k) + b.get(k);
    return TruncatedSeries(std::move(c), T, a.ram_);
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    int T = std::min(a.order_, b.order_);
    std::vector<K> c(T, K{});
    for (int k = 0; k < T; ++k) c[k] = a.get(k) - b.get(k);
    return TruncatedSeries(std::move(c), T, a.ram_);
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const K& s) {
    std::vector<K> c = a.c_;
    for (auto& x : c) x = x * s;
    return TruncatedSeries(std::move(c), a.order_, a.ram_);
  }
  // Product; the truncation accounts for the valuations of both factors.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    int va = a.valuation(), vb = b.valuation();
    int T = std::min(a.order_ + vb, b.order_ + va);
    if (va >= a.order_ && vb >= b.order_) T = a.order_ + b.order_;
    std::vector<K> c(std::max(0, T), K{});
    for (int i = 0; i < static_cast<int>(a.c_.size()); ++i) {
      if (a.c_[i] == K{}) continue;
      for (int j = 0; j < static_cast<int>(b.c_.size()) && i + j < T; ++j)
        c[i + j] += a.c_[i] * b.c_[j];
    }
    return TruncatedSeries(std::move(c), T, a.ram_);
  }

  // 1/a for a(0) != 0.
  TruncatedSeries reciprocal() const {
    K a0 = get(0);
    if (a0 == K{}) throw std::domain_error("reciprocal of a series with zero constant term");
    std::vector<K> r(order_, K{});
    K inv = Field<K>::from_int(1) / a0;
    r[0] = inv;
    for (int k = 1; k < order_; ++k) {
      K s{};
      for (int j = 1; j <= k; ++j) s += get(j) * r[k - j];
      r[k] = -s * inv;
    }
    return TruncatedSeries(std::move(r), order_, ram_);
  }

  // this(inner(t)) for inner(0) = 0.
  TruncatedSeries compose(const TruncatedSeries& inner) const {
    if (inner.get(0) != K{}) throw std::domain_error("compose requires inner(0) = 0");
    int v = inner.valuation();
    int T = order_ >= kOrderInf / 2 ? inner.order_ : std::min(inner.order_, order_ * std::max(v, 1));
    if (v >= inner.order_) T = std::min(order_, inner.order_);
    TruncatedSeries acc = TruncatedSeries::constant(K{}, T);
    // Horner in inner.
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) {
      acc = acc * inner.truncated(T);
      acc = acc.truncated(T);
      acc.add_at(0, c_[k]);
    }
    return acc.truncated(T);
  }

  // Compositional inverse of a series with a(0) = 0, a'(0) != 0.
  TruncatedSeries inverse() const {
    if (get(0) != K{} || get(1) == K{})
      throw std::domain_error("series inverse needs a(0) = 0 and a'(0) != 0");
    int T = order_;
    // Newton-free fixed point: b_k from the coefficient of t^k in a(b(t)) = t.
    std::vector<K> b(T, K{});
    if (T > 1) b[1] = Field<K>::from_int(1) / get(1);
    for (int k = 2; k < T; ++k) {
      TruncatedSeries bs(b, k + 1);
      TruncatedSeries comp = truncated(k + 1).compose(bs);
      b[k] = -comp.get(k) / get(1);
    }
    return TruncatedSeries(std::move(b), T, ram_);
  }

  void add_at(int k, const K& v) {
    if (k >= order_) return;
    if (k >= static_cast<int>(c_.size())) c_.resize(k + 1, K{});
    c_[k] += v;
  }

  K get(int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : K{}; }

 private:
  std::vector<K> c_;
  int order_ = 0;
  int ram_ = 1;
};

// p(x(t), y(t)) for a bivariate polynomial p.
template <class K>
TruncatedSeries<K> compose_branch(const Polynomial<K>& p, const TruncatedSeries<K>& x,
                                  const TruncatedSeries<K>& y) {
  if (p.nvars() != 2) throw std::invalid_argument("compose_branch expects two variables");
  int T = std::min(x.order(), y.order());
  int dx = std::max(p.degree_in(0), 0), dy = std::max(p.degree_in(1), 0);
  std::vector<TruncatedSeries<K>> xp{TruncatedSeries<K>::constant(Field<K>::from_int(1), T)};
  std::vector<TruncatedSeries<K>> yp{TruncatedSeries<K>::constant(Field<K>::from_int(1), T)};
  for (int k = 1; k <= dx; ++k) xp.push_back((xp.back() * x).truncated(T + 64));
  for (int k = 1; k <= dy; ++k) yp.push_back((yp.back() * y).truncated(T + 64));
  TruncatedSeries<K> acc;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    TruncatedSeries<K> term = (xp[e[0]] * yp[e[1]]) * c;
    acc = first ? term : acc + term;
    first = false;
  }
  if (first) return TruncatedSeries<K>::constant(K{}, T);
  return acc;
}

}  // namespace stablekit
