#pragma once

#include <array>
#include <climits>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablekit/gauss_rational.hpp"

namespace stablekit {

constexpr int kMaxVars = 4;
constexpr int kDegNegInf = INT_MIN;  // degree of the zero polynomial
constexpr int kOrderInf = INT_MAX;   // order of vanishing of the zero polynomial

using Exponent = std::array<int, kMaxVars>;

inline int total_degree(const Exponent& e) {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

// Graded-lex: total degree first, then lexicographic with z1 most significant.
struct GrLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

template <class K>
class Polynomial {
 public:
  using Coeff = K;
  using Terms = std::map<Exponent, K, GrLexLess>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) { check_nvars(nvars); }

  static Polynomial constant(int nvars, const K& c) {
    Polynomial p(nvars);
    p.add_term(Exponent{}, c);
    return p;
  }
  static Polynomial variable(int nvars, int var) {
    Polynomial p(nvars);
    Exponent e{};
    e.at(var) = 1;
    p.add_term(e, Field<K>::from_int(1));
    return p;
  }
  static Polynomial monomial(int nvars, const Exponent& e, const K& c) {
    Polynomial p(nvars);
    p.add_term(e, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  K coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? K{} : it->second;
  }

  // Adds c*z^e, dropping coefficients that become exactly zero.
  void add_term(const Exponent& e, const K& c) {
    for (int v = nvars_; v < kMaxVars; ++v)
      if (e[v] != 0) throw std::invalid_argument("exponent outside variable range");
    if (c == K{}) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == K{}) terms_.erase(it);
    }
  }

  // Drops float coefficients with magnitude <= tol.
  void prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (Field<K>::is_zero(it->second, tol)) it = terms_.erase(it);
      else ++it;
    }
  }

  int total_degree() const {
    return terms_.empty() ? kDegNegInf : stablekit::total_degree(terms_.rbegin()->first);
  }
  int lowest_order() const {
    return terms_.empty() ? kOrderInf : stablekit::total_degree(terms_.begin()->first);
  }
  int degree_in(int var) const {
    int d = kDegNegInf;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
  }
  std::vector<int> multidegree() const {
    std::vector<int> n(nvars_, 0);
    for (const auto& [e, c] : terms_)
      for (int v = 0; v < nvars_; ++v) n[v] = std::max(n[v], e[v]);
    return n;
  }
  // Largest term in graded-lex order.
  std::pair<Exponent, K> leading_term() const {
    if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
    return *terms_.rbegin();
  }

  Polynomial homogeneous_part(int j) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_)
      if (stablekit::total_degree(e) == j) r.terms_.emplace(e, c);
    return r;
  }
  Polynomial truncate_degree(int max_deg) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_)
      if (stablekit::total_degree(e) <= max_deg) r.terms_.emplace(e, c);
    return r;
  }
  bool is_homogeneous() const {
    return terms_.empty() || lowest_order() == total_degree();
  }

  Polynomial derivative(int var) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent f = e;
      f[var] -= 1;
      r.add_term(f, c * Field<K>::from_int(e[var]));
    }
    return r;
  }

  Polynomial conj_coeffs() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, Field<K>::conj(c));
    return r;
  }

  template <class K2, class F>
  Polynomial<K2> map_coeffs(F f) const {
    Polynomial<K2> r(nvars_);
    for (const auto& [e, c] : terms_) r.add_term(e, f(c));
    return r;
  }

  // Same polynomial viewed in more variables.
  Polynomial with_nvars(int n) const {
    if (n < nvars_ && !terms_.empty())
      for (const auto& [e, c] : terms_)
        for (int v = n; v < nvars_; ++v)
          if (e[v]) throw std::invalid_argument("cannot drop a variable that occurs");
    Polynomial r(n);
    r.terms_ = terms_;
    return r;
  }

  // perm[v] = new index of variable v.
  Polynomial permute(const std::vector<int>& perm) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
      Exponent f{};
      for (int v = 0; v < nvars_; ++v) f[perm[v]] = e[v];
      r.add_term(f, c);
    }
    return r;
  }

  template <class T>
  T eval(const std::vector<T>& z) const {
    if (static_cast<int>(z.size()) < nvars_) throw std::invalid_argument("point dimension");
    T acc{};
    for (const auto& [e, c] : terms_) {
      T term = convert<T>(c);
      for (int v = 0; v < nvars_; ++v)
        for (int k = 0; k < e[v]; ++k) term = term * z[v];
      acc = acc + term;
    }
    return acc;
  }

  // Substitutes subs[v] for variable v; result lives in subs[0].nvars() variables.
  Polynomial compose(const std::vector<Polynomial>& subs) const {
    if (static_cast<int>(subs.size()) < nvars_) throw std::invalid_argument("compose arity");
    int out_vars = subs.empty() ? nvars_ : subs[0].nvars();
    std::vector<std::vector<Polynomial>> powers(nvars_);
    auto power = [&](int v, int k) -> const Polynomial& {
      auto& pw = powers[v];
      if (pw.empty()) pw.push_back(Polynomial::constant(out_vars, Field<K>::from_int(1)));
      while (static_cast<int>(pw.size()) <= k) pw.push_back(pw.back() * subs[v]);
      return pw[k];
    };
    Polynomial r(out_vars);
    for (const auto& [e, c] : terms_) {
      Polynomial term = Polynomial::constant(out_vars, c);
      for (int v = 0; v < nvars_; ++v)
        if (e[v]) term = term * power(v, e[v]);
      r += term;
    }
    return r;
  }

  // p(center + z).
  Polynomial shift(const std::vector<K>& center) const {
    std::vector<Polynomial> subs;
    for (int v = 0; v < nvars_; ++v)
      subs.push_back(Polynomial::variable(nvars_, v) + Polynomial::constant(nvars_, center[v]));
    return compose(subs);
  }

  // Coefficients c_k (free of var) with p = sum c_k var^k.
  std::vector<Polynomial> coefficients_in(int var) const {
    int d = degree_in(var);
    std::vector<Polynomial> out(d < 0 ? 0 : d + 1, Polynomial(nvars_));
    for (const auto& [e, c] : terms_) {
      Exponent f = e;
      f[var] = 0;
      out[e[var]].add_term(f, c);
    }
    return out;
  }

  // Univariate coefficient list when only `var` occurs.
  std::vector<K> univariate_coeffs(int var) const {
    int d = degree_in(var);
    std::vector<K> out(d < 0 ? 0 : d + 1, K{});
    for (const auto& [e, c] : terms_) {
      for (int v = 0; v < nvars_; ++v)
        if (v != var && e[v]) throw std::invalid_argument("polynomial is not univariate");
      out[e[var]] = c;
    }
    return out;
  }

  static Polynomial from_univariate(int nvars, int var, const std::vector<K>& c) {
    Polynomial p(nvars);
    for (std::size_t k = 0; k < c.size(); ++k) {
      Exponent e{};
      e[var] = static_cast<int>(k);
      p.add_term(e, c[k]);
    }
    return p;
  }

  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) {
    align(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    align(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const K& s) {
    if (s == K{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const K& s) { return a *= s; }
  friend Polynomial operator*(const K& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    int n = std::max(a.nvars_, b.nvars_);
    Polynomial r(n);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e;
        for (int v = 0; v < kMaxVars; ++v) e[v] = ea[v] + eb[v];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned k) const {
    Polynomial r = Polynomial::constant(nvars_, Field<K>::from_int(1));
    Polynomial b = *this;
    while (k) {
      if (k & 1u) r *= b;
      k >>= 1u;
      if (k) b *= b;
    }
    return r;
  }

  // Largest coefficient magnitude.
  double max_abs_coeff() const {
    double m = 0;
    for (const auto& [e, c] : terms_) m = std::max(m, Field<K>::magnitude(c));
    return m;
  }

 private:
  static void check_nvars(int n) {
    if (n < 0 || n > kMaxVars) throw std::invalid_argument("unsupported number of variables");
  }
  void align(const Polynomial& o) {
    if (o.nvars_ > nvars_) nvars_ = o.nvars_;
  }
  template <class T>
  static T convert(const K& c) {
    if constexpr (std::is_same_v<T, K>) {
      return c;
    } else if constexpr (std::is_same_v<K, GaussRat>) {
      return coerce<T>(c);
    } else {
      return T(c);
    }
  }

  int nvars_;
  Terms terms_;
};

using Poly = Polynomial<GaussRat>;
using CPoly = Polynomial<std::complex<double>>;

CPoly to_complex(const Poly& p);

// p̄(z) = conj(p(z̄)).
Poly reflect_bar(const Poly& p);
// p̃(z) = z^n conj(p(1/z̄)); n defaults to the multidegree of p.
Poly reflect_tilde(const Poly& p, const std::vector<int>& n = {});
// P(z) = prod (1 - i z_j)^{n_j} p((1 + i z)/(1 - i z)); n defaults to the multidegree.
Poly cayley_to_halfplane(const Poly& p, const std::vector<int>& n = {});
// Inverse of cayley_to_halfplane: 2^{-|n|} prod (1 + w_j)^{n_j} P(i(1 - w)/(1 + w)).
Poly cayley_to_disk(const Poly& P, const std::vector<int>& n = {});
// p(tau_1 z_1, ..., tau_d z_d).
Poly rotate(const Poly& p, const std::vector<GaussRat>& tau);

struct RealImagSplit {
  Poly A;  // (p + p̄)/2, real coefficients
  Poly B;  // (p - p̄)/(2i), real coefficients
};
RealImagSplit real_imag_split(const Poly& p);

bool has_real_coeffs(const Poly& p);

}  // namespace stablekit
