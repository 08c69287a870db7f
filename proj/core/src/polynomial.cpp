#include "stablekit/polynomial.hpp"

namespace stablekit {

namespace {

std::vector<int> resolve_degree(const Poly& p, const std::vector<int>& n) {
  std::vector<int> md = p.multidegree();
  if (n.empty()) return md;
  if (static_cast<int>(n.size()) != p.nvars())
    throw std::invalid_argument("multidegree has wrong length");
  for (int v = 0; v < p.nvars(); ++v)
    if (n[v] < md[v]) throw std::invalid_argument("multidegree below the degree of p");
  return n;
}

}  // namespace

CPoly to_complex(const Poly& p) {
  return p.map_coeffs<std::complex<double>>([](const GaussRat& c) { return c.to_complex(); });
}

Poly reflect_bar(const Poly& p) { return p.conj_coeffs(); }

Poly reflect_tilde(const Poly& p, const std::vector<int>& n) {
  std::vector<int> deg = resolve_degree(p, n);
  Poly r(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    Exponent f{};
    for (int v = 0; v < p.nvars(); ++v) f[v] = deg[v] - e[v];
    r.add_term(f, c.conj());
  }
  return r;
}

Poly cayley_to_halfplane(const Poly& p, const std::vector<int>& n) {
  std::vector<int> deg = resolve_degree(p, n);
  int d = p.nvars();
  const GaussRat I = GaussRat::i();
  // Expand each monomial as prod (1 + i z)^{e} (1 - i z)^{n - e}.
  std::vector<std::vector<Poly>> plus(d), minus(d);
  for (int v = 0; v < d; ++v) {
    Poly z = Poly::variable(d, v);
    Poly one = Poly::constant(d, 1);
    Poly a = one + z * I, b = one - z * I;
    plus[v].push_back(one);
    minus[v].push_back(one);
    for (int k = 1; k <= deg[v]; ++k) {
      plus[v].push_back(plus[v].back() * a);
      minus[v].push_back(minus[v].back() * b);
    }
  }
  Poly r(d);
  for (const auto& [e, c] : p.terms()) {
    Poly term = Poly::constant(d, c);
    for (int v = 0; v < d; ++v) term = term * plus[v][e[v]] * minus[v][deg[v] - e[v]];
    r += term;
  }
  return r;
}

Poly cayley_to_disk(const Poly& P, const std::vector<int>& n) {
  std::vector<int> deg = resolve_degree(P, n);
  int d = P.nvars();
  const GaussRat I = GaussRat::i();
  std::vector<std::vector<Poly>> num(d), den(d);
  for (int v = 0; v < d; ++v) {
    Poly w = Poly::variable(d, v);
    Poly one = Poly::constant(d, 1);
    Poly a = (one - w) * I, b = one + w;
    num[v].push_back(one);
    den[v].push_back(one);
    for (int k = 1; k <= deg[v]; ++k) {
      num[v].push_back(num[v].back() * a);
      den[v].push_back(den[v].back() * b);
    }
  }
  int total = 0;
  for (int v : deg) total += v;
  GaussRat scale = GaussRat(Rational(1, 1) / Rational(mpz_class(1) << total));
  Poly r(d);
  for (const auto& [e, c] : P.terms()) {
    Poly term = Poly::constant(d, c * scale);
    for (int v = 0; v < d; ++v) term = term * num[v][e[v]] * den[v][deg[v] - e[v]];
    r += term;
  }
  return r;
}

Poly rotate(const Poly& p, const std::vector<GaussRat>& tau) {
  Poly r(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    GaussRat s = c;
    for (int v = 0; v < p.nvars(); ++v) s *= tau.at(v).pow(e[v]);
    r.add_term(e, s);
  }
  return r;
}

RealImagSplit real_imag_split(const Poly& p) {
  RealImagSplit s{Poly(p.nvars()), Poly(p.nvars())};
  for (const auto& [e, c] : p.terms()) {
    s.A.add_term(e, GaussRat(c.re()));
    s.B.add_term(e, GaussRat(c.im()));
  }
  return s;
}

bool has_real_coeffs(const Poly& p) {
  for (const auto& [e, c] : p.terms())
    if (!c.is_real()) return false;
  return true;
}

}  // namespace stablekit
