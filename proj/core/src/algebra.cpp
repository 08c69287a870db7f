#include "stablekit/algebra.hpp"

#include <stdexcept>

namespace stablekit {

namespace {

bool divides(const Exponent& d, const Exponent& e) {
  for (int v = 0; v < kMaxVars; ++v)
    if (d[v] > e[v]) return false;
  return true;
}

Exponent minus(const Exponent& e, const Exponent& d) {
  Exponent r;
  for (int v = 0; v < kMaxVars; ++v) r[v] = e[v] - d[v];
  return r;
}

int main_variable(const Poly& a, const Poly& b) {
  int var = -1;
  for (const Poly* p : {&a, &b})
    for (const auto& [e, c] : p->terms())
      for (int v = 0; v < kMaxVars; ++v)
        if (e[v]) var = std::max(var, v);
  return var;
}

Poly content(const std::vector<Poly>& coeffs) {
  Poly g;
  bool have = false;
  for (const Poly& c : coeffs) {
    if (c.is_zero()) continue;
    g = have ? gcd(g, c) : make_monic(c);
    have = true;
  }
  return g;
}

Poly primitive_part(const Poly& p, int var) {
  if (p.is_zero()) return p;
  Poly c = content(p.coefficients_in(var));
  auto q = divide_exact(p, c);
  if (!q) throw std::logic_error("content does not divide polynomial");
  return *q;
}

Poly pseudo_remainder(const Poly& a, const Poly& b, int var) {
  int db = b.degree_in(var);
  Poly lcb = b.coefficients_in(var)[db];
  Poly r = a;
  int nv = std::max(a.nvars(), b.nvars());
  while (!r.is_zero() && r.degree_in(var) >= db) {
    int dr = r.degree_in(var);
    Poly lcr = r.coefficients_in(var)[dr];
    Exponent shift{};
    shift[var] = dr - db;
    r = lcb * r - lcr * Poly::monomial(nv, shift, 1) * b;
  }
  return r;
}

}  // namespace

DivisionResult divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  int nv = std::max(a.nvars(), b.nvars());
  auto [lb, cb] = b.leading_term();
  Poly q(nv), rem(nv), r = a.with_nvars(nv);
  while (!r.is_zero()) {
    auto [lr, cr] = r.leading_term();
    if (divides(lb, lr)) {
      Poly m = Poly::monomial(nv, minus(lr, lb), cr / cb);
      q += m;
      r -= m * b;
    } else {
      Poly m = Poly::monomial(nv, lr, cr);
      rem += m;
      r -= m;
    }
  }
  return {q, rem};
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  int nv = std::max(a.nvars(), b.nvars());
  auto [lb, cb] = b.leading_term();
  Poly q(nv), r = a.with_nvars(nv);
  while (!r.is_zero()) {
    auto [lr, cr] = r.leading_term();
    if (!divides(lb, lr)) return std::nullopt;
    Poly m = Poly::monomial(nv, minus(lr, lb), cr / cb);
    q += m;
    r -= m * b;
  }
  return q;
}

Poly make_monic(const Poly& p) {
  if (p.is_zero()) return p;
  return p * (GaussRat(1) / p.leading_term().second);
}

Poly gcd(const Poly& a_in, const Poly& b_in) {
  int nv = std::max(a_in.nvars(), b_in.nvars());
  Poly a = a_in.with_nvars(nv), b = b_in.with_nvars(nv);
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  int var = main_variable(a, b);
  if (var < 0) return Poly::constant(nv, 1);
  Poly ca = content(a.coefficients_in(var));
  Poly cb = content(b.coefficients_in(var));
  Poly g_content = gcd(ca, cb);
  Poly A = *divide_exact(a, ca), B = *divide_exact(b, cb);
  if (A.degree_in(var) < B.degree_in(var)) std::swap(A, B);
  while (!B.is_zero()) {
    Poly R = pseudo_remainder(A, B, var);
    A = B;
    B = primitive_part(R, var);
  }
  return make_monic(g_content * primitive_part(A, var));
}

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

bool upoly_divide_exact(const UPoly& a_in, const UPoly& b_in, UPoly& q) {
  UPoly a = a_in, b = b_in;
  trim(a);
  trim(b);
  if (b.empty()) throw std::domain_error("division by the zero polynomial");
  if (a.empty()) {
    q.clear();
    return true;
  }
  if (a.size() < b.size()) return false;
  q.assign(a.size() - b.size() + 1, GaussRat(0));
  for (std::size_t k = q.size(); k-- > 0;) {
    GaussRat c = a[k + b.size() - 1] / b.back();
    q[k] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return a.empty();
}

GaussRat upoly_eval(const UPoly& p, const GaussRat& x) {
  GaussRat acc(0);
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

GaussRat determinant(QMatrix m) {
  std::size_t n = m.size();
  GaussRat det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return GaussRat(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    GaussRat inv = GaussRat(1) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      GaussRat f = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

std::vector<std::vector<GaussRat>> nullspace(QMatrix m, int ncols) {
  std::size_t rows = m.size();
  std::vector<int> pivot_cols;
  std::size_t r = 0;
  for (int c = 0; c < ncols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    GaussRat inv = GaussRat(1) / m[r][c];
    for (int k = 0; k < ncols; ++k) m[r][k] *= inv;
    for (std::size_t o = 0; o < rows; ++o) {
      if (o == r || m[o][c].is_zero()) continue;
      GaussRat f = m[o][c];
      for (int k = 0; k < ncols; ++k) m[o][k] -= f * m[r][k];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<GaussRat>> basis;
  for (int free = 0; free < ncols; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    std::vector<GaussRat> v(ncols, GaussRat(0));
    v[free] = GaussRat(1);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -m[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

Poly resultant(const Poly& p, const Poly& q, int var) {
  if (p.nvars() != 2 || q.nvars() != 2) throw std::invalid_argument("resultant expects two variables");
  int other = 1 - var;
  int dp = p.degree_in(var), dq = q.degree_in(var);
  if (dp < 0 || dq < 0) return Poly(2);
  int bound = std::max(0, p.degree_in(other)) * dq + std::max(0, q.degree_in(other)) * dp;
  auto cp = p.coefficients_in(var), cq = q.coefficients_in(var);
  std::vector<GaussRat> xs, ys;
  for (int k = 0; k <= bound; ++k) {
    GaussRat x(k);
    std::vector<GaussRat> pt(2, GaussRat(0));
    pt[other] = x;
    int n = dp + dq;
    QMatrix s(n, std::vector<GaussRat>(n, GaussRat(0)));
    if (n == 0) {
      xs.push_back(x);
      ys.push_back(GaussRat(1));
      continue;
    }
    for (int r = 0; r < dq; ++r)
      for (int j = 0; j <= dp; ++j) s[r][r + dp - j] = cp[j].eval(pt);
    for (int r = 0; r < dp; ++r)
      for (int j = 0; j <= dq; ++j) s[dq + r][r + dq - j] = cq[j].eval(pt);
    xs.push_back(x);
    ys.push_back(determinant(std::move(s)));
  }
  // Newton divided differences.
  std::size_t n = xs.size();
  std::vector<GaussRat> coef = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  Poly t = Poly::variable(2, other);
  Poly acc(2);
  for (std::size_t k = n; k-- > 0;) {
    acc = acc * (t - Poly::constant(2, xs[k])) + Poly::constant(2, coef[k]);
  }
  return acc;
}

}  // namespace stablekit
