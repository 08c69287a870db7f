#include "stablekit/homog.hpp"

#include <algorithm>
#include <cmath>

#include "stablekit/algebra.hpp"
#include "stablekit/numeric.hpp"

namespace stablekit::homog {

Poly HomogeneousDecomposition::part(int degree) const {
  int k = degree - order;
  if (order == kOrderInf || k < 0 || k >= static_cast<int>(parts.size()))
    return Poly(parts.empty() ? static_cast<int>(center.size()) : parts[0].nvars());
  return parts[k];
}

HomogeneousDecomposition decompose(const Poly& p, const std::vector<GaussRat>& center) {
  if (static_cast<int>(center.size()) != p.nvars())
    throw std::invalid_argument("center dimension does not match the polynomial");
  HomogeneousDecomposition d;
  d.center = center;
  Poly s = p.shift(center);
  if (s.is_zero()) throw std::invalid_argument("zero polynomial");
  d.order = s.lowest_order();
  for (int j = d.order; j <= s.total_degree(); ++j) d.parts.push_back(s.homogeneous_part(j));
  return d;
}

HomogeneousDecomposition decompose(const Poly& p) {
  return decompose(p, std::vector<GaussRat>(p.nvars(), GaussRat(0)));
}

namespace {

bool exact_sqrt(const Rational& q, Rational& out) {
  if (sgn(q) < 0) return false;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  out = Rational(rn, rd);
  out.canonicalize();
  return true;
}

}  // namespace

Normalization normalize_lowest(const Poly& p, const std::vector<GaussRat>& center) {
  HomogeneousDecomposition d = decompose(p, center);
  if (d.order == kOrderInf) throw NormalizationError("zero polynomial has no lowest term");
  const Poly& PM = d.parts[0];
  Normalization n;
  if (has_real_coeffs(PM)) {
    n.mu = 1.0;
    n.mu_exact = GaussRat(1);
    n.scale = GaussRat(1);
  } else {
    GaussRat c0 = PM.leading_term().second;
    for (const auto& [e, c] : PM.terms())
      if (!(c / c0).is_real())
        throw NormalizationError("lowest homogeneous term has no real multiple");
    Rational abs;
    if (exact_sqrt(c0.norm(), abs)) {
      n.mu_exact = c0.conj() / GaussRat(abs);
      n.scale = *n.mu_exact;
    } else {
      // conj(c0) = |c0| mu keeps the arithmetic exact.
      n.scale = c0.conj();
    }
    n.mu = std::conj(c0.to_complex()) / c0.abs();
  }
  n.shifted = p.shift(center) * n.scale;
  n.decomposition = decompose(n.shifted);
  n.decomposition.center = center;
  n.split = real_imag_split(n.shifted);
  n.b_order = n.split.B.lowest_order();
  return n;
}

SlopeProfile tangent_slopes(const Poly& H) {
  if (H.nvars() != 2) throw std::invalid_argument("tangent slopes need a bivariate form");
  if (H.is_zero() || !H.is_homogeneous())
    throw std::invalid_argument("tangent slopes need a nonzero homogeneous polynomial");
  int M = H.total_degree();
  // h[k] = coefficient of z1^{M-k} z2^k.
  std::vector<GaussRat> h(M + 1, GaussRat(0));
  for (const auto& [e, c] : H.terms()) h[e[1]] = c;
  int top = M;
  while (h[top].is_zero()) --top;
  SlopeProfile prof;
  prof.c = h[top];
  prof.infinite_multiplicity = M - top;
  UPoly u(h.begin(), h.begin() + top + 1);

  std::vector<cd> uc;
  for (const auto& x : u) uc.push_back(x.to_complex());
  std::vector<cd> roots = poly_roots(uc);

  // Exact rational roots by deflation; remaining roots stay floating.
  UPoly rest = u;
  std::vector<Slope> finite;
  std::vector<cd> leftover;
  for (cd z : roots) {
    Rational re;
    bool done = false;
    if (std::abs(z.imag()) < 1e-6 && rationalize(z.real(), 1000000, 1e-7 * (1 + std::abs(z)), re)) {
      UPoly lin{GaussRat(-re), GaussRat(1)}, q;
      if (upoly_divide_exact(rest, lin, q)) {
        rest = q;
        Slope s;
        s.value = -re.get_d();
        s.exact = -re;
        finite.push_back(s);
        done = true;
      }
    }
    if (!done) leftover.push_back(z);
  }
  double norm = 0;
  for (const auto& x : u) norm = std::max(norm, x.abs());
  double residual = 0;
  for (cd z : leftover) {
    Slope s;
    s.value = -z;
    if (std::abs(s.value.imag()) <= 1e-12 * (1 + std::abs(s.value))) s.value = s.value.real();
    residual = std::max(residual, std::abs(horner(uc, z)) / norm);
    finite.push_back(s);
  }
  std::sort(finite.begin(), finite.end(), [](const Slope& a, const Slope& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  prof.slopes = finite;
  for (int k = 0; k < prof.infinite_multiplicity; ++k) {
    Slope s;
    s.infinite = true;
    s.value = std::numeric_limits<double>::infinity();
    prof.slopes.push_back(s);
  }
  prof.residual = residual;
  if (residual > 1e-10) throw std::runtime_error("tangent slope roots failed certification");
  return prof;
}

namespace {

bool leq(const Slope& a, const Slope& b, double tol) {
  if (b.infinite) return true;
  if (a.infinite) return false;
  return a.value.real() <= b.value.real() + tol * (1 + std::abs(b.value.real()));
}

bool same(const Slope& a, const Slope& b, double tol) {
  if (a.infinite || b.infinite) return a.infinite && b.infinite;
  return std::abs(a.value - b.value) <= tol * (1 + std::abs(a.value));
}

}  // namespace

InterlacingResult interlacing_check(const Poly& A_M, const Poly& B_next, double tol) {
  InterlacingResult res;
  if (!A_M.is_homogeneous() || !B_next.is_homogeneous() || A_M.is_zero() || B_next.is_zero())
    throw std::invalid_argument("interlacing needs nonzero homogeneous polynomials");
  int M = A_M.total_degree();
  if (B_next.total_degree() != M + 1)
    throw std::invalid_argument("degree of B must exceed the degree of A by one");
  if (!has_real_coeffs(A_M) || !has_real_coeffs(B_next))
    throw std::invalid_argument("interlacing needs real coefficients");
  res.a = tangent_slopes(A_M);
  res.b = tangent_slopes(B_next);
  res.r = res.a.infinite_multiplicity;
  res.s = res.b.infinite_multiplicity;

  std::vector<bool> used(res.b.slopes.size(), false);
  for (const Slope& x : res.a.slopes)
    for (std::size_t j = 0; j < res.b.slopes.size(); ++j)
      if (!used[j] && same(x, res.b.slopes[j], tol)) {
        used[j] = true;
        res.common.push_back(x);
        break;
      }

  for (const auto* prof : {&res.a, &res.b})
    for (const Slope& s : prof->slopes)
      if (!s.is_real(tol)) {
        res.reason = "non-real tangent slopes";
        return res;
      }
  if (res.s != res.r && res.s != res.r + 1) {
    res.reason = "infinite slope multiplicities violate s in {r, r+1}";
    return res;
  }
  const auto& a = res.a.slopes;
  const auto& b = res.b.slopes;
  for (int j = 0; j < M; ++j) {
    if (!leq(b[j], a[j], tol) || !leq(a[j], b[j + 1], tol)) {
      res.reason = "slopes do not interlace";
      return res;
    }
  }
  res.holds = true;
  return res;
}

}  // namespace stablekit::homog
