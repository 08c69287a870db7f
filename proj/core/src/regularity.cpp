#include "stablekit/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "stablekit/algebra.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/puiseux.hpp"

namespace stablekit::regularity {

namespace {

std::optional<GaussRat> proportional(const Poly& Q, const Poly& P) {
  if (Q.is_zero()) return GaussRat(0);
  auto [e, c] = P.leading_term();
  GaussRat b = Q.coeff(e) / c;
  if (Q == P * b) return b;
  return std::nullopt;
}

RationalPart reduce_part(int j, const Poly& Nj, const Poly& den) {
  RationalPart part;
  part.degree = j;
  if (Nj.is_zero()) {
    part.num = Nj;
    part.den = Poly::constant(den.nvars(), 1);
    part.polynomial = true;
    part.value = Poly(den.nvars());
    return part;
  }
  Poly g = gcd(Nj, den);
  part.num = *divide_exact(Nj, g);
  part.den = *divide_exact(den, g);
  if (part.den.total_degree() == 0) {
    GaussRat c = part.den.coeff(Exponent{});
    part.num = part.num * (GaussRat(1) / c);
    part.den = Poly::constant(den.nvars(), 1);
    part.polynomial = true;
    part.value = part.num;
  }
  return part;
}

}  // namespace

Report analyze_regularity(const Poly& q, const Poly& p, const std::vector<GaussRat>& center,
                          int k_max) {
  int d = std::max(p.nvars(), q.nvars());
  Poly pp = p.with_nvars(d), qq = q.with_nvars(d);
  homog::HomogeneousDecomposition dp = homog::decompose(pp, center);
  homog::HomogeneousDecomposition dq = homog::decompose(qq, center);
  if (dp.order == kOrderInf) throw RegularityError("denominator is identically zero");
  Report r;
  r.center = center;
  r.k_max = k_max;
  r.M = dp.order;
  r.N = dq.order;
  r.nt_bounded = r.N >= r.M;
  r.P_M = dp.part(r.M);
  r.P_next = dp.part(r.M + 1);
  r.Q_next = dq.part(r.M + 1);
  if (!r.nt_bounded) return r;
  r.limit = proportional(dq.part(r.M), r.P_M);
  if (!r.limit) return r;
  const GaussRat b = *r.limit;
  r.directional_num = r.Q_next - r.P_next * b;

  // N_j = Q_{M+j} P_M^{j-1} - sum_{k=1}^{j} P_{M+k} N_{j-k} P_M^{k-1}, F_j = N_j / P_M^j.
  std::vector<Poly> Nn{Poly::constant(d, b)};
  std::vector<Poly> PMpow{Poly::constant(d, 1)};
  r.ck_order = 0;
  Poly jet = Poly::constant(d, b);
  for (int j = 1; j <= k_max; ++j) {
    PMpow.push_back(PMpow.back() * r.P_M);
    Poly Nj = dq.part(r.M + j) * PMpow[j - 1];
    for (int k = 1; k <= j; ++k) {
      Poly Pk = dp.part(r.M + k);
      if (Pk.is_zero() || Nn[j - k].is_zero()) continue;
      Nj -= Pk * Nn[j - k] * PMpow[k - 1];
    }
    Nn.push_back(Nj);
    RationalPart part = reduce_part(j, Nj, PMpow[j]);
    bool ok = part.polynomial;
    if (ok) jet += *part.value;
    r.parts.push_back(std::move(part));
    if (!ok) break;
    r.ck_order = j;
  }
  r.ck_at_least = r.ck_order == k_max;
  r.gradient_exists = !r.parts.empty() ? r.parts[0].polynomial : true;
  r.jet = jet;
  return r;
}

GaussRat directional_derivative(const Report& r, const std::vector<GaussRat>& v) {
  if (!r.limit) throw RegularityError("no non-tangential limit at the center");
  GaussRat den = r.P_M.eval(v);
  if (den.is_zero()) throw RegularityError("lowest homogeneous term vanishes in the direction");
  return r.directional_num.eval(v) / den;
}

cd directional_derivative(const Report& r, const std::vector<cd>& v) {
  if (!r.limit) throw RegularityError("no non-tangential limit at the center");
  cd den = to_complex(r.P_M).eval(v);
  if (std::abs(den) == 0) throw RegularityError("lowest homogeneous term vanishes in the direction");
  return to_complex(r.directional_num).eval(v) / den;
}

GaussRat disk_directional_derivative(const Report& r, const std::vector<GaussRat>& delta) {
  std::vector<GaussRat> v;
  for (const auto& x : delta) v.push_back(-x);
  return directional_derivative(r, v);
}

UcoCrosscheck uco_regularity_crosscheck(const Poly& p, const std::vector<GaussRat>& center) {
  UcoCrosscheck out;
  puiseux::LocalFactorization f = puiseux::puiseux_factorize(p, center);
  puiseux::ContactOrders co = puiseux::contact_orders(f);
  out.K = co.K;
  out.K_min = co.K_min;
  homog::Normalization n = homog::normalize_lowest(p, center);
  int k_max = std::max(1, out.K_min - 1);
  std::vector<GaussRat> origin(p.nvars(), GaussRat(0));
  out.report = analyze_regularity(-n.split.B, n.split.A, origin, k_max);
  out.report.center = center;
  out.ck_order = out.report.ck_order;
  out.ck_at_least = out.report.ck_at_least;
  out.holds = out.ck_order >= out.K_min - 2;
  out.tight = out.ck_order == out.K_min - 2;
  out.vacuous = out.K_min - 2 <= 0;
  out.label = "B^{" + std::to_string(out.K_min / 2) + "} point";
  return out;
}

FanCheck jet_fan_check(const Poly& q, const Poly& p, const Report& r, int m_lo, int m_hi) {
  FanCheck out;
  if (!r.jet) return out;
  int d = r.P_M.nvars();
  // Directions in the upper half-plane; the first group has aperture 2, the second 10.
  const std::vector<GaussRat> comps2{GaussRat(0, 1), GaussRat(Rational(1, 2), 1),
                                     GaussRat(Rational(-1, 2), 1)};
  const std::vector<GaussRat> comps10{GaussRat(3, 1), GaussRat(-3, 1), GaussRat(0, Rational(1, 3))};
  std::vector<std::vector<GaussRat>> dirs;
  for (const auto* comps : {&comps2, &comps10}) {
    std::vector<int> idx(d, 0);
    while (true) {
      std::vector<GaussRat> v;
      for (int k = 0; k < d; ++k) v.push_back((*comps)[idx[k]]);
      dirs.push_back(v);
      int k = 0;
      while (k < d && ++idx[k] == static_cast<int>(comps->size())) idx[k++] = 0;
      if (k == d) break;
    }
  }
  int k = r.ck_order;
  for (int m = m_lo; m <= m_hi; ++m) {
    Rational rad(1, 1);
    rad /= Rational(mpz_class(1) << m);
    double worst = 0;
    for (const auto& v : dirs) {
      std::vector<GaussRat> z(d), w(d);
      for (int i = 0; i < d; ++i) {
        w[i] = v[i] * GaussRat(rad);
        z[i] = r.center[i] + w[i];
      }
      GaussRat pv = p.eval(z);
      if (pv.is_zero()) continue;
      GaussRat diff = q.eval(z) / pv - r.jet->eval(w);
      worst = std::max(worst, diff.abs() / std::pow(rad.get_d(), k + 1));
    }
    out.radii.push_back(rad.get_d());
    out.max_ratio.push_back(worst);
  }
  double first = out.max_ratio.empty() ? 0 : out.max_ratio.front();
  out.bounded = true;
  for (double x : out.max_ratio)
    if (x > 8 * std::max(first, 1e-300) && x > 1e-12) out.bounded = false;
  return out;
}

}  // namespace stablekit::regularity
