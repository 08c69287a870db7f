#include "stablekit/numerator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stablekit/algebra.hpp"

namespace stablekit::numerator {

std::string to_string(CaseTag t) {
  switch (t) {
    case CaseTag::Order1: return "Order1";
    case CaseTag::RepeatedSegments: return "RepeatedSegments";
    case CaseTag::DoublePoint: return "DoublePoint";
    case CaseTag::OrdinaryMultiplePoint: return "OrdinaryMultiplePoint";
    case CaseTag::General: return "General";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "Bounded";
    case Verdict::Unbounded: return "Unbounded";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

using cld = std::complex<long double>;

constexpr double kSegmentTol = 1e-8;

Poly z1_power(int k) { return Poly::monomial(2, Exponent{k, 0, 0, 0}, 1); }
CPoly z1_power_f(int k) { return CPoly::monomial(2, Exponent{k, 0, 0, 0}, cd(1)); }

Poly linear_factor(const Segment& s) { return Poly::variable(2, 1) + *s.q; }
CPoly linear_factor_f(const Segment& s) {
  CPoly w = CPoly::variable(2, 1);
  for (std::size_t k = 0; k < s.qf.size(); ++k) w.add_term(Exponent{static_cast<int>(k), 0, 0, 0}, cd(s.qf[k]));
  return w;
}

bool same_q(const Segment& a, const Segment& b, bool exact) {
  if (exact) return *a.q == *b.q;
  std::size_t n = std::max(a.qf.size(), b.qf.size());
  for (std::size_t k = 0; k < n; ++k) {
    double x = k < a.qf.size() ? a.qf[k] : 0, y = k < b.qf.size() ? b.qf[k] : 0;
    if (std::abs(x - y) > kSegmentTol * (1 + std::abs(x))) return false;
  }
  return true;
}

// Order of vanishing at 0 of q_a - q_b.
int difference_order(const Segment& a, const Segment& b, bool exact) {
  if (exact) {
    Poly d = *a.q - *b.q;
    return d.lowest_order();
  }
  std::size_t n = std::max(a.qf.size(), b.qf.size());
  for (std::size_t k = 0; k < n; ++k) {
    double x = k < a.qf.size() ? a.qf[k] : 0, y = k < b.qf.size() ? b.qf[k] : 0;
    if (std::abs(x - y) > kSegmentTol * (1 + std::abs(x))) return static_cast<int>(k);
  }
  return kOrderInf;
}

// Expanded generators of prod_j (w_j, z1^{c_j})^{M_j}.
template <class P, class W, class Z>
std::vector<P> product_generators(const IdealPresentation& I, W factor, Z zpow) {
  std::vector<P> gens{P::constant(2, typename P::Coeff(1))};
  for (const Segment& s : I.segments) {
    std::vector<P> pw;  // w^a z1^{c (M - a)}
    P w = factor(s);
    for (int a = 0; a <= s.multiplicity; ++a)
      pw.push_back(w.pow(a) * zpow(s.cutoff * (s.multiplicity - a)));
    std::vector<P> next;
    for (const P& g : gens)
      for (const P& h : pw) next.push_back(g * h);
    gens = std::move(next);
  }
  return gens;
}

template <class P, class W, class Z>
std::vector<P> case_generators(const IdealPresentation& I, W factor, Z zpow) {
  const auto& S = I.segments;
  std::vector<P> gens;
  switch (I.tag) {
    case CaseTag::Order1:
      gens = {factor(S[0]), zpow(S[0].cutoff)};
      break;
    case CaseTag::RepeatedSegments: {
      std::vector<int> c;
      for (const Segment& s : S)
        for (int k = 0; k < s.multiplicity; ++k) c.push_back(s.cutoff);
      std::sort(c.begin(), c.end());
      int M = static_cast<int>(c.size()), Sk = 0;
      P w = factor(S[0]);
      for (int k = 0; k <= M; ++k) {
        if (k > 0) Sk += c[k - 1];
        gens.push_back(zpow(Sk) * w.pow(M - k));
      }
      break;
    }
    case CaseTag::DoublePoint: {
      const Segment& s1 = S[0];
      const Segment& s2 = S.size() > 1 ? S[1] : S[0];
      gens = {factor(s1) * factor(s2), zpow(s1.cutoff) * factor(s2), zpow(s2.cutoff + I.N)};
      break;
    }
    case CaseTag::OrdinaryMultiplePoint: {
      int M = static_cast<int>(S.size());
      P all = P::constant(2, typename P::Coeff(1));
      for (const Segment& s : S) all = all * factor(s);
      gens.push_back(all);
      for (int n = 1; n <= M; ++n) {
        P g = zpow(S[n - 1].cutoff + n - 1);
        for (int j = n + 1; j <= M; ++j) g = g * factor(S[j - 1]);
        gens.push_back(g);
      }
      break;
    }
    case CaseTag::General:
      gens = product_generators<P>(I, factor, zpow);
      break;
  }
  return gens;
}

// f = f_0 + f_1 w_{o0} + f_2 w_{o0} w_{o1} + ... with w_j = z2 + q_j; each f_n
// is g_n(z1, -q_{o_n}) and g_{n+1} = (g_n - f_n) / w_{o_n}.
template <class K>
std::vector<Polynomial<K>> iterated_division(const Polynomial<K>& f,
                                             const std::vector<Polynomial<K>>& qs) {
  std::vector<Polynomial<K>> out;
  Polynomial<K> g = f.with_nvars(2);
  for (const auto& q : qs) {
    Polynomial<K> a = -q;
    auto c = g.coefficients_in(1);
    int d = static_cast<int>(c.size()) - 1;
    if (d < 0) {
      out.push_back(Polynomial<K>(2));
      g = Polynomial<K>(2);
      continue;
    }
    std::vector<Polynomial<K>> b(std::max(d, 0), Polynomial<K>(2));
    if (d >= 1) {
      b[d - 1] = c[d];
      for (int k = d - 1; k >= 1; --k) b[k - 1] = c[k] + a * b[k];
    }
    Polynomial<K> rem = d >= 1 ? c[0] + a * b[0] : c[0];
    out.push_back(rem);
    Polynomial<K> next(2);
    for (int k = 0; k < d; ++k) next += b[k] * Polynomial<K>::monomial(2, Exponent{0, k, 0, 0}, Field<K>::from_int(1));
    g = next;
  }
  return out;
}

template <class K>
Polynomial<K> truncate_z1(const Polynomial<K>& p, int deg) {
  Polynomial<K> r(p.nvars());
  for (const auto& [e, c] : p.terms())
    if (e[0] < deg) r.add_term(e, c);
  return r;
}

// Reduces h modulo (z1^S, W) with W monic in z2 of degree Mt.
Poly reduce_finite(const Poly& h, const Poly& W, int S, int Mt) {
  Poly r = truncate_z1(h, S);
  auto wc = W.coefficients_in(1);
  while (!r.is_zero() && r.degree_in(1) >= Mt) {
    int d = r.degree_in(1);
    Poly lead = r.coefficients_in(1)[d];
    r -= lead * Poly::monomial(2, Exponent{0, d - Mt, 0, 0}, 1) * W;
    r = truncate_z1(r, S);
  }
  return r;
}

std::vector<GaussRat> to_vector(const Poly& r, int S, int Mt) {
  std::vector<GaussRat> v(static_cast<std::size_t>(S) * Mt, GaussRat(0));
  for (const auto& [e, c] : r.terms()) v[e[0] + S * e[1]] = c;
  return v;
}

struct FiniteModel {
  int S = 0, Mt = 0;
  Poly W;
  QMatrix columns;  // each entry is a column vector
};

FiniteModel finite_model(const IdealPresentation& I) {
  if (!I.exact) throw NumeratorError("finite quotient model needs exact segments");
  FiniteModel m;
  m.W = Poly::constant(2, 1);
  for (const Segment& s : I.segments) {
    m.S += s.cutoff * s.multiplicity;
    m.Mt += s.multiplicity;
    m.W = m.W * linear_factor(s).pow(s.multiplicity);
  }
  auto gens = product_generators<Poly>(I, [](const Segment& s) { return linear_factor(s); }, z1_power);
  for (const Poly& g : gens)
    for (int b = 0; b < m.Mt; ++b)
      for (int a = 0; a < m.S; ++a) {
        Poly h = reduce_finite(g * Poly::monomial(2, Exponent{a, b, 0, 0}, 1), m.W, m.S, m.Mt);
        if (!h.is_zero()) m.columns.push_back(to_vector(h, m.S, m.Mt));
      }
  return m;
}

int rank_of(const QMatrix& cols, int rows) {
  if (cols.empty()) return 0;
  QMatrix m(rows, std::vector<GaussRat>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < rows; ++i) m[i][j] = cols[j][i];
  int n = static_cast<int>(cols.size());
  return n - static_cast<int>(nullspace(m, n).size());
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  int n = static_cast<int>(x.size());
  if (n < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

IdealPresentation segment_ideal(const puiseux::LocalFactorization& f) {
  if (f.z1_power > 0) throw NumeratorError("p has a factor z1 at the center");
  IdealPresentation I;
  I.exact = f.exact;
  std::vector<Segment> raw;
  for (const auto& b : f.branches) {
    if (b.type != puiseux::BranchType::Pure)
      throw NumeratorError("branch is not of pure type: " + b.note);
    Segment s;
    s.cutoff = b.cutoff;
    s.multiplicity = b.ramification;
    s.qf = b.segment;
    if (b.segment_exact) s.q = b.segment_poly(2);
    else I.exact = false;
    raw.push_back(std::move(s));
  }
  if (raw.empty()) throw NumeratorError("no branches at the center");
  for (Segment& s : raw) {
    bool merged = false;
    for (Segment& t : I.segments)
      if (t.cutoff == s.cutoff && same_q(t, s, I.exact)) {
        t.multiplicity += s.multiplicity;
        merged = true;
        break;
      }
    if (!merged) I.segments.push_back(s);
  }
  std::stable_sort(I.segments.begin(), I.segments.end(), [](const Segment& a, const Segment& b) {
    if (a.cutoff != b.cutoff) return a.cutoff < b.cutoff;
    return a.qf < b.qf;
  });

  const auto& S = I.segments;
  int total = 0;
  bool all_simple = true;
  for (const Segment& s : S) {
    total += s.multiplicity;
    all_simple = all_simple && s.multiplicity == 1;
  }
  bool identical = true;
  for (const Segment& s : S) identical = identical && same_q(s, S[0], I.exact);
  bool ordinary = all_simple && S.size() >= 2;
  for (std::size_t a = 0; a < S.size() && ordinary; ++a)
    for (std::size_t b = a + 1; b < S.size(); ++b)
      if (difference_order(S[a], S[b], I.exact) != 1) ordinary = false;

  if (total == 1) I.tag = CaseTag::Order1;
  else if (identical) I.tag = CaseTag::RepeatedSegments;
  else if (total == 2) I.tag = CaseTag::DoublePoint;
  else if (ordinary) I.tag = CaseTag::OrdinaryMultiplePoint;
  else I.tag = CaseTag::General;

  switch (I.tag) {
    case CaseTag::Order1:
      I.division_order = {0};
      I.bounds = {S[0].cutoff};
      break;
    case CaseTag::RepeatedSegments: {
      std::vector<int> c;
      for (const Segment& s : S)
        for (int k = 0; k < s.multiplicity; ++k) c.push_back(s.cutoff);
      std::sort(c.begin(), c.end());
      int M = static_cast<int>(c.size());
      std::vector<int> Sk(M + 1, 0);
      for (int k = 1; k <= M; ++k) Sk[k] = Sk[k - 1] + c[k - 1];
      for (int n = 0; n < M; ++n) {
        I.division_order.push_back(0);
        I.bounds.push_back(Sk[M - n]);
      }
      break;
    }
    case CaseTag::DoublePoint:
      I.K = difference_order(S[0], S[1], I.exact);
      I.N = std::min(S[0].cutoff, I.K);
      I.division_order = {1, 0};
      I.bounds = {S[1].cutoff + I.N, S[0].cutoff};
      break;
    case CaseTag::OrdinaryMultiplePoint: {
      int M = static_cast<int>(S.size());
      for (int n = 0; n < M; ++n) {
        I.division_order.push_back(M - 1 - n);
        I.bounds.push_back(S[M - n - 1].cutoff + M - n - 1);
      }
      break;
    }
    case CaseTag::General:
      break;
  }

  auto zf = [](const Segment& s) { return linear_factor_f(s); };
  I.generators_f = case_generators<CPoly>(I, zf, z1_power_f);
  if (I.exact) {
    auto ze = [](const Segment& s) { return linear_factor(s); };
    I.generators = case_generators<Poly>(I, ze, z1_power);
  }
  return I;
}

Poly surrogate_poly(const IdealPresentation& ideal) {
  if (!ideal.exact) throw NumeratorError("surrogate polynomial needs exact segments");
  Poly r = Poly::constant(2, 1);
  for (const Segment& s : ideal.segments)
    r = r * (linear_factor(s) + Poly::monomial(2, Exponent{s.cutoff, 0, 0, 0}, GaussRat::i()))
                .pow(s.multiplicity);
  return r;
}

CPoly surrogate_cpoly(const IdealPresentation& ideal) {
  CPoly r = CPoly::constant(2, cd(1));
  for (const Segment& s : ideal.segments)
    r = r * (linear_factor_f(s) + CPoly::monomial(2, Exponent{s.cutoff, 0, 0, 0}, cd(0, 1)))
                .pow(s.multiplicity);
  return r;
}

Poly surrogate_poly(const puiseux::LocalFactorization& f) { return surrogate_poly(segment_ideal(f)); }

NormalForm reduce_mod_ideal(const Poly& f, const IdealPresentation& ideal, double tol) {
  if (ideal.tag == CaseTag::General)
    throw NumeratorError("no normal form for the general case");
  NormalForm nf;
  nf.tag = ideal.tag;
  nf.bounds = ideal.bounds;
  nf.exact = ideal.exact;
  for (int b : nf.bounds) nf.dimension += b;
  if (ideal.exact) {
    std::vector<Poly> qs;
    for (int j : ideal.division_order) qs.push_back(*ideal.segments[j].q);
    auto coeffs = iterated_division(f, qs);
    nf.residual_zero = true;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
      Poly c = truncate_z1(coeffs[n], nf.bounds[n]);
      nf.residual_zero = nf.residual_zero && c.is_zero();
      std::vector<cd> cf(nf.bounds[n], cd(0));
      for (const auto& [e, v] : c.terms()) cf[e[0]] = v.to_complex();
      nf.coefficients_f.push_back(std::move(cf));
      nf.coefficients.push_back(std::move(c));
    }
    return nf;
  }
  CPoly ff = to_complex(f);
  std::vector<CPoly> qs;
  for (int j : ideal.division_order) qs.push_back(linear_factor_f(ideal.segments[j]) - CPoly::variable(2, 1));
  auto coeffs = iterated_division(ff, qs);
  double scale = std::max(1.0, ff.max_abs_coeff());
  nf.residual_zero = true;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    std::vector<cd> cf(nf.bounds[n], cd(0));
    for (const auto& [e, v] : coeffs[n].terms())
      if (e[0] < nf.bounds[n]) cf[e[0]] = v;
    for (const cd& v : cf)
      if (std::abs(v) > tol * scale) nf.residual_zero = false;
    nf.coefficients_f.push_back(std::move(cf));
  }
  return nf;
}

bool ideal_contains(const Poly& f, const IdealPresentation& ideal) {
  FiniteModel m = finite_model(ideal);
  Poly r = reduce_finite(f.with_nvars(2), m.W, m.S, m.Mt);
  if (r.is_zero()) return true;
  int rows = m.S * m.Mt;
  int base = rank_of(m.columns, rows);
  QMatrix ext = m.columns;
  ext.push_back(to_vector(r, m.S, m.Mt));
  return rank_of(ext, rows) == base;
}

int quotient_dimension(const IdealPresentation& ideal) {
  FiniteModel m = finite_model(ideal);
  int rows = m.S * m.Mt;
  return rows - rank_of(m.columns, rows);
}

BoundednessReport is_locally_bounded(const Poly& f, const Poly& p,
                                     const std::vector<GaussRat>& center) {
  BoundednessReport rep;
  puiseux::LocalFactorization fact = puiseux::puiseux_factorize(p, center);
  rep.ideal = segment_ideal(fact);
  const IdealPresentation& I = rep.ideal;
  Poly fs = f.with_nvars(2).shift(center);
  Poly ps = p.shift(center);

  bool member = false;
  if (I.tag != CaseTag::General) {
    rep.normal_form = reduce_mod_ideal(fs, I);
    member = rep.normal_form.residual_zero;
    rep.verdict = member ? Verdict::Bounded : Verdict::Unbounded;
    rep.reason = member ? "normal form vanishes" : "non-zero normal-form coefficient";
  } else if (I.exact) {
    rep.normal_form.tag = CaseTag::General;
    rep.normal_form.exact = true;
    member = ideal_contains(fs, I);
    rep.normal_form.residual_zero = member;
    rep.verdict = member ? Verdict::Bounded : Verdict::Unknown;
    rep.conjectural = !member;
    rep.reason = member ? "numerator lies in the segment ideal"
                        : "general case: membership fails, boundedness is conjectural";
  } else {
    rep.verdict = Verdict::Unknown;
    rep.conjectural = true;
    rep.reason = "general case with floating segments";
  }

  // Witness curves z2 = t z1^{2L} - q_j(z1) for real z1 = 2^{-k}.
  CPoly fc = to_complex(fs), pc = to_complex(ps);
  auto ratio_at = [&](const Segment& s, int k, int t) -> double {
    if (I.exact) {
      Rational x(1, 1);
      x /= Rational(mpz_class(1) << k);
      GaussRat z1(x);
      GaussRat z2 = GaussRat(Rational(t)) * z1.pow(s.cutoff) - s.q->eval(std::vector<GaussRat>{z1, GaussRat(0)});
      GaussRat pv = ps.eval(std::vector<GaussRat>{z1, z2});
      if (pv.is_zero()) return std::numeric_limits<double>::infinity();
      return (fs.eval(std::vector<GaussRat>{z1, z2}) / pv).abs();
    }
    long double x = std::ldexp(1.0L, -k);
    cld z1(x, 0), z2(t * std::pow(x, static_cast<long double>(s.cutoff)), 0);
    for (std::size_t j = 0; j < s.qf.size(); ++j) z2 -= static_cast<long double>(s.qf[j]) * std::pow(x, static_cast<long double>(j));
    std::vector<cld> z{z1, z2};
    auto to_ld = [](const CPoly& q) {
      return q.map_coeffs<cld>([](const cd& c) { return cld(c.real(), c.imag()); });
    };
    cld pv = to_ld(pc).eval(z);
    return static_cast<double>(std::abs(to_ld(fc).eval(z) / pv));
  };
  int k_lo = 4, k_hi = I.exact ? 14 : 9;
  for (std::size_t j = 0; j < I.segments.size(); ++j)
    for (int t : {0, 1}) {
      CurveSample cs;
      cs.segment = static_cast<int>(j);
      cs.t = t;
      cs.curve = "z2 = " + std::to_string(t) + " z1^" + std::to_string(I.segments[j].cutoff) + " - q_" +
                 std::to_string(j + 1) + "(z1)";
      for (int k = k_lo; k <= k_hi; ++k) {
        cs.x.push_back(std::ldexp(1.0, -k));
        cs.ratio.push_back(ratio_at(I.segments[j], k, t));
      }
      cs.slope = fit_slope(cs.x, cs.ratio);
      rep.curves.push_back(std::move(cs));
    }
  double steepest = 0;
  for (std::size_t c = 0; c < rep.curves.size(); ++c)
    if (rep.curves[c].slope < steepest) {
      steepest = rep.curves[c].slope;
      rep.witness = static_cast<int>(c);
    }

  // Non-tangential fan in the upper half-plane.
  const std::vector<cd> dirs{{0, 1}, {0.5, 1}, {-0.5, 1}, {3, 1}, {-3, 1}};
  auto fan_sup = [&](int m_lo, int m_hi) {
    double sup = 0;
    for (int m = m_lo; m <= m_hi; ++m) {
      double r = std::ldexp(1.0, -m);
      for (const cd& a : dirs)
        for (const cd& b : dirs) {
          std::vector<cd> z{a * r, b * r};
          cd pv = pc.eval(z);
          if (std::abs(pv) > 0) sup = std::max(sup, std::abs(fc.eval(z) / pv));
        }
    }
    return sup;
  };
  rep.ar_sup_coarse = fan_sup(3, 6);
  rep.ar_sup_fine = fan_sup(7, 10);

  const double kFlat = -0.1;
  bool curves_flat = steepest > kFlat;
  bool fan_stable = rep.ar_sup_fine <= 2 * rep.ar_sup_coarse + 1e-12;
  switch (rep.verdict) {
    case Verdict::Bounded: rep.sampling_agrees = curves_flat && fan_stable; break;
    case Verdict::Unbounded: rep.sampling_agrees = !curves_flat; break;
    case Verdict::Unknown: rep.sampling_agrees = true; break;
  }
  return rep;
}

}  // namespace stablekit::numerator
