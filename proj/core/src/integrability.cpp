#include "stablekit/integrability.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "stablekit/algebra.hpp"
#include "stablekit/numerator.hpp"
#include "stablekit/numeric.hpp"
#include "stablekit/puiseux.hpp"
#include "stablekit/series.hpp"

namespace stablekit::integrability {

double Index::to_double() const {
  return infinite ? std::numeric_limits<double>::infinity() : value.get_d();
}

std::string Index::to_string() const { return infinite ? "inf" : value.get_str(); }

bool operator<(const Index& a, const Index& b) {
  if (a.infinite || b.infinite) return !a.infinite && b.infinite;
  return a.value < b.value;
}

bool operator==(const Index& a, const Index& b) {
  return a.infinite == b.infinite && (a.infinite || a.value == b.value);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "Finite";
    case Verdict::Divergent: return "Divergent";
    case Verdict::Borderline: return "Borderline";
  }
  return "?";
}

namespace {

using ld = long double;
using cld = std::complex<long double>;
using LPoly = Polynomial<cld>;

constexpr long kMaxDen = 100000;

Poly univariate_at(const Poly& p, int var, const GaussRat& value) {
  std::vector<Poly> subs(2);
  subs[var] = Poly::constant(2, value);
  subs[1 - var] = Poly::variable(2, 1 - var);
  return p.compose(subs);
}

bool on_circle(const GaussRat& z) { return z.norm() == 1; }

// Unit-circle roots of a univariate exact polynomial, rationalized and
// verified exactly. Roots that fail verification are counted.
std::vector<GaussRat> circle_roots(const Poly& u, int var, int& unresolved) {
  std::vector<GaussRat> out;
  if (u.is_zero() || u.total_degree() <= 0) return out;
  Poly sq = u;
  Poly g = gcd(u, u.derivative(var));
  if (g.total_degree() > 0) sq = *divide_exact(u, g);
  UPoly c = sq.univariate_coeffs(var);
  std::vector<cd> cf;
  for (const auto& x : c) cf.push_back(x.to_complex());
  for (const cd& r : poly_roots(cf)) {
    if (std::abs(std::abs(r) - 1) > 1e-6) continue;
    GaussRat z;
    if (rationalize(r, kMaxDen, 1e-9, z) && on_circle(z) && upoly_eval(c, z).is_zero()) {
      if (std::find(out.begin(), out.end(), z) == out.end()) out.push_back(z);
    } else {
      ++unresolved;
    }
  }
  return out;
}

// p rotated so tau becomes (1,1), then mapped to the upper half-plane.
Poly halfplane_image(const Poly& p, const std::vector<GaussRat>& tau, const std::vector<int>& n = {}) {
  return cayley_to_halfplane(rotate(p, tau), n);
}

struct LocalData {
  Poly P;       // half-plane image of p at tau
  Poly Ptilde;  // half-plane image of the reflection
  puiseux::LocalFactorization fact;
  int order = 0;
};

LocalData local_data(const Poly& p, const std::vector<GaussRat>& tau, bool swap, int truncation) {
  LocalData d;
  Poly pr = rotate(p, tau);
  std::vector<int> n = pr.multidegree();
  d.P = cayley_to_halfplane(pr, n);
  d.Ptilde = cayley_to_halfplane(reflect_tilde(pr, n), n);
  if (swap) {
    d.P = d.P.permute({1, 0});
    d.Ptilde = d.Ptilde.permute({1, 0});
  }
  d.order = d.P.lowest_order();
  puiseux::Options opts;
  opts.truncation = truncation;
  d.fact = puiseux::puiseux_factorize(d.P, opts);
  return d;
}

// Vanishing order of Q along one branch (x, y) = (t^m, -phi(t)).
int branch_order(const Poly& Q, const puiseux::Branch& b, bool& truncated) {
  int m = b.ramification, T = b.order;
  truncated = false;
  if (b.series_exact) {
    std::vector<GaussRat> x(m + 1, GaussRat(0));
    x[m] = GaussRat(1);
    std::vector<GaussRat> y;
    for (const auto& c : *b.series_exact) y.push_back(-c);
    TruncatedSeries<GaussRat> xs(x, T), ys(y, T);
    auto v = compose_branch(Q, xs, ys);
    int val = v.valuation();
    if (val >= v.order()) truncated = true;
    return val;
  }
  std::vector<cd> x(m + 1, cd(0));
  x[m] = 1;
  std::vector<cd> y;
  for (const auto& c : b.series) y.push_back(-c);
  TruncatedSeries<cd> xs(x, T), ys(y, T);
  auto v = compose_branch(to_complex(Q), xs, ys);
  double scale = 1;
  for (const auto& c : v.coeffs()) scale = std::max(scale, std::abs(c));
  int val = v.valuation(1e-7 * scale);
  if (val >= v.order()) truncated = true;
  return val;
}

int multiplicity_from(const LocalData& d, bool& truncated) {
  int N = 0;
  truncated = false;
  for (const auto& b : d.fact.branches) {
    bool t = false;
    N += branch_order(d.Ptilde, b, t);
    truncated = truncated || t;
  }
  // Monomial factors of P meet the reflection along the axes.
  if (d.fact.z2_power > 0) {
    Poly axis = univariate_at(d.Ptilde, 1, GaussRat(0));
    N += d.fact.z2_power * (axis.is_zero() ? kOrderInf / 4 : axis.lowest_order());
  }
  return N;
}

std::vector<Index> indices_for(int K) {
  std::vector<Index> out;
  for (int n = 0; n < K; ++n) out.push_back({Rational(K + 1, K - n), false});
  return out;
}

struct Rule {
  std::vector<ld> x, w;  // on [-1, 1]
};

template <int N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<ld, N>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.x.push_back(a[i]);
    r.w.push_back(w[i]);
    if (a[i] != 0) {
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
    }
  }
  return r;
}

Rule rule_for(int nodes) {
  switch (nodes) {
    case 4: return make_rule<4>();
    case 8: return make_rule<8>();
    case 12: return make_rule<12>();
    case 16: return make_rule<16>();
    case 20: return make_rule<20>();
    default: throw std::invalid_argument("supported node counts are 4, 8, 12, 16, 20");
  }
}

LPoly to_ld(const Poly& p) {
  return p.map_coeffs<cld>([](const GaussRat& c) {
    return cld(static_cast<ld>(c.re().get_d()), static_cast<ld>(c.im().get_d()));
  });
}

}  // namespace

std::vector<std::vector<GaussRat>> locate_torus_zeros(const Poly& p, int* unresolved) {
  if (p.nvars() != 2) throw std::invalid_argument("torus zeros need two variables");
  Poly pt = reflect_tilde(p);
  Poly R = resultant(p, pt, 1);
  if (R.is_zero()) throw IntegrabilityError("p and its reflection share a factor (toral)");
  int bad = 0;
  std::vector<std::vector<GaussRat>> zeros;
  for (const GaussRat& t1 : circle_roots(R, 0, bad)) {
    Poly a = univariate_at(p, 0, t1), b = univariate_at(pt, 0, t1);
    Poly g = gcd(a, b);
    for (const GaussRat& t2 : circle_roots(g, 1, bad)) {
      std::vector<GaussRat> tau{t1, t2};
      if (p.eval(tau).is_zero()) zeros.push_back(tau);
    }
  }
  std::sort(zeros.begin(), zeros.end(), [](const auto& a, const auto& b) {
    auto key = [](const std::vector<GaussRat>& t) {
      return std::pair<double, double>(std::arg(t[0].to_complex()), std::arg(t[1].to_complex()));
    };
    return key(a) < key(b);
  });
  if (unresolved) *unresolved = bad;
  return zeros;
}

int intersection_multiplicity(const Poly& p, const std::vector<GaussRat>& tau, bool swap) {
  if (!p.eval(tau).is_zero()) throw IntegrabilityError("tau is not a zero of p");
  for (int truncation : {12, 24, 48}) {
    LocalData d = local_data(p, tau, swap, truncation);
    bool truncated = false;
    int N = multiplicity_from(d, truncated);
    if (!truncated) return N;
  }
  throw IntegrabilityError("branch truncation insufficient for the intersection multiplicity");
}

int local_power_in_ideal(const Poly& p, const std::vector<GaussRat>& tau, int var, int cap) {
  LocalData d = local_data(p, tau, false, 12);
  numerator::IdealPresentation I = numerator::segment_ideal(d.fact);
  for (int a = 1; a <= cap; ++a) {
    Exponent e{};
    e[var] = a;
    Poly x = Poly::monomial(2, e, 1);
    bool in = I.tag == numerator::CaseTag::General ? numerator::ideal_contains(x, I)
                                                    : numerator::reduce_mod_ideal(x, I).residual_zero;
    if (in) return a;
  }
  throw IntegrabilityError("no power of the coordinate lies in the local ideal");
}

bool residual_zero_at(const Poly& f, const Poly& p, const std::vector<GaussRat>& tau) {
  LocalData d = local_data(p, tau, false, 12);
  numerator::IdealPresentation I = numerator::segment_ideal(d.fact);
  Poly F = halfplane_image(f.with_nvars(2), tau);
  if (I.tag == numerator::CaseTag::General) return numerator::ideal_contains(F, I);
  return numerator::reduce_mod_ideal(F, I).residual_zero;
}

Profile derivative_integrability_indices(const Poly& p) {
  Profile prof;
  int unresolved = 0;
  auto taus = locate_torus_zeros(p, &unresolved);
  if (unresolved > 0)
    prof.notes.push_back(std::to_string(unresolved) +
                         " torus zero(s) without Gaussian-rational coordinates were not analyzed");
  for (const auto& tau : taus) {
    TorusZero z;
    z.tau = tau;
    LocalData d = local_data(p, tau, false, 12);
    z.order = d.order;
    auto co = puiseux::contact_orders(d.fact);
    z.K = co.K;
    z.K_min = co.K_min;
    z.N = intersection_multiplicity(p, tau);
    z.upper_bound_only = z.order >= 2;
    if (z.upper_bound_only)
      prof.notes.push_back("zero of order " + std::to_string(z.order) +
                           ": indices form a candidate superset");
    if (z.order == 1) {
      z.indices = indices_for(z.K);
    } else {
      std::vector<Index> all;
      for (const auto& b : d.fact.branches)
        if (b.type == puiseux::BranchType::Pure)
          for (const Index& x : indices_for(b.cutoff)) all.push_back(x);
      std::sort(all.begin(), all.end());
      all.erase(std::unique(all.begin(), all.end()), all.end());
      z.indices = all;
    }
    prof.total_N += z.N;
    prof.zeros.push_back(std::move(z));
  }

  // r_lambda = (z_v - lambda_v)^a with lambda_v distinct from the other zeros.
  for (std::size_t l = 0; l < prof.zeros.size(); ++l) {
    TorusZero& z = prof.zeros[l];
    int var = 0;
    for (int v : {0, 1}) {
      bool distinct = true;
      for (std::size_t o = 0; o < prof.zeros.size(); ++o)
        if (o != l && prof.zeros[o].tau[v] == z.tau[v]) distinct = false;
      if (distinct) {
        var = v;
        break;
      }
    }
    z.r_variable = var;
    z.r_power = local_power_in_ideal(p, z.tau, var);
    Poly lin = Poly::variable(2, var) - Poly::constant(2, z.tau[var]);
    z.r = lin.pow(z.r_power);
  }

  Poly pt = reflect_tilde(p);
  std::map<std::string, std::size_t> seen;
  std::vector<std::pair<Index, std::pair<Poly, int>>> entries;
  for (std::size_t l = 0; l < prof.zeros.size(); ++l) {
    const TorusZero& z = prof.zeros[l];
    Poly others = Poly::constant(2, 1);
    for (std::size_t o = 0; o < prof.zeros.size(); ++o)
      if (o != l) others = others * prof.zeros[o].r;
    Poly w2 = Poly::variable(2, 1) - Poly::constant(2, z.tau[1]);
    for (std::size_t k = 0; k < z.indices.size(); ++k) {
      const Index& idx = z.indices[k];
      if (seen.count(idx.to_string())) continue;
      // Index (K+1)/(K-n) is witnessed by (z2 - tau2)^n p~ times the r factors.
      Rational kn = Rational(z.K + 1) / idx.value;
      int n = z.K - static_cast<int>(kn.get_num().get_si() / kn.get_den().get_si());
      seen[idx.to_string()] = entries.size();
      entries.push_back({idx, {w2.pow(n) * pt * others, static_cast<int>(l)}});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [idx, w] : entries) {
    prof.indices.push_back(idx);
    prof.witnesses.push_back(w.first);
    prof.witness_zero.push_back(w.second);
  }
  prof.indices.push_back(Index::inf());
  prof.witnesses.push_back(p);
  prof.witness_zero.push_back(-1);
  return prof;
}

std::vector<Estimate> integrability_cutoff_estimate(const Poly& q, const Poly& p,
                                                    const std::vector<double>& exponents,
                                                    const QuadratureParams& params) {
  const ld pi = std::numbers::pi_v<ld>;
  int unresolved = 0;
  auto taus = locate_torus_zeros(p, &unresolved);

  // Zeros grouped by tau2; each group keeps its largest contact order. The
  // integrand is evaluated from Taylor expansions at the nearest zero, with
  // the offsets z - tau formed from angle differences.
  struct LocalExpansion {
    cld tau1;
    LPoly P, Q, P1, Q1;
  };
  struct Group {
    GaussRat tau2;
    cld tau2_ld;
    int K = 2;
    std::vector<LocalExpansion> local;
  };
  auto to_cld = [](const GaussRat& g) { return cld(g.re().get_d(), g.im().get_d()); };
  std::vector<Group> groups;
  for (const auto& tau : taus) {
    LocalData d = local_data(p, tau, false, 12);
    int K = std::max(2, puiseux::contact_orders(d.fact).K);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.tau2 == tau[1]; });
    if (it == groups.end()) {
      groups.push_back({tau[1], to_cld(tau[1]), K, {}});
      it = groups.end() - 1;
    }
    it->K = std::max(it->K, K);
    LocalExpansion e;
    e.tau1 = to_cld(tau[0]);
    e.P = to_ld(p.with_nvars(2).shift(tau));
    e.Q = to_ld(q.with_nvars(2).shift(tau));
    e.P1 = e.P.derivative(0);
    e.Q1 = e.Q.derivative(0);
    it->local.push_back(std::move(e));
  }

  LPoly P = to_ld(p.with_nvars(2));
  auto z1_coeffs = [&](cld z2) {
    std::vector<cld> c(std::max(0, P.degree_in(0)) + 1, cld(0));
    for (const auto& [e, v] : P.terms()) c[e[0]] += v * std::pow(z2, e[1]);
    return c;
  };
  // tau (e^{ix} - 1) without cancellation.
  auto offset = [](cld tau, ld x) {
    return tau * std::polar<ld>(2 * std::sin(x / 2), (x + std::numbers::pi_v<ld>) / 2);
  };
  const int ne = static_cast<int>(exponents.size());
  ld coeff_scale = static_cast<ld>(std::max(1.0, p.map_coeffs<cd>([](const GaussRat& c) { return c.to_complex(); }).max_abs_coeff()));

  const Rule inner_rule = rule_for(params.inner_nodes);
  const Rule outer_rule = rule_for(params.outer_nodes);

  // Inner integral over theta1 of |d/dz1 (q/p)|^e for every exponent.
  // Peaks sit at the arguments of the z1-roots; each root owns the arc up to
  // the midpoints with its neighbours, graded geometrically by its distance
  // to the circle. Nodes are offsets from the root argument to keep the
  // angles accurate.
  auto inner = [&](const Group& g, ld u) {
    cld z2 = g.tau2_ld * std::polar<ld>(1, u);
    cld w2 = offset(g.tau2_ld, u);
    std::vector<cld> c = z1_coeffs(z2);
    struct Peak { ld a, d; };
    std::vector<Peak> peaks;
    for (const cld& r : poly_roots_ld(c))
      if (std::abs(r) > 0)
        peaks.push_back({std::arg(r), std::max<ld>(std::abs(std::log(std::abs(r))), 1e-30L)});
    if (peaks.empty()) peaks.push_back({0, pi});
    std::sort(peaks.begin(), peaks.end(), [](const Peak& x, const Peak& y) { return x.a < y.a; });
    const std::size_t np = peaks.size();
    std::vector<ld> acc(ne, 0);
    for (std::size_t j = 0; j < np; ++j) {
      ld prev = j == 0 ? peaks[np - 1].a - 2 * pi : peaks[j - 1].a;
      ld next = j + 1 == np ? peaks[0].a + 2 * pi : peaks[j + 1].a;
      ld left = np == 1 ? pi : (peaks[j].a - prev) / 2;
      ld right = np == 1 ? pi : (next - peaks[j].a) / 2;
      cld anchor = std::polar<ld>(1, peaks[j].a);
      const LocalExpansion* near = &g.local[0];
      ld shift = std::arg(anchor * std::conj(near->tau1));
      for (const auto& e : g.local) {
        ld x = std::arg(anchor * std::conj(e.tau1));
        if (std::abs(x) < std::abs(shift)) {
          shift = x;
          near = &e;
        }
      }
      std::vector<ld> cuts{-left, 0, right};
      for (ld s = peaks[j].d; s < std::max(left, right); s *= 2) {
        if (s < left) cuts.push_back(-s);
        if (s < right) cuts.push_back(s);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        ld mid = (cuts[s] + cuts[s + 1]) / 2, half = (cuts[s + 1] - cuts[s]) / 2;
        for (std::size_t i = 0; i < inner_rule.x.size(); ++i) {
          ld off = mid + half * inner_rule.x[i];
          std::vector<cld> w{offset(near->tau1, shift + off), w2};
          cld pv = near->P.eval(w);
          cld dv = (near->Q1.eval(w) * pv - near->Q.eval(w) * near->P1.eval(w)) / (pv * pv);
          ld m = std::abs(dv);
          if (m == 0) continue;
          ld lm = std::log(m);
          for (int k = 0; k < ne; ++k) acc[k] += half * inner_rule.w[i] * std::exp(exponents[k] * lm);
        }
      }
    }
    return acc;
  };

  std::vector<Estimate> out(ne);
  for (int k = 0; k < ne; ++k) out[k].exponent = exponents[k];
  if (groups.empty()) {
    for (auto& e : out) {
      e.verdict = Verdict::Finite;
      e.rate = std::numeric_limits<double>::infinity();
      e.diagnostics = "no zeros on the torus";
    }
    return out;
  }

  int valid = params.shells;
  for (const auto& g : groups) {
    int kv = 0;
    while (kv < params.shells &&
           std::pow(static_cast<ld>(params.window) * std::ldexp(1.0L, -kv - 1), g.K) * coeff_scale >=
               params.precision_floor)
      ++kv;
    valid = std::min(valid, kv);
  }

  // Jobs: (group, shell, side); each integrates one shell side.
  struct Job { int g, k, side; };
  std::vector<Job> jobs;
  for (int g = 0; g < static_cast<int>(groups.size()); ++g)
    for (int k = 0; k < valid; ++k)
      for (int side : {-1, 1}) jobs.push_back({g, k, side});
  std::vector<std::vector<ld>> results(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int j) {
    const Job& job = jobs[j];
    ld hi = static_cast<ld>(params.window) * std::ldexp(1.0L, -job.k);
    ld lo = hi / 2;
    std::vector<ld> acc(ne, 0);
    ld mid = (lo + hi) / 2, half = (hi - lo) / 2;
    for (std::size_t i = 0; i < outer_rule.x.size(); ++i) {
      std::vector<ld> v = inner(groups[job.g], job.side * (mid + half * outer_rule.x[i]));
      for (int k = 0; k < ne; ++k) acc[k] += half * outer_rule.w[i] * v[k];
    }
    results[j] = acc;
  });

  for (int k = 0; k < ne; ++k) {
    Estimate& est = out[k];
    est.shells_used = valid;
    est.shell_sums.assign(valid, 0);
    for (std::size_t j = 0; j < jobs.size(); ++j)
      est.shell_sums[jobs[j].k] += static_cast<double>(results[j][k]);
    bool all_zero = true;
    for (double s : est.shell_sums) all_zero = all_zero && s == 0;
    std::ostringstream diag;
    if (all_zero) {
      est.verdict = Verdict::Finite;
      est.rate = std::numeric_limits<double>::infinity();
      est.diagnostics = "integrand vanishes near the zeros";
      continue;
    }
    int nfit = std::min(params.fit_shells, valid);
    if (nfit < 2) {
      est.verdict = Verdict::Borderline;
      est.diagnostics = "quadrature budget exhausted: fewer than two valid shells";
      continue;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int s = valid - nfit; s < valid; ++s) {
      double y = est.shell_sums[s];
      if (!(y > 0) || !std::isfinite(y)) continue;
      double ly = std::log2(y);
      sx += s;
      sy += ly;
      sxx += static_cast<double>(s) * s;
      sxy += s * ly;
      ++used;
    }
    if (used < 2) {
      est.verdict = Verdict::Borderline;
      est.diagnostics = "shell sums lost precision";
      continue;
    }
    est.rate = -(used * sxy - sx * sy) / (used * sxx - sx * sx);
    if (est.rate > params.rate_threshold) est.verdict = Verdict::Finite;
    else if (est.rate < -params.rate_threshold) est.verdict = Verdict::Divergent;
    else est.verdict = Verdict::Borderline;
    diag << "fit over shells " << valid - nfit << ".." << valid - 1;
    if (unresolved > 0) diag << "; " << unresolved << " unresolved zero(s)";
    est.diagnostics = diag.str();
  }
  return out;
}

}  // namespace stablekit::integrability
