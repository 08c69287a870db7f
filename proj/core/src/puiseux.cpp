#include "stablekit/puiseux.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stablekit/algebra.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/numeric.hpp"

namespace stablekit::puiseux {

std::string to_string(BranchType t) {
  switch (t) {
    case BranchType::Pure: return "pure";
    case BranchType::Real: return "real";
    case BranchType::Unclassified: return "unclassified";
  }
  return "?";
}

Poly Branch::segment_poly(int nvars) const {
  Poly q(nvars);
  if (segment_exact) {
    for (std::size_t k = 0; k < segment_exact->size(); ++k) {
      Exponent e{};
      e[0] = static_cast<int>(k);
      q.add_term(e, GaussRat((*segment_exact)[k]));
    }
    return q;
  }
  throw std::logic_error("segment has no exact representation");
}

CPoly Branch::segment_cpoly(int nvars) const {
  CPoly q(nvars);
  for (std::size_t k = 0; k < segment.size(); ++k) {
    Exponent e{};
    e[0] = static_cast<int>(k);
    q.add_term(e, cd(segment[k], 0));
  }
  return q;
}

int LocalFactorization::total_multiplicity() const {
  int s = 0;
  for (const auto& b : branches) s += b.ramification;
  return s;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct NotExact {};

// F[j][i] = coefficient of x^i y^j.
template <class K>
using Dense = std::vector<std::vector<K>>;

template <class K>
struct RawBranch {
  int m = 1;
  std::vector<K> y;  // y(s) with x = s^m
  int order = 0;     // y known modulo s^order
};

template <class K>
std::vector<K> series_mul(const std::vector<K>& a, const std::vector<K>& b, int N) {
  std::vector<K> r(N, K{});
  for (int i = 0; i < static_cast<int>(a.size()) && i < N; ++i) {
    if (a[i] == K{}) continue;
    for (int j = 0; j < static_cast<int>(b.size()) && i + j < N; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

template <class K>
std::vector<K> series_recip(const std::vector<K>& a, int N) {
  std::vector<K> r(N, K{});
  K inv = Field<K>::from_int(1) / a.at(0);
  r[0] = inv;
  for (int k = 1; k < N; ++k) {
    K s{};
    for (int j = 1; j <= k && j < static_cast<int>(a.size()); ++j) s += a[j] * r[k - j];
    r[k] = -s * inv;
  }
  return r;
}

template <class K>
class NewtonPuiseux {
 public:
  NewtonPuiseux(int target, double zero_tol) : target_(target), tol_(zero_tol) {}

  std::vector<RawBranch<K>> run(Dense<K> F) { return expand(std::move(F), 1, 0); }

 private:
  double scale(const Dense<K>& F) const {
    double s = 0;
    for (const auto& row : F)
      for (const K& c : row) s = std::max(s, Field<K>::magnitude(c));
    return s;
  }
  bool is_zero(const K& x, double sc) const {
    if constexpr (Field<K>::exact) return x == K{};
    else return Field<K>::magnitude(x) <= tol_ * sc;
  }
  int ord(const std::vector<K>& row, double sc) const {
    for (int i = 0; i < static_cast<int>(row.size()); ++i)
      if (!is_zero(row[i], sc)) return i;
    return INT_MAX;
  }

  std::vector<RawBranch<K>> expand(Dense<K> F, int Q, int depth) {
    if (depth > 64) throw PuiseuxError("Newton polygon recursion did not terminate");
    double sc = scale(F);
    std::vector<RawBranch<K>> out;
    int need = target_ * Q + 1;
    std::vector<int> v(F.size());
    for (std::size_t j = 0; j < F.size(); ++j) v[j] = ord(F[j], sc);
    std::size_t j0 = 0;
    while (j0 < F.size() && v[j0] == INT_MAX) ++j0;
    if (j0 == F.size()) throw PuiseuxError("polynomial vanishes identically");
    for (std::size_t r = 0; r < j0; ++r) out.push_back({1, {}, need});
    if (j0 > 0) {
      F.erase(F.begin(), F.begin() + static_cast<long>(j0));
      v.erase(v.begin(), v.begin() + static_cast<long>(j0));
    }
    int d = -1;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] == 0) {
        d = static_cast<int>(j);
        break;
      }
    if (d < 0) throw PuiseuxError("curve has a vertical component at the center");
    if (d == 0) return out;
    if (d == 1) {
      out.push_back(solve_simple(F, need));
      return out;
    }
    // Lower convex hull of (j, v_j), 0 <= j <= d.
    std::vector<int> hull{0};
    int cur = 0;
    while (cur < d) {
      int best = -1;
      for (int j = cur + 1; j <= d; ++j) {
        if (v[j] == INT_MAX) continue;
        if (best < 0) {
          best = j;
          continue;
        }
        // Minimal slope (v_j - v_cur)/(j - cur); ties prefer the farthest point.
        long lhs = static_cast<long>(v[j] - v[cur]) * (best - cur);
        long rhs = static_cast<long>(v[best] - v[cur]) * (j - cur);
        if (lhs <= rhs) best = j;
      }
      hull.push_back(best);
      cur = best;
    }
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
      int ja = hull[e], jb = hull[e + 1];
      int num = v[ja] - v[jb], den = jb - ja;
      int g = std::gcd(num, den);
      int p = num / g, q = den / g;
      long k = static_cast<long>(q) * v[ja] + static_cast<long>(p) * ja;
      std::vector<K> psi;
      for (int j = ja; j <= jb; j += q) {
        long idx = k - static_cast<long>(p) * j;
        K c{};
        if (idx % q == 0) {
          long a = idx / q;
          if (a < static_cast<long>(F[j].size())) c = F[j][a];
        }
        psi.push_back(c);
      }
      for (auto [xi, mu] : face_roots(psi)) {
        K c = qth_root(xi, q);
        Dense<K> G = substitute(F, p, q, k, c);
        auto sub = expand(std::move(G), Q * q, depth + 1);
        int count = 0;
        for (const auto& sb : sub) count += sb.m;
        if (count != mu) throw PuiseuxError("root count mismatch in Newton polygon step");
        for (auto& sb : sub) {
          RawBranch<K> b;
          b.m = q * sb.m;
          int shift = p * sb.m;
          b.y.assign(shift, K{});
          b.y.push_back(c + (sb.y.empty() ? K{} : sb.y[0]));
          for (std::size_t i = 1; i < sb.y.size(); ++i) b.y.push_back(sb.y[i]);
          b.order = sb.order + shift;
          out.push_back(std::move(b));
        }
      }
    }
    return out;
  }

  Dense<K> substitute(const Dense<K>& F, int p, int q, long k, const K& c) const {
    int dy = static_cast<int>(F.size()) - 1;
    std::vector<K> cp(dy + 1, Field<K>::from_int(1));
    for (int i = 1; i <= dy; ++i) cp[i] = cp[i - 1] * c;
    std::vector<std::vector<long>> binom(dy + 1, std::vector<long>(dy + 1, 0));
    for (int n = 0; n <= dy; ++n) {
      binom[n][0] = 1;
      for (int r = 1; r <= n; ++r) binom[n][r] = binom[n - 1][r - 1] + (r <= n - 1 ? binom[n - 1][r] : 0);
    }
    Dense<K> G(dy + 1);
    for (int j = 0; j <= dy; ++j)
      for (std::size_t a = 0; a < F[j].size(); ++a) {
        if (F[j][a] == K{}) continue;
        long idx = static_cast<long>(q) * static_cast<long>(a) + static_cast<long>(p) * j - k;
        if (idx < 0) {
          if constexpr (Field<K>::exact) throw PuiseuxError("point below the Newton polygon");
          else continue;  // rounding noise below the polygon
        }
        for (int i = 0; i <= j; ++i) {
          auto& row = G[i];
          if (static_cast<long>(row.size()) <= idx) row.resize(idx + 1, K{});
          row[idx] += F[j][a] * Field<K>::from_int(binom[j][i]) * cp[j - i];
        }
      }
    return G;
  }

  RawBranch<K> solve_simple(const Dense<K>& F, int N) const {
    std::vector<K> h(N, K{});
    auto eval = [&](bool deriv) {
      std::vector<K> acc(N, K{});
      int dy = static_cast<int>(F.size()) - 1;
      for (int j = dy; j >= (deriv ? 1 : 0); --j) {
        acc = series_mul(acc, h, N);
        std::vector<K> row(F[j].begin(), F[j].begin() + std::min<long>(N, F[j].size()));
        K mult = deriv ? Field<K>::from_int(j) : Field<K>::from_int(1);
        for (std::size_t i = 0; i < row.size(); ++i) acc[i] += row[i] * mult;
      }
      return acc;
    };
    int iters = 3;
    while ((1 << (iters - 3)) < N) ++iters;
    for (int it = 0; it < iters; ++it) {
      std::vector<K> val = eval(false);
      bool done = true;
      for (const K& x : val) done &= (x == K{});
      if (done) break;
      std::vector<K> der = eval(true);
      std::vector<K> step = series_mul(val, series_recip(der, N), N);
      for (int i = 0; i < N; ++i) h[i] -= step[i];
    }
    return {1, h, N};
  }

  std::vector<std::pair<K, int>> face_roots(const std::vector<K>& psi) const {
    using CT = std::conditional_t<Field<K>::exact, std::complex<double>, K>;
    std::vector<CT> c;
    for (const K& x : psi) {
      if constexpr (Field<K>::exact) c.push_back(x.to_complex());
      else c.push_back(x);
    }
    std::vector<CT> roots;
    if constexpr (std::is_same_v<CT, std::complex<long double>>) roots = poly_roots_ld(c);
    else roots = poly_roots(c);
    // Cluster multiple roots and polish each cluster on the derivative that
    // has a simple root there.
    std::vector<std::pair<CT, int>> clusters;
    for (const CT& z : roots) {
      bool placed = false;
      for (auto& [ctr, mult] : clusters) {
        if (std::abs(z - ctr) <= 1e-4 * (1 + std::abs(ctr))) {
          ctr = (ctr * static_cast<typename CT::value_type>(mult) + z) /
                static_cast<typename CT::value_type>(mult + 1);
          ++mult;
          placed = true;
          break;
        }
      }
      if (!placed) clusters.push_back({z, 1});
    }
    for (auto& [ctr, mult] : clusters) {
      std::vector<CT> dc = c;
      for (int r = 1; r < mult; ++r) {
        std::vector<CT> nd;
        for (std::size_t i = 1; i < dc.size(); ++i)
          nd.push_back(dc[i] * static_cast<typename CT::value_type>(i));
        dc = nd;
      }
      for (int it = 0; it < 6; ++it) {
        CT f = 0, df = 0;
        for (std::size_t i = dc.size(); i-- > 0;) {
          df = df * ctr + f;
          f = f * ctr + dc[i];
        }
        if (std::abs(df) == 0) break;
        ctr -= f / df;
      }
    }
    std::vector<std::pair<K, int>> out;
    if constexpr (Field<K>::exact) {
      UPoly rest(psi.begin(), psi.end());
      int total = 0;
      for (auto& [ctr, mult] : clusters) {
        GaussRat xi;
        if (!rationalize(ctr, 1000000, 1e-7 * (1 + std::abs(ctr)), xi)) throw NotExact{};
        UPoly lin{-xi, GaussRat(1)}, q;
        int found = 0;
        while (upoly_divide_exact(rest, lin, q)) {
          rest = q;
          ++found;
        }
        if (found == 0) throw NotExact{};
        total += found;
        out.push_back({xi, found});
      }
      if (total != static_cast<int>(psi.size()) - 1) throw NotExact{};
    } else {
      for (auto& [ctr, mult] : clusters) out.push_back({ctr, mult});
    }
    return out;
  }

  K qth_root(const K& xi, int q) const {
    if (q == 1) return xi;
    if constexpr (Field<K>::exact) {
      std::complex<double> z = xi.to_complex();
      for (int k = 0; k < q; ++k) {
        std::complex<double> c =
            std::polar(std::pow(std::abs(z), 1.0 / q), (std::arg(z) + 2 * kPi * k) / q);
        GaussRat cand;
        if (rationalize(c, 1000000, 1e-9 * (1 + std::abs(c)), cand) && cand.pow(q) == xi)
          return cand;
      }
      throw NotExact{};
    } else {
      using T = typename K::value_type;
      return std::polar(std::pow(std::abs(xi), T(1) / T(q)), std::arg(xi) / T(q));
    }
  }

  int target_;
  double tol_;
};

template <class K>
Dense<K> to_dense(const Polynomial<K>& p) {
  int dy = std::max(0, p.degree_in(1));
  Dense<K> F(dy + 1);
  for (const auto& [e, c] : p.terms()) {
    auto& row = F[e[1]];
    if (static_cast<int>(row.size()) <= e[0]) row.resize(e[0] + 1, K{});
    row[e[0]] = c;
  }
  return F;
}

template <class K>
cd to_cd(const K& x) {
  return Field<K>::to_cd(x);
}

// Fills the classification fields of a branch from its phi series.
void classify(Branch& b, double real_tol) {
  const int m = b.ramification;
  std::vector<cd>& s = b.series;
  double scale = 1;
  for (const cd& x : s) scale = std::max(scale, std::abs(x));
  int kc = -1;
  for (int k = 0; k < static_cast<int>(s.size()); ++k) {
    bool nonreal;
    if (b.series_exact) nonreal = !(*b.series_exact)[k].is_real();
    else nonreal = std::abs(s[k].imag()) > real_tol * scale;
    if (nonreal) {
      kc = k;
      break;
    }
    s[k] = s[k].real();
  }
  int limit = kc < 0 ? static_cast<int>(s.size()) : kc;
  for (int k = 0; k < limit; ++k) {
    if (k % m != 0 && std::abs(s[k]) > real_tol * scale && !(b.series_exact && (*b.series_exact)[k].is_zero())) {
      b.type = BranchType::Unclassified;
      b.note = "ramified real term before the first non-real coefficient";
      return;
    }
  }
  auto fill_segment = [&](int upto) {
    b.segment.clear();
    for (int k = 0; k < upto; k += m) b.segment.push_back(s[k].real() + 0.0);
    while (!b.segment.empty() && b.segment.back() == 0) b.segment.pop_back();
    if (b.series_exact) {
      std::vector<Rational> ex;
      for (int k = 0; k < upto; k += m) ex.push_back((*b.series_exact)[k].re());
      while (!ex.empty() && sgn(ex.back()) == 0) ex.pop_back();
      b.segment_exact = ex;
    }
  };
  if (kc < 0) {
    if (m == 1) {
      b.type = BranchType::Real;
      fill_segment(static_cast<int>(s.size()));
    } else {
      b.type = BranchType::Unclassified;
      b.note = "no non-real coefficient within the truncation";
    }
    return;
  }
  if (kc % m != 0 || (kc / m) % 2 != 0) {
    b.type = BranchType::Unclassified;
    b.note = "first non-real coefficient is not at an even integer order";
    return;
  }
  if (s[kc].imag() <= 0) {
    b.type = BranchType::Unclassified;
    b.note = "first non-real coefficient has non-positive imaginary part";
    return;
  }
  b.type = BranchType::Pure;
  b.cutoff = kc / m;
  fill_segment(kc);
  b.psi.assign(s.begin() + kc, s.end());
}

template <class K>
std::vector<Branch> build_branches(const std::vector<RawBranch<K>>& raw, double real_tol) {
  std::vector<Branch> out;
  for (const auto& r : raw) {
    Branch b;
    b.ramification = r.m;
    b.order = r.order;
    std::vector<K> phi(r.order, K{});
    for (int k = 0; k < r.order && k < static_cast<int>(r.y.size()); ++k) phi[k] = -r.y[k];
    for (const K& x : phi) {
      cd v = to_cd(x);
      b.series.push_back(cd(v.real() + 0.0, v.imag() + 0.0));
    }
    if constexpr (Field<K>::exact) b.series_exact = phi;
    classify(b, real_tol);
    out.push_back(std::move(b));
  }
  // Deterministic order: by leading slope, then cutoff.
  std::stable_sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) {
    auto key = [](const Branch& x) {
      for (std::size_t k = 0; k < x.series.size(); ++k)
        if (std::abs(x.series[k]) > 1e-12) return std::pair<double, double>(static_cast<double>(k) / x.ramification, x.series[k].real());
      return std::pair<double, double>(1e300, 0);
    };
    auto ka = key(a), kb = key(b);
    if (ka.first != kb.first) return ka.first < kb.first;
    return ka.second < kb.second;
  });
  return out;
}

template <class K>
std::vector<RawBranch<K>> run_float(const Poly& reduced, int target, double tol) {
  Polynomial<K> pk = reduced.map_coeffs<K>([](const GaussRat& c) { return coerce<K>(c); });
  return NewtonPuiseux<K>(target, tol).run(to_dense(pk));
}

bool needs_retry(const LocalFactorization& f, int target) {
  if (f.truncation < target) return true;
  for (const auto& b : f.branches)
    if (b.type == BranchType::Unclassified) return true;
  return false;
}

LocalFactorization factorize_reduced(const Poly& shifted, const std::vector<GaussRat>& center,
                                     const Options& opts) {
  LocalFactorization f;
  f.center = center;
  f.order = shifted.lowest_order();
  if (shifted.is_zero()) throw PuiseuxError("zero polynomial");
  int a = INT_MAX, b = INT_MAX;
  for (const auto& [e, c] : shifted.terms()) {
    a = std::min(a, e[0]);
    b = std::min(b, e[1]);
  }
  f.z1_power = a;
  f.z2_power = b;
  Exponent mono{};
  mono[0] = a;
  mono[1] = b;
  Poly reduced = *divide_exact(shifted, Poly::monomial(2, mono, 1));

  int target = opts.truncation;
  LocalFactorization best;
  bool have = false;
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    LocalFactorization g = f;
    bool done = false;
    if (opts.allow_exact) {
      try {
        auto raw = NewtonPuiseux<GaussRat>(target, 0).run(to_dense(reduced));
        g.branches = build_branches(raw, opts.real_tol);
        g.exact = true;
        done = true;
      } catch (const NotExact&) {
      }
    }
    if (!done) {
      if (attempt == 0) g.branches = build_branches(run_float<cd>(reduced, target, opts.zero_tol), opts.real_tol);
      else g.branches = build_branches(run_float<std::complex<long double>>(reduced, target, opts.zero_tol * 1e-3), opts.real_tol);
    }
    for (int r = 0; r < b; ++r) {
      Branch z;
      z.order = target + 1;
      z.series.assign(z.order, cd(0));
      z.series_exact = std::vector<GaussRat>(z.order, GaussRat(0));
      classify(z, opts.real_tol);
      g.branches.insert(g.branches.begin(), z);
    }
    g.truncation = INT_MAX;
    for (const auto& br : g.branches) g.truncation = std::min(g.truncation, br.order / br.ramification);
    if (g.branches.empty()) g.truncation = target;
    best = g;
    have = true;
    if (!needs_retry(g, opts.truncation)) break;
    target *= 2;
  }
  if (!have) throw PuiseuxError("factorization failed");
  return best;
}

}  // namespace

LocalFactorization puiseux_factorize(const Poly& p, const std::vector<GaussRat>& center,
                                     const Options& opts) {
  if (p.nvars() != 2) throw std::invalid_argument("Puiseux factorization expects two variables");
  Poly shifted = p.shift(center);
  if (!shifted.terms().empty() && shifted.lowest_order() == 0)
    throw PuiseuxError("polynomial does not vanish at the center");
  LocalFactorization f = factorize_reduced(shifted, center, opts);
  try {
    WeierstrassData w = weierstrass_unit(p, f);
    f.reconstruction_residual = w.residual;
    if (!w.unit.empty() && !w.unit[0].empty()) f.unit_at_center = w.unit[0][0];
  } catch (const std::exception&) {
    f.reconstruction_residual = std::numeric_limits<double>::infinity();
  }
  return f;
}

LocalFactorization puiseux_factorize(const Poly& p, const Options& opts) {
  return puiseux_factorize(p, std::vector<GaussRat>(2, GaussRat(0)), opts);
}

LocalFactorization puiseux_factorize(const CPoly& p, const Options& opts) {
  if (p.nvars() != 2) throw std::invalid_argument("Puiseux factorization expects two variables");
  LocalFactorization f;
  f.center = {GaussRat(0), GaussRat(0)};
  f.order = p.lowest_order();
  int a = INT_MAX, b = INT_MAX;
  for (const auto& [e, c] : p.terms()) {
    a = std::min(a, e[0]);
    b = std::min(b, e[1]);
  }
  CPoly reduced(2);
  for (const auto& [e, c] : p.terms()) {
    Exponent f2 = e;
    f2[0] -= a;
    f2[1] -= b;
    reduced.add_term(f2, c);
  }
  f.z1_power = a;
  f.z2_power = b;
  f.branches = build_branches(NewtonPuiseux<cd>(opts.truncation, opts.zero_tol).run(to_dense(reduced)), opts.real_tol);
  for (int r = 0; r < b; ++r) {
    Branch z;
    z.order = opts.truncation + 1;
    z.series.assign(z.order, cd(0));
    classify(z, opts.real_tol);
    f.branches.insert(f.branches.begin(), z);
  }
  f.truncation = opts.truncation;
  for (const auto& br : f.branches) f.truncation = std::min(f.truncation, br.order / br.ramification);
  return f;
}

ContactOrders contact_orders(const LocalFactorization& f) {
  ContactOrders c;
  bool first = true;
  for (const auto& b : f.branches) {
    if (b.type != BranchType::Pure)
      throw PuiseuxError("contact order is undefined with a branch of real type");
    c.K = first ? b.cutoff : std::max(c.K, b.cutoff);
    c.K_min = first ? b.cutoff : std::min(c.K_min, b.cutoff);
    first = false;
  }
  return c;
}

LocalFactorization switch_variables(const LocalFactorization& f) {
  LocalFactorization g = f;
  std::swap(g.z1_power, g.z2_power);
  for (auto& b : g.branches) {
    if (b.type != BranchType::Pure) continue;
    int T = b.cutoff;
    if (b.segment.size() < 2 || b.segment[1] == 0)
      throw PuiseuxError("segment has no invertible linear term");
    // -I_{2L}(q)(-s): coefficient k is (-1)^{k+1} I_k.
    if (b.segment_exact) {
      std::vector<GaussRat> qc;
      for (const auto& r : *b.segment_exact) qc.push_back(GaussRat(r));
      TruncatedSeries<GaussRat> inv = TruncatedSeries<GaussRat>(qc, T).inverse();
      std::vector<Rational> ex;
      for (int k = 0; k < T; ++k) {
        Rational c = inv.get(k).re();
        ex.push_back(k % 2 == 0 ? Rational(-c) : c);
      }
      while (!ex.empty() && sgn(ex.back()) == 0) ex.pop_back();
      b.segment_exact = ex;
    }
    std::vector<cd> qc;
    for (double x : b.segment) qc.push_back(x);
    TruncatedSeries<cd> inv = TruncatedSeries<cd>(qc, T).inverse();
    double a = b.segment[1];
    b.segment.clear();
    for (int k = 0; k < T; ++k) {
      double c = inv.get(k).real();
      b.segment.push_back(k % 2 == 0 ? -c : c);
    }
    while (!b.segment.empty() && b.segment.back() == 0) b.segment.pop_back();
    if (b.ramification == 1 && !b.psi.empty()) {
      b.psi = {b.psi[0] / std::pow(a, T + 1)};
    } else {
      b.psi.clear();
    }
    b.series.clear();
    b.series_exact.reset();
    b.order = 0;
  }
  return g;
}

std::vector<cd> eval_branch(const Branch& b, cd z) {
  if (b.type != BranchType::Pure) throw std::invalid_argument("eval_branch needs a pure branch");
  int m = b.ramification;
  // z^{1/m} with the cut along the negative imaginary axis.
  double r = std::abs(z), th = std::arg(z);
  if (th < -kPi / 2) th += 2 * kPi;
  // Termwise polar form keeps Im q accurate where it is tiny relative to |q|.
  cd q = 0;
  for (std::size_t k = 1; k < b.segment.size(); ++k)
    q += b.segment[k] * std::polar(std::pow(r, static_cast<double>(k)), k * th);
  if (!b.segment.empty()) q += b.segment[0];
  cd zl = std::polar(std::pow(r, b.cutoff), b.cutoff * th);
  std::vector<cd> out;
  for (int k = 0; k < m; ++k) {
    cd s = std::polar(std::pow(r, 1.0 / m), (th + 2 * kPi * k) / m);
    cd psi = 0;
    for (std::size_t i = b.psi.size(); i-- > 0;) psi = psi * s + b.psi[i];
    out.push_back(q + zl * psi);
  }
  return out;
}

LowerBound verify_branch_lower_bound(const Branch& b, double r, int samples) {
  LowerBound lb;
  int nr = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(samples))));
  int na = std::max(2, samples / nr);
  lb.c_hat = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nr; ++i) {
    double rho = r * std::pow(1e-3, static_cast<double>(i) / (nr - 1));
    for (int j = 0; j < na; ++j) {
      double th = kPi * j / (na - 1);
      cd z = std::polar(rho, th);
      for (cd h : eval_branch(b, z)) {
        double ratio = h.imag() / std::pow(rho, b.cutoff);
        if (ratio < lb.c_hat) {
          lb.c_hat = ratio;
          lb.worst = z;
        }
      }
      ++lb.samples;
    }
  }
  lb.passed = lb.c_hat > 0;
  return lb;
}

WeierstrassData weierstrass_unit(const Poly& p, const LocalFactorization& f) {
  Poly shifted = p.shift(f.center);
  int L = 1;
  for (const auto& b : f.branches) L = std::lcm(L, b.ramification);
  int Ou = INT_MAX;
  for (const auto& b : f.branches) Ou = std::min(Ou, b.order * (L / b.ramification));
  if (f.branches.empty()) Ou = L * (f.truncation + 1);
  // W(u, z2) as rows of u-series, W[j] = coefficient of z2^j.
  std::vector<std::vector<cd>> W{std::vector<cd>(Ou, cd(0))};
  W[0][0] = 1;
  auto mul_linear = [&](const std::vector<cd>& root) {
    // W * (z2 + root(u))
    std::vector<std::vector<cd>> R(W.size() + 1, std::vector<cd>(Ou, cd(0)));
    for (std::size_t j = 0; j < W.size(); ++j) {
      for (int i = 0; i < Ou; ++i) R[j + 1][i] += W[j][i];
      std::vector<cd> prod = series_mul(W[j], root, Ou);
      for (int i = 0; i < Ou; ++i) R[j][i] += prod[i];
    }
    W = std::move(R);
  };
  for (const auto& b : f.branches) {
    int m = b.ramification, step = L / m;
    for (int k = 0; k < m; ++k) {
      cd w = std::polar(1.0, 2 * kPi * k / m);
      std::vector<cd> root(Ou, cd(0));
      cd wk = 1;
      for (int i = 0; i < static_cast<int>(b.series.size()) && i * step < Ou; ++i) {
        root[i * step] = b.series[i] * wk;
        wk *= w;
      }
      mul_linear(root);
    }
  }
  int Nx = (Ou + L - 1) / L;
  std::vector<std::vector<cd>> Wx(W.size(), std::vector<cd>(Nx, cd(0)));
  for (std::size_t j = 0; j < W.size(); ++j)
    for (int a = 0; a < Nx; ++a) Wx[j][a] = W[j][a * L];
  int dW = static_cast<int>(Wx.size()) - 1;

  int a0 = f.z1_power;
  int dy = std::max(0, shifted.degree_in(1));
  std::vector<std::vector<cd>> P(dy + 1, std::vector<cd>(Nx, cd(0)));
  double pscale = 0;
  for (const auto& [e, c] : shifted.terms()) {
    int a = e[0] - a0;
    if (a < Nx) P[e[1]][a] += c.to_complex();
    pscale = std::max(pscale, c.abs());
  }
  WeierstrassData out;
  out.order = Nx;
  int dq = dy - dW;
  if (dq < 0) throw PuiseuxError("Weierstrass polynomial exceeds the degree of p");
  std::vector<std::vector<cd>> Qt(dq + 1, std::vector<cd>(Nx, cd(0)));
  for (int j = dq; j >= 0; --j) {
    Qt[j] = P[j + dW];
    for (int i = 0; i <= dW; ++i) {
      std::vector<cd> prod = series_mul(Qt[j], Wx[i], Nx);
      for (int a = 0; a < Nx; ++a) P[j + i][a] -= prod[a];
    }
  }
  double res = 0;
  for (int j = 0; j < dW; ++j)
    for (int a = 0; a < Nx; ++a) res = std::max(res, std::abs(P[j][a]));
  out.residual = pscale > 0 ? res / pscale : res;
  out.unit = Qt;
  return out;
}

namespace {

// Slots (segment, cutoff) of p's pure branches, one per unit of ramification.
struct Slot {
  int branch;
  std::vector<double> segment;
  int cutoff;
};

std::vector<Slot> slots_of(const LocalFactorization& f) {
  std::vector<Slot> s;
  for (std::size_t i = 0; i < f.branches.size(); ++i) {
    const auto& b = f.branches[i];
    if (b.type != BranchType::Pure) continue;
    for (int k = 0; k < b.ramification; ++k) s.push_back({static_cast<int>(i), b.segment, b.cutoff});
  }
  std::stable_sort(s.begin(), s.end(), [](const Slot& a, const Slot& b) { return a.cutoff > b.cutoff; });
  return s;
}

bool agrees(const Branch& real_branch, const Slot& slot) {
  for (int k = 0; k < slot.cutoff; ++k) {
    double q = k < static_cast<int>(slot.segment.size()) ? slot.segment[k] : 0.0;
    if (k >= static_cast<int>(real_branch.series.size())) return false;
    double v = real_branch.series[k].real();
    if (std::abs(v - q) > 1e-7 * (1 + std::abs(q))) return false;
  }
  return true;
}

}  // namespace

PerturbedMatch match_perturbed_segments(const Poly& p, const std::vector<GaussRat>& center,
                                        const std::vector<Rational>& t_samples, int T) {
  PerturbedMatch res;
  if (t_samples.size() < 3) throw std::invalid_argument("at least three t samples are required");
  homog::Normalization n = homog::normalize_lowest(p, center);
  std::vector<GaussRat> origin(2, GaussRat(0));
  Options opts;
  opts.truncation = T;
  LocalFactorization fp = puiseux_factorize(n.shifted, origin, opts);
  std::vector<Slot> slots = slots_of(fp);
  if (slots.empty()) {
    res.reason = "no pure branches at the center";
    return res;
  }
  int max_cut = 0;
  for (const auto& s : slots) max_cut = std::max(max_cut, s.cutoff);
  opts.truncation = std::max(T, max_cut + 2);
  // values[slot] = per-t sorted coefficient at the cutoff.
  std::vector<std::vector<std::vector<double>>> per_branch(fp.branches.size());
  for (const Rational& t : t_samples) {
    Poly q = n.split.A + n.split.B * GaussRat(t);
    LocalFactorization fq;
    try {
      fq = puiseux_factorize(q, origin, opts);
    } catch (const std::exception&) {
      res.exceptional.push_back(t.get_d());
      continue;
    }
    bool good = fq.z1_power == 0 && static_cast<int>(fq.branches.size()) == static_cast<int>(slots.size());
    for (const auto& b : fq.branches) good &= b.type == BranchType::Real && b.ramification == 1;
    std::vector<bool> used(fq.branches.size(), false);
    std::vector<std::vector<double>> vals(fp.branches.size());
    for (const auto& slot : slots) {
      if (!good) break;
      bool found = false;
      for (std::size_t i = 0; i < fq.branches.size(); ++i) {
        if (used[i] || !agrees(fq.branches[i], slot)) continue;
        used[i] = true;
        vals[slot.branch].push_back(fq.branches[i].series.at(slot.cutoff).real());
        found = true;
        break;
      }
      good &= found;
    }
    if (!good) {
      res.exceptional.push_back(t.get_d());
      continue;
    }
    res.t_used.push_back(t.get_d());
    for (std::size_t b = 0; b < vals.size(); ++b) {
      std::sort(vals[b].begin(), vals[b].end());
      per_branch[b].push_back(vals[b]);
    }
  }
  if (res.t_used.size() < 3) {
    res.reason = "fewer than three non-exceptional samples";
    return res;
  }
  res.ok = true;
  for (std::size_t b = 0; b < fp.branches.size(); ++b) {
    if (fp.branches[b].type != BranchType::Pure) continue;
    bool varies = false;
    const auto& v = per_branch[b];
    for (std::size_t i = 1; i < v.size(); ++i)
      for (std::size_t k = 0; k < v[i].size(); ++k)
        varies |= std::abs(v[i][k] - v[0][k]) > 1e-8 * (1 + std::abs(v[0][k]));
    res.varies.push_back(varies);
    if (!varies) {
      res.ok = false;
      res.reason = "order-2L coefficients do not vary with t";
    }
  }
  return res;
}

UnitAffine unit_affine_check(const Poly& p, const std::vector<GaussRat>& center,
                             const std::vector<Rational>& t_samples, int T) {
  UnitAffine res;
  if (t_samples.size() < 3) throw std::invalid_argument("at least three t samples are required");
  homog::Normalization n = homog::normalize_lowest(p, center);
  int M = n.decomposition.order;
  GaussRat lead = n.split.A.homogeneous_part(M).coeff(Exponent{0, M, 0, 0});
  if (lead.is_zero()) {
    res.reason = "z2^M does not occur in the lowest term";
    return res;
  }
  GaussRat inv = GaussRat(1) / lead;
  Poly A = n.split.A * inv, B = n.split.B * inv;
  std::vector<GaussRat> origin(2, GaussRat(0));
  Options opts;
  opts.truncation = T;
  LocalFactorization fp = puiseux_factorize(A + B * GaussRat::i(), origin, opts);
  ContactOrders co = contact_orders(fp);
  if (co.K_min < 4) {
    res.ok = true;
    res.vacuous = true;
    return res;
  }
  int J = co.K_min - 2;
  opts.truncation = std::max(T, J + 2);
  std::vector<double> ts;
  std::vector<std::vector<cd>> coeffs;  // per t, flattened u coefficients with a + j <= J
  for (const Rational& t : t_samples) {
    Poly q = A + B * GaussRat(t);
    LocalFactorization fq = puiseux_factorize(q, origin, opts);
    WeierstrassData w = weierstrass_unit(q, fq);
    if (w.order <= J) {
      res.reason = "unit known to insufficient order";
      return res;
    }
    std::vector<cd> flat;
    for (int j = 0; j <= J; ++j)
      for (int a = 0; a + j <= J; ++a)
        flat.push_back(j < static_cast<int>(w.unit.size()) ? w.unit[j][a] : cd(0));
    ts.push_back(t.get_d());
    coeffs.push_back(flat);
  }
  double scale = 1;
  for (const auto& f : coeffs)
    for (cd x : f) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i + 2 < ts.size(); ++i)
    for (std::size_t k = 0; k < coeffs[i].size(); ++k) {
      cd d1 = (coeffs[i + 1][k] - coeffs[i][k]) / (ts[i + 1] - ts[i]);
      cd d2 = (coeffs[i + 2][k] - coeffs[i + 1][k]) / (ts[i + 2] - ts[i + 1]);
      res.max_defect = std::max(res.max_defect, std::abs((d2 - d1) / (ts[i + 2] - ts[i])));
    }
  res.checked_degree = J;
  res.ok = res.max_defect <= 1e-6 * scale;
  if (!res.ok) res.reason = "unit coefficients are not affine in t";
  return res;
}

}  // namespace stablekit::puiseux
