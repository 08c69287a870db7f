#include "stablekit/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stablekit/homog.hpp"
#include "stablekit/numeric.hpp"

namespace stablekit::boundary {

namespace {

using ld = long double;
using cld = std::complex<long double>;

// Terms c z1^a z2^b of a real polynomial.
struct RealTerms {
  std::vector<int> a, b;
  std::vector<ld> c;
  int deg2 = 0;
};

RealTerms real_terms(const Poly& p) {
  RealTerms t;
  for (const auto& [e, c] : p.terms()) {
    t.a.push_back(e[0]);
    t.b.push_back(e[1]);
    t.c.push_back(static_cast<ld>(c.re().get_d()));
    t.deg2 = std::max(t.deg2, e[1]);
  }
  return t;
}

// Coefficients in x2 of A - t B at fixed x1.
std::vector<ld> slice_coeffs(const RealTerms& A, const RealTerms& B, ld t, ld x1) {
  std::vector<ld> c(std::max(A.deg2, B.deg2) + 1, 0);
  for (std::size_t k = 0; k < A.c.size(); ++k) c[A.b[k]] += A.c[k] * std::pow(x1, A.a[k]);
  for (std::size_t k = 0; k < B.c.size(); ++k) c[B.b[k]] -= t * B.c[k] * std::pow(x1, B.a[k]);
  return c;
}

ld eval_slice(const std::vector<ld>& c, ld x2) {
  ld v = 0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * x2 + c[k];
  return v;
}

// Real roots in (-R, R), sorted. Returns false when some root in the window
// is not numerically real.
bool window_roots(const std::vector<ld>& c, ld R, std::vector<ld>& out) {
  out.clear();
  std::vector<cld> cc(c.begin(), c.end());
  while (!cc.empty() && cc.back() == cld(0)) cc.pop_back();
  if (cc.size() <= 1) return true;
  bool ok = true;
  for (const cld& z : poly_roots_ld(cc)) {
    if (std::abs(z.real()) >= R) continue;
    if (std::abs(z.imag()) > 1e-7L * (std::abs(z.real()) + 1e-12L)) {
      if (std::abs(z) < R) ok = false;
      continue;
    }
    out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return ok;
}

// Number of roots of (A - tB)(0, x2) at x2 = 0.
int weierstrass_degree(const RealTerms& A, const RealTerms& B, ld t) {
  auto c = slice_coeffs(A, B, t, 0);
  ld scale = 0;
  for (ld v : c) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < c.size(); ++k)
    if (std::abs(c[k]) > 1e-14L * scale) return static_cast<int>(k);
  throw BoundaryError("A - tB vanishes on the x2 axis");
}

struct Split {
  Poly A, B;
};

Split split_at_origin(const Poly& p) {
  auto norm = homog::normalize_lowest(p.with_nvars(2), {GaussRat(0), GaussRat(0)});
  if (norm.decomposition.order == 0) throw BoundaryError("p does not vanish at the origin");
  return {norm.split.A, norm.split.B};
}

// Roots at x1 with grid refinement toward `prev` when the count disagrees.
bool roots_at(const RealTerms& A, const RealTerms& B, ld t, ld x1, ld prev, ld R, int M,
              std::vector<ld>& out, ld& used) {
  for (int k = 0; k <= 4; ++k) {
    used = x1 + (prev - x1) * k / 4;
    if (k > 0 && used == prev) break;
    if (window_roots(slice_coeffs(A, B, t, used), R, out) && static_cast<int>(out.size()) == M)
      return true;
  }
  return false;
}

double fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0) || !(y[k] > 0)) continue;
    double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<Trace> trace_level_sets(const Poly& p, const std::vector<double>& t_values,
                                    const Window& window, int n) {
  if (n < 1) throw BoundaryError("grid size must be positive");
  Split s = split_at_origin(p);
  RealTerms A = real_terms(s.A), B = real_terms(s.B);
  std::vector<Trace> out(t_values.size());
  parallel_for(static_cast<int>(t_values.size()), [&](int i) {
    Trace& tr = out[i];
    tr.t = t_values[i];
    tr.branches = weierstrass_degree(A, B, tr.t);
    for (int sign : {-1, 1}) {
      ld prev = 0;
      for (int k = 1; k < n; ++k) {
        ld x1 = sign * static_cast<ld>(window.r) * k / n;
        std::vector<ld> roots;
        ld used = x1;
        if (!roots_at(A, B, tr.t, x1, prev, window.R, tr.branches, roots, used)) {
          ++tr.dropped;
          continue;
        }
        prev = used;
        for (int j = 0; j < tr.branches; ++j)
          tr.points.push_back({static_cast<double>(used), j, static_cast<double>(roots[j])});
      }
    }
    std::stable_sort(tr.points.begin(), tr.points.end(),
                     [](const TracePoint& a, const TracePoint& b) { return a.x1 < b.x1; });
  });
  return out;
}

bool LevelRegion::contains(double x1, double x2) const {
  if (!(x1 > 0) || x1 >= window.r || std::abs(x2) >= window.R) return false;
  RealTerms a = real_terms(A), b = real_terms(B);
  std::vector<ld> lo, hi;
  window_roots(slice_coeffs(a, b, s1, x1), window.R, lo);
  window_roots(slice_coeffs(a, b, s2, x1), window.R, hi);
  ld tol = 1e-12L * (std::abs(static_cast<ld>(x2)) + x1);
  for (std::size_t j = 0; j < std::min(lo.size(), hi.size()); ++j)
    if (x2 >= lo[j] - tol && x2 <= hi[j] + tol) return true;
  return false;
}

bool LevelRegion::ratio_contains(double x1, double x2, double tol) const {
  if (!(x1 > 0) || x1 >= window.r || std::abs(x2) >= window.R) return false;
  double a = A.eval<cd>({x1, x2}).real();
  double b = B.eval<cd>({x1, x2}).real();
  if (b == 0) return false;
  double f = a / b;
  double slack = tol * (1 + std::abs(f));
  return f >= s1 - slack && f <= s2 + slack;
}

LevelRegion level_region(const Poly& p, double s1, double s2, const Window& window, int n) {
  if (s1 > s2) throw BoundaryError("level_region needs s1 <= s2");
  if (n < 2) throw BoundaryError("grid size must be at least 2");
  Split sp = split_at_origin(p);
  RealTerms A = real_terms(sp.A), B = real_terms(sp.B);
  LevelRegion reg;
  reg.s1 = s1;
  reg.s2 = s2;
  reg.window = window;
  reg.A = sp.A;
  reg.B = sp.B;
  int M = weierstrass_degree(A, B, s1);
  if (weierstrass_degree(A, B, s2) != M) throw BoundaryError("branch counts differ between s1 and s2");
  reg.branches = M;

  // Geometric grid on [r/16, r), shrunk when the branch count fails.
  for (int attempt = 0; attempt < 6; ++attempt) {
    reg.slices.clear();
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      ld x1 = static_cast<ld>(window.r) * std::pow(16.0L, -static_cast<ld>(k + 1) / n);
      Slice sl;
      sl.x1 = static_cast<double>(x1);
      std::vector<ld> lo, hi;
      ok = window_roots(slice_coeffs(A, B, s1, x1), window.R, lo) &&
           window_roots(slice_coeffs(A, B, s2, x1), window.R, hi) &&
           static_cast<int>(lo.size()) == M && static_cast<int>(hi.size()) == M;
      if (!ok) break;
      sl.alternates = true;
      for (int j = 0; j < M; ++j) {
        if (lo[j] > hi[j]) sl.alternates = false;
        if (j + 1 < M && hi[j] > lo[j + 1]) sl.alternates = false;
      }
      auto prod = [&](ld x2) {
        return eval_slice(slice_coeffs(A, B, s1, x1), x2) * eval_slice(slice_coeffs(A, B, s2, x1), x2);
      };
      sl.sandwich = true;
      for (int j = 0; j < M; ++j) {
        if (hi[j] - lo[j] > 0 && prod((lo[j] + hi[j]) / 2) > 0) sl.sandwich = false;
        ld gap_lo = j == 0 ? -static_cast<ld>(window.R) : hi[j - 1];
        if (prod((gap_lo + lo[j]) / 2) <= 0) sl.sandwich = false;
      }
      if (M > 0 && prod((hi[M - 1] + static_cast<ld>(window.R)) / 2) <= 0) sl.sandwich = false;
      for (ld v : lo) sl.lower.push_back(static_cast<double>(v));
      for (ld v : hi) sl.upper.push_back(static_cast<double>(v));
      reg.slices.push_back(std::move(sl));
    }
    if (ok) break;
    reg.window.r /= 2;
  }
  if (static_cast<int>(reg.slices.size()) != n) throw BoundaryError("branch count mismatch in every window");

  reg.certified = true;
  for (const Slice& sl : reg.slices) reg.certified = reg.certified && sl.alternates && sl.sandwich;
  for (int j = 0; j < M; ++j) {
    std::vector<double> x, w;
    double C = 0;
    for (const Slice& sl : reg.slices) {
      double width = sl.upper[j] - sl.lower[j];
      x.push_back(sl.x1);
      w.push_back(width);
      C = std::max(C, std::abs(width) / (sl.x1 * sl.x1));
    }
    reg.pinch_exponent.push_back(fit_loglog(x, w));
    reg.pinch_constant.push_back(C);
  }
  return reg;
}

std::string to_string(HornKind k) {
  switch (k) {
    case HornKind::NonTrivial: return "NonTrivial";
    case HornKind::TrivialAlongX1: return "TrivialAlongX1";
    case HornKind::TrivialAlongX2: return "TrivialAlongX2";
  }
  return "?";
}

bool Horn::contains(const Point& x) const {
  if (std::hypot(x[0], x[1]) > radius) return false;
  switch (kind) {
    case HornKind::NonTrivial: return std::abs(x[1] - slope * x[0]) <= B * x[0] * x[0];
    case HornKind::TrivialAlongX1: return std::abs(x[1]) <= B * x[0] * x[0];
    case HornKind::TrivialAlongX2: return std::abs(x[0]) <= B * x[1] * x[1];
  }
  return false;
}

SequenceVerdict horn_classify(const std::vector<Point>& points, const std::vector<Horn>& horns,
                              int n0, const std::vector<std::complex<double>>& values,
                              std::complex<double> zeta0, double eps) {
  if (!values.empty() && values.size() != points.size())
    throw BoundaryError("values must match points");
  SequenceVerdict v;
  v.trapped = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    bool in = std::any_of(horns.begin(), horns.end(), [&](const Horn& h) { return h.contains(points[k]); });
    v.member.push_back(in);
    bool considered = static_cast<int>(k) >= n0 && (values.empty() || std::abs(values[k] - zeta0) < eps);
    if (considered && !in && v.trapped) {
      v.trapped = false;
      v.first_violation = static_cast<int>(k);
    }
  }
  return v;
}

double fit_horn_constant(const std::vector<Point>& points, HornKind kind, double slope, double radius) {
  double B = 0;
  for (const Point& x : points) {
    if (std::hypot(x[0], x[1]) > radius) continue;
    double num = 0, den = 0;
    switch (kind) {
      case HornKind::NonTrivial: num = std::abs(x[1] - slope * x[0]), den = x[0] * x[0]; break;
      case HornKind::TrivialAlongX1: num = std::abs(x[1]), den = x[0] * x[0]; break;
      case HornKind::TrivialAlongX2: num = std::abs(x[0]), den = x[1] * x[1]; break;
    }
    if (num == 0) continue;
    if (den == 0) return std::numeric_limits<double>::infinity();
    B = std::max(B, num / den);
  }
  return B;
}

std::vector<Point> trace_torus_level_set(const Poly& q, const Poly& p, std::complex<double> lambda,
                                         const std::vector<GaussRat>& tau, double window, int n) {
  if (tau.size() != 2) throw BoundaryError("tau must have two coordinates");
  Poly Q = q.with_nvars(2), P = p.with_nvars(2);
  auto to_cld = [](const GaussRat& g) { return cld(g.re().get_d(), g.im().get_d()); };
  cld t1 = to_cld(tau[0]), t2 = to_cld(tau[1]);
  cld lam(lambda.real(), lambda.imag());
  int d2 = std::max(Q.degree_in(1), P.degree_in(1));
  std::vector<Point> out;
  for (int k = -n; k <= n; ++k) {
    if (k == 0) continue;
    ld th1 = static_cast<ld>(window) * k / (n + 1);
    cld z1 = t1 * std::polar(1.0L, th1);
    std::vector<cld> c(d2 + 1, cld(0));
    for (const auto& [e, v] : Q.terms()) c[e[1]] += to_cld(v) * std::pow(z1, e[0]);
    for (const auto& [e, v] : P.terms()) c[e[1]] -= lam * to_cld(v) * std::pow(z1, e[0]);
    while (!c.empty() && std::abs(c.back()) == 0) c.pop_back();
    if (c.size() <= 1) continue;
    for (const cld& z2 : poly_roots_ld(c)) {
      if (std::abs(std::abs(z2) - 1) > 1e-8L) continue;
      ld th2 = std::arg(z2 * std::conj(t2));
      if (std::abs(th2) > 4 * window) continue;
      out.push_back({static_cast<double>(th1), static_cast<double>(th2)});
    }
  }
  return out;
}

}  // namespace stablekit::boundary
