#include "stablekit/stability.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "stablekit/algebra.hpp"
#include "stablekit/numeric.hpp"

namespace stablekit {

std::string to_string(Domain d) { return d == Domain::Disk ? "disk" : "uhp"; }

Domain parse_domain(const std::string& s) {
  if (s == "disk") return Domain::Disk;
  if (s == "uhp" || s == "halfplane") return Domain::HalfPlane;
  throw std::invalid_argument("unknown domain: " + s);
}

namespace stability {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NoZerosFound: return "NoZerosFound";
    case Verdict::ZeroFound: return "ZeroFound";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

constexpr double kPi = std::numbers::pi;

// Winding number of f around 0 along |z| = 1, refining arcs until the
// argument increment stays below pi/4. Returns -1 if refinement fails.
int winding_number(const std::vector<cd>& c) {
  int deg = static_cast<int>(c.size()) - 1;
  int n = std::max(64, 16 * deg);
  double total = 0;
  for (int k = 0; k < n; ++k) {
    double a = 2 * kPi * k / n, b = 2 * kPi * (k + 1) / n;
    std::vector<std::pair<double, double>> stack{{a, b}};
    while (!stack.empty()) {
      auto [lo, hi] = stack.back();
      stack.pop_back();
      cd fa = horner(c, std::polar(1.0, lo)), fb = horner(c, std::polar(1.0, hi));
      if (std::abs(fa) == 0 || std::abs(fb) == 0) return -1;
      double d = std::arg(fb / fa);
      if (std::abs(d) > kPi / 4) {
        if (hi - lo < 1e-12) return -1;
        double mid = 0.5 * (lo + hi);
        stack.push_back({mid, hi});
        stack.push_back({lo, mid});
        continue;
      }
      total += d;
    }
  }
  return static_cast<int>(std::lround(total / (2 * kPi)));
}

struct SliceOutcome {
  int interior = 0;
  bool contact = false;
  bool identically_zero = false;
  bool mismatch = false;
  cd root;
};

SliceOutcome analyze_slice(std::vector<cd> c, double contact_tol) {
  SliceOutcome out;
  double scale = 0;
  for (cd x : c) scale = std::max(scale, std::abs(x));
  if (scale == 0) {
    out.identically_zero = true;
    return out;
  }
  while (!c.empty() && std::abs(c.back()) <= 1e-13 * scale) c.pop_back();
  if (c.size() <= 1) return out;
  std::vector<cd> roots = poly_roots(c);
  for (cd z : roots) {
    double r = std::abs(z);
    if (std::abs(r - 1) <= contact_tol) {
      out.contact = true;
    } else if (r < 1) {
      ++out.interior;
      out.root = z;
    }
  }
  if (!out.contact) {
    int w = winding_number(c);
    if (w != out.interior) out.mismatch = true;
  }
  return out;
}

std::vector<cd> grid_points(int resolution, double angle_offset) {
  std::vector<cd> pts{cd(0)};
  for (int k = 1; k <= resolution; ++k) {
    double r = static_cast<double>(k) / resolution;
    int na = 4 * resolution;
    for (int j = 0; j < na; ++j) pts.push_back(std::polar(r, 2 * kPi * (j + angle_offset) / na));
  }
  return pts;
}

Result check_disk(const Poly& p, const Options& opts, double angle_offset) {
  Result res;
  int d = p.nvars();
  int last = d - 1;
  std::vector<CPoly> coeffs;
  for (const Poly& c : p.coefficients_in(last)) coeffs.push_back(to_complex(c));
  if (d == 1) {
    std::vector<cd> c;
    for (const auto& x : p.univariate_coeffs(0)) c.push_back(x.to_complex());
    SliceOutcome s = analyze_slice(c, opts.contact_tol);
    res.slices = 1;
    if (s.identically_zero || s.interior > 0) {
      res.verdict = Verdict::ZeroFound;
      res.witness = {s.root};
    } else {
      res.verdict = Verdict::NoZerosFound;
      if (s.contact) res.reason = "zeros on the boundary circle";
    }
    return res;
  }
  std::vector<cd> grid = grid_points(opts.resolution, angle_offset);
  std::vector<std::vector<cd>> outer;
  if (d == 2) {
    for (cd w : grid) outer.push_back({w});
  } else if (d == 3) {
    for (cd w1 : grid)
      for (cd w2 : grid) outer.push_back({w1, w2});
  } else {
    throw std::invalid_argument("stability check supports at most three variables");
  }
  std::vector<SliceOutcome> outcomes(outer.size());
  parallel_for(static_cast<int>(outer.size()), [&](int i) {
    std::vector<cd> pt = outer[i];
    pt.push_back(0);
    std::vector<cd> c;
    for (const CPoly& q : coeffs) c.push_back(q.eval(pt));
    outcomes[i] = analyze_slice(c, opts.contact_tol);
  });
  res.slices = static_cast<int>(outer.size());
  bool interior_contact = false, mismatch = false;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const SliceOutcome& s = outcomes[i];
    bool on_boundary = false;
    for (cd w : outer[i]) on_boundary |= std::abs(std::abs(w) - 1) < 1e-12;
    if (s.mismatch) mismatch = true;
    if (!on_boundary && (s.interior > 0 || s.identically_zero)) {
      res.verdict = Verdict::ZeroFound;
      res.witness = outer[i];
      res.witness.push_back(s.identically_zero ? cd(0) : s.root);
      return res;
    }
    if (on_boundary && s.interior > 0) {
      // Move the outer point inward; a genuine interior zero persists.
      std::vector<cd> pt;
      for (cd w : outer[i]) pt.push_back(w * 0.999);
      pt.push_back(0);
      std::vector<cd> c;
      for (const CPoly& q : coeffs) c.push_back(q.eval(pt));
      SliceOutcome in = analyze_slice(c, opts.contact_tol);
      if (in.interior > 0) {
        res.verdict = Verdict::ZeroFound;
        pt.back() = in.root;
        res.witness = pt;
        return res;
      }
      mismatch = true;
    }
    if (s.contact || s.identically_zero) {
      if (on_boundary) res.boundary_contacts.push_back(outer[i]);
      else interior_contact = true;
    }
  }
  if (interior_contact) {
    res.verdict = Verdict::Inconclusive;
    res.reason = "roots on the boundary circle over interior points";
    return res;
  }
  if (mismatch) {
    res.verdict = Verdict::Inconclusive;
    res.reason = "argument principle and root count disagree";
    return res;
  }
  // Atoral polynomials meet the distinguished boundary in finitely many points.
  if (d == 2) {
    auto n = p.multidegree();
    std::size_t bound = 2 * static_cast<std::size_t>(n[0]) * n[1];
    if (res.boundary_contacts.size() > bound) {
      res.verdict = Verdict::Inconclusive;
      res.reason = "zero curves on the distinguished boundary";
      return res;
    }
  }
  res.verdict = Verdict::NoZerosFound;
  return res;
}

}  // namespace

Result check_stable(const Poly& p, Domain domain, const Options& opts) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial");
  Poly disk = domain == Domain::Disk ? p : cayley_to_disk(p);
  Result res;
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    double offset = attempt == 0 ? 0.0 : 0.37 * attempt;
    res = check_disk(disk, opts, offset);
    if (res.verdict != Verdict::Inconclusive || res.reason == "zero curves on the distinguished boundary")
      break;
  }
  if (domain == Domain::HalfPlane) {
    auto to_hp = [](cd w) { return cd(0, 1) * (1.0 - w) / (1.0 + w); };
    for (cd& w : res.witness) w = to_hp(w);
    for (auto& pt : res.boundary_contacts)
      for (cd& w : pt) w = to_hp(w);
  }
  return res;
}

DichotomySplit dichotomy_split(const Poly& p, Domain domain) {
  if (p.is_zero()) throw std::invalid_argument("dichotomy split of the zero polynomial");
  auto reflect = [domain](const Poly& q) {
    return domain == Domain::Disk ? reflect_tilde(q) : reflect_bar(q);
  };
  DichotomySplit s;
  s.symmetric_part = gcd(p, reflect(p));
  auto q = divide_exact(p, s.symmetric_part);
  if (!q) throw std::logic_error("gcd does not divide the polynomial");
  s.pure_part = *q;
  s.pure = s.symmetric_part.total_degree() == 0;
  Poly r = reflect(s.symmetric_part);
  s.unimodular_const = r.leading_term().second / s.symmetric_part.leading_term().second;
  if (r != s.symmetric_part * s.unimodular_const)
    throw std::logic_error("symmetric part is not self-reflective");
  return s;
}

}  // namespace stability
}  // namespace stablekit
