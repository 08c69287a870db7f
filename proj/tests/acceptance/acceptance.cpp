#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stablekit/boundary.hpp"
#include "stablekit/fixtures.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/integrability.hpp"
#include "stablekit/numerator.hpp"
#include "stablekit/parse.hpp"
#include "stablekit/puiseux.hpp"
#include "stablekit/realization.hpp"
#include "stablekit/regularity.hpp"
#include "stablekit/series.hpp"

using namespace stablekit;

namespace {

const std::vector<GaussRat> kOrigin{GaussRat(0), GaussRat(0)};
const std::vector<GaussRat> kOne{GaussRat(1), GaussRat(1)};

Poly P(const std::string& s) { return parse_poly(s); }

// Collects failed expectations for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool passed() const { return failures_.empty(); }
  std::string summary() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < failures_.size() && k < 5; ++k) os << (k ? "; " : "") << failures_[k];
    if (failures_.size() > 5) os << "; ... " << failures_.size() - 5 << " more";
    return os.str();
  }

 private:
  std::vector<std::string> failures_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<puiseux::Branch> by_slope(std::vector<puiseux::Branch> bs) {
  std::sort(bs.begin(), bs.end(), [](const auto& a, const auto& b) {
    return a.series.at(a.ramification).real() < b.series.at(b.ramification).real();
  });
  return bs;
}

void criterion1(Check& c) {
  Poly p = P("4 - 3*z1 - 3*z2 + z1^2*z2 + z1*z2^2");
  Poly image = cayley_to_halfplane(p, {2, 2});
  auto dec = homog::decompose(image);
  c.expect(dec.order == 2, "order of vanishing");
  c.expect(dec.part(2) == P("-4(z2^2 + 4z1z2 + z1^2)"), "P_2");
  double s3 = std::sqrt(3.0);
  auto slopes = homog::tangent_slopes(dec.part(2));
  c.expect(slopes.slopes.size() == 2, "two slopes");
  if (slopes.slopes.size() == 2) {
    c.expect(std::abs(slopes.slopes[0].value - (2 - s3)) < 1e-9, "slope 2-sqrt3");
    c.expect(std::abs(slopes.slopes[1].value - (2 + s3)) < 1e-9, "slope 2+sqrt3");
  }
  auto f = puiseux::puiseux_factorize(image, kOrigin);
  auto bs = by_slope(f.branches);
  c.expect(bs.size() == 2, "two branches");
  double second[2] = {6 - 10 / s3, 6 + 10 / s3};
  for (std::size_t k = 0; k < bs.size() && k < 2; ++k) {
    c.expect(bs[k].type == puiseux::BranchType::Pure, "pure branch");
    std::complex<double> expected(0, second[k]);
    double rel = std::abs(bs[k].series.at(2) - expected) / std::abs(expected);
    c.expect(rel < 1e-8, "second-order coefficient rel err " + fmt(rel));
  }
  auto n = homog::normalize_lowest(image, kOrigin);
  c.expect(homog::interlacing_check(n.split.A.homogeneous_part(2), n.split.B.homogeneous_part(3)).holds,
           "interlacing");
}

void criterion2(Check& c) {
  Poly image = fixtures::halfplane_image(fixtures::get("sextic_contact"), kOne);
  auto f = puiseux::puiseux_factorize(image, kOrigin);
  c.expect(f.branches.size() == 1, "one branch");
  if (f.branches.size() == 1) {
    const auto& b = f.branches[0];
    c.expect(b.segment_exact.has_value() && b.segment_poly() == P("z1 + 4z1^3 + 24z1^5"), "segment");
    c.expect(b.cutoff == 6, "cutoff");
    c.expect(std::abs(b.psi0() - std::complex<double>(0, 8)) < 1e-8, "psi(0)");
  }
  auto n = homog::normalize_lowest(image, kOrigin);
  auto r = regularity::analyze_regularity(-n.split.B, n.split.A, kOrigin, 5);
  std::vector<std::optional<Poly>> expected{P("z1"), Poly(2), P("2 z1^3"), Poly(2), std::nullopt};
  c.expect(r.parts.size() == 5, "five parts");
  for (std::size_t j = 0; j < r.parts.size() && j < 5; ++j) {
    std::string name = "F" + std::to_string(j + 1);
    if (expected[j])
      c.expect(r.parts[j].polynomial && r.parts[j].value == expected[j], name);
    else
      c.expect(!r.parts[j].polynomial, name + " non-polynomial");
  }
  c.expect(r.ck_order == 4, "ck_order");
  auto u = regularity::uco_regularity_crosscheck(image, kOrigin);
  c.expect(u.K_min == 6 && u.ck_order == 4 && u.tight, "uco tight");
}

void criterion3(Check& c) {
  struct Table {
    std::string den;
    std::vector<std::string> indices;
  };
  std::vector<Table> tables{
      {"2 - z1 - z2", {"3/2", "3", "inf"}},
      {"4 - 3z1 - z2 - z1z2 + z1^2", {"5/4", "5/3", "5/2", "5", "inf"}},
      {"4 - z2 + z1z2 - 3z1^2z2 - z1^3z2", {"5/4", "3/2", "5/3", "5/2", "3", "5", "inf"}},
  };
  for (const auto& t : tables) {
    Poly p = P(t.den);
    auto prof = integrability::derivative_integrability_indices(p);
    std::vector<std::string> got;
    for (const auto& ix : prof.indices) got.push_back(ix.to_string());
    c.expect(got == t.indices, "indices of " + t.den);
    for (std::size_t k = 0; k < prof.indices.size(); ++k) {
      if (prof.indices[k].infinite) continue;
      double idx = prof.indices[k].to_double();
      double hi = 1.05 * idx;
      if (k + 1 < prof.indices.size() && !prof.indices[k + 1].infinite)
        hi = std::min(hi, (idx + prof.indices[k + 1].to_double()) / 2);
      auto est = integrability::integrability_cutoff_estimate(prof.witnesses[k], p, {0.95 * idx, hi});
      std::string tag = t.den + " index " + prof.indices[k].to_string();
      c.expect(est[0].verdict == integrability::Verdict::Finite, tag + " finite below");
      c.expect(est[1].verdict == integrability::Verdict::Divergent, tag + " divergent above");
    }
    if (t.indices.size() == 7) {
      std::vector<int> Ks;
      for (const auto& z : prof.zeros) Ks.push_back(z.K);
      std::sort(Ks.begin(), Ks.end());
      c.expect(Ks == std::vector<int>{2, 4}, "per-zero contact orders");
    }
  }
  c.expect(integrability::residual_zero_at(P("(1 + z1)(1 + z1 z2)"), P("4 - z2 + z1z2 - 3z1^2z2 - z1^3z2"),
                                           {GaussRat(-1), GaussRat(1)}),
           "witness r at (-1,1)");
}

void criterion4(Check& c) {
  const auto& fx = fixtures::get("rsf_fav");
  Poly p = fixtures::halfplane_image(fx, kOne);
  Poly q = fixtures::halfplane_numerator(fx, kOne);
  c.expect(numerator::is_locally_bounded(q, p, kOrigin).verdict == numerator::Verdict::Bounded,
           "bounded numerator");
  auto u = numerator::is_locally_bounded(P("z1"), p, kOrigin);
  c.expect(u.verdict == numerator::Verdict::Unbounded, "z1 unbounded");
  if (u.witness >= 0)
    c.expect(std::abs(u.curves[u.witness].slope + 1) <= 0.05,
             "blow-up slope " + fmt(u.curves[u.witness].slope));
  else
    c.expect(false, "no witness curve");

  Poly sextic = fixtures::halfplane_image(fixtures::get("sextic_contact"), kOne);
  auto ideal = numerator::segment_ideal(puiseux::puiseux_factorize(sextic, kOrigin));
  std::vector<Poly> gens = ideal.generators;
  std::vector<Poly> expected{P("z2 + z1 + 4z1^3 + 24z1^5"), P("z1^6")};
  bool same = gens.size() == expected.size();
  for (const auto& g : expected) same = same && std::find(gens.begin(), gens.end(), g) != gens.end();
  c.expect(same, "generator set");
  c.expect(numerator::quotient_dimension(ideal) == 6, "dimension 6");
  c.expect(numerator::reduce_mod_ideal(P("1"), ideal).dimension == 6, "normal form dimension 6");
  auto simple = numerator::segment_ideal(puiseux::puiseux_factorize(p, kOrigin));
  c.expect(numerator::quotient_dimension(simple) == 2, "dimension 2");
  c.expect(numerator::reduce_mod_ideal(P("1"), simple).dimension == 2, "normal form dimension 2");
}

using Series = TruncatedSeries<GaussRat>;

// One synthetic factor (1 - i z)^d z2 + H(z) whose branch is z2 = -h(sigma(z)).
struct Synthetic {
  Poly factor;
  Series branch;  // h(sigma(z))
};

Synthetic synthetic_factor(std::mt19937_64& rng, const Rational& r, int T) {
  std::uniform_int_distribution<int> small(-3, 3), pos(1, 4), half(1, 2);
  int twoL = 2 * half(rng);
  // h(z) = q(z) + z^{2L} psi(z), deg q < 2L, q'(0) > 0, Im psi(0) > 0.
  std::vector<GaussRat> h(twoL + 2, GaussRat(0));
  h[1] = GaussRat(Rational(pos(rng), pos(rng)));
  for (int k = 2; k < twoL; ++k) h[k] = GaussRat(Rational(small(rng), pos(rng)));
  h[twoL] = GaussRat(Rational(small(rng), pos(rng)), Rational(pos(rng), pos(rng)));
  h[twoL + 1] = GaussRat(Rational(small(rng), pos(rng)), Rational(small(rng), pos(rng)));
  int d = static_cast<int>(h.size()) - 1;
  // H(z) = sum_k h_k (2 r z)^k (1 - i z)^{d - k}
  Poly z1 = Poly::variable(2, 0), one = Poly::constant(2, GaussRat(1));
  Poly w = one - GaussRat::i() * z1;
  Poly H(2);
  for (int k = 1; k <= d; ++k) H += h[k] * (GaussRat(2 * r) * z1).pow(k) * w.pow(d - k);
  Poly factor = w.pow(d) * Poly::variable(2, 1) + H;

  Series t = Series::variable(T);
  Series sigma = (t * GaussRat(2 * r)) * (Series::constant(GaussRat(1), T) - t * GaussRat::i()).reciprocal();
  Series hs(std::vector<GaussRat>(h.begin(), h.end()), T);
  return {factor, hs.compose(sigma)};
}

void criterion5(Check& c) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> tnum(-40, 40);
  for (const auto& [label, p] : fixtures::halfplane_corpus()) {
    std::vector<Rational> ts;
    while (ts.size() < 3) {
      Rational t(tnum(rng), 8);
      if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
    }
    auto m = puiseux::match_perturbed_segments(p, kOrigin, ts);
    bool varies = std::all_of(m.varies.begin(), m.varies.end(), [](bool v) { return v; });
    c.expect(m.ok && varies, "segments of " + label + (m.reason.empty() ? "" : ": " + m.reason));
  }
  Poly sextic = fixtures::halfplane_image(fixtures::get("sextic_contact"), kOne);
  auto ua = puiseux::unit_affine_check(sextic, kOrigin, {1, 2, 3});
  c.expect(ua.ok && !ua.vacuous && ua.checked_degree >= 4, "unit affine for j <= 4");

  const int T = 12;
  Rational r(1, 32);
  std::uniform_int_distribution<int> factors(1, 2);
  for (int trial = 0; trial < 10; ++trial) {
    int k = factors(rng);
    std::vector<Synthetic> parts;
    Poly p = Poly::constant(2, GaussRat(1));
    for (int j = 0; j < k; ++j) {
      parts.push_back(synthetic_factor(rng, r, T));
      p *= parts.back().factor;
    }
    std::string tag = "synthetic " + std::to_string(trial);
    auto f = puiseux::puiseux_factorize(p, kOrigin);
    c.expect(static_cast<int>(f.branches.size()) == k, tag + " branch count");
    for (const auto& b : f.branches) {
      c.expect(b.type == puiseux::BranchType::Pure, tag + " pure");
      if (!b.series_exact) {
        c.expect(false, tag + " exact series");
        continue;
      }
      const auto& s = *b.series_exact;
      bool matched = false;
      for (const auto& part : parts) {
        bool all = true;
        int n = std::min<int>(static_cast<int>(s.size()), std::min(b.order, T));
        for (int i = 0; i < n; ++i) all = all && s[i] == part.branch[i];
        if (all && n >= 6) matched = true;
      }
      c.expect(matched, tag + " series recovery");
      int cutoff = 0;
      for (int i = 1; i < static_cast<int>(s.size()); ++i)
        if (!s[i].is_real()) {
          cutoff = i;
          break;
        }
      c.expect(b.cutoff == cutoff, tag + " cutoff");
    }
  }
}

void criterion6(Check& c) {
  int branches = 0;
  for (const auto& [label, p] : fixtures::halfplane_corpus()) {
    auto f = puiseux::puiseux_factorize(p, kOrigin);
    for (const auto& b : f.branches) {
      if (b.type != puiseux::BranchType::Pure) continue;
      ++branches;
      auto lb = puiseux::verify_branch_lower_bound(b, 0.05, 10000);
      c.expect(lb.passed && lb.c_hat > 0 && lb.samples >= 10000, label + " c_hat " + fmt(lb.c_hat));
    }
  }
  c.expect(branches > 0, "no pure branches");
}

void criterion7(Check& c) {
  const auto& fx = fixtures::get("rsf_fav");
  Poly p = fixtures::denominator(fx), q = fixtures::numerator(fx);
  boundary::Horn horn{boundary::HornKind::NonTrivial, -1, 5, 1e-2};
  for (std::complex<double> lambda : {std::complex<double>(1, 0), {0.5, 0.5}, {0.5, -0.5}}) {
    auto pts = boundary::trace_torus_level_set(q, p, lambda, kOne, 0.05);
    std::vector<boundary::Point> inner;
    for (const auto& x : pts)
      if (std::hypot(x[0], x[1]) <= horn.radius) inner.push_back(x);
    std::string tag = "lambda " + fmt(lambda.real()) + "+" + fmt(lambda.imag()) + "i";
    c.expect(inner.size() >= 10, tag + " has points near the zero");
    c.expect(boundary::horn_classify(inner, {horn}).trapped, tag + " trapped");
    double B = boundary::fit_horn_constant(pts, boundary::HornKind::NonTrivial, -1, horn.radius);
    c.expect(B <= 5, tag + " B " + fmt(B));
  }

  Poly uhp = fixtures::denominator(fixtures::get("uhp_simple"));
  auto reg = boundary::level_region(uhp, -1, 1, {0.1, 1.0});
  c.expect(reg.certified, "region certified");
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u1(1e-4, 0.1), u2(-0.2, 0.1);
  int mismatches = 0;
  for (int k = 0; k < 200; ++k) {
    double x1 = u1(rng), x2 = u2(rng);
    if (reg.contains(x1, x2) != reg.ratio_contains(x1, x2)) ++mismatches;
  }
  c.expect(mismatches == 0, "sandwich mismatches " + std::to_string(mismatches));

  std::vector<boundary::Point> planted;
  for (int k = 1; k <= 60; ++k) {
    double x = std::pow(0.75, k);
    planted.push_back({x, -x + std::pow(x, 1.5)});
  }
  c.expect(!boundary::horn_classify(planted, {boundary::Horn{boundary::HornKind::NonTrivial, -1, 5, 1}}).trapped,
           "planted sequence not trapped");
}

void criterion8(Check& c) {
  using namespace realization;
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> re(-3, 3), lg(-3, 0.5);
  double worst_rel = 0, worst_im = 1e300;
  for (int trial = 0; trial < 50; ++trial) {
    int n = dim(rng);
    int k = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    PipRealization R = random_realization(n, k, 1000 + trial);
    auto rep = validate_pip(R, 10000, trial + 1);
    worst_im = std::min(worst_im, rep.min_im_g);
    c.expect(rep.valid && rep.min_im_g >= -1e-10, "Pick sampling " + std::to_string(trial));
    auto L = local_split(R, 1e-9);
    c.expect(L.invariants_hold, "split invariants " + std::to_string(trial));
    for (int s = 0; s < 50; ++s) {
      cd w1(re(rng), std::pow(10.0, lg(rng))), w2(re(rng), std::pow(10.0, lg(rng)));
      cd g = eval_realization(R, w1, w2), h = eval_local(R, L, w1, w2);
      worst_rel = std::max(worst_rel, std::abs(g - h) / std::max(std::abs(g), 1e-300));
    }
  }
  c.expect(worst_rel <= 1e-9, "formula agreement " + fmt(worst_rel));
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = std::string(STABLEKIT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void criterion9(Check& c) {
  for (const auto& fx : fixtures::corpus()) {
    Run a = run_cli("full --fixture " + fx.name);
    Run b = run_cli("full --fixture " + fx.name);
    Run t1 = run_cli("full --fixture " + fx.name + " --threads 1");
    Run t8 = run_cli("full --fixture " + fx.name + " --threads 8");
    c.expect(!a.out.empty() && a.code != 1, fx.name + " ran");
    c.expect(a.out == b.out, fx.name + " repeat");
    c.expect(t1.out == t8.out && t1.out == a.out, fx.name + " threads");
  }
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"twin tangent pipeline", criterion1},
      {"contact order six pipeline", criterion2},
      {"integrability tables", criterion3},
      {"numerator decisions", criterion4},
      {"perturbation suite", criterion5},
      {"lower-bound certificates", criterion6},
      {"horn and level-set suite", criterion7},
      {"realization suite", criterion8},
      {"determinism", criterion9},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 60, "took " + fmt(secs) + " s");
    std::cout << (c.passed() ? "PASS" : "FAIL") << " " << k + 1 << " " << criteria[k].first << " ("
              << fmt(secs) << " s)";
    if (!c.passed()) std::cout << ": " << c.summary();
    std::cout << "\n";
    if (!c.passed()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
