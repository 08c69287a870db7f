#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "stablekit/fixtures.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/parse.hpp"
#include "stablekit/puiseux.hpp"

using namespace stablekit;
using namespace stablekit::puiseux;

namespace {

Poly P(const std::string& s) { return parse_poly(s); }
const std::vector<GaussRat> kOrigin{GaussRat(0), GaussRat(0)};
const double kSqrt3 = std::sqrt(3.0);

Poly twin_tangent_image() {
  return GaussRat(-4) * P("z2^2 + 4z1z2 + z1^2 - 2z1^2z2^2 - 4i z1z2(z1 + z2)");
}

Poly sextic_image() {
  return fixtures::halfplane_image(fixtures::get("sextic_contact"), {GaussRat(1), GaussRat(1)});
}

std::vector<Branch> by_slope(std::vector<Branch> bs) {
  std::sort(bs.begin(), bs.end(),
            [](const Branch& a, const Branch& b) { return a.segment.at(1) < b.segment.at(1); });
  return bs;
}

bool close_rel(std::complex<double> a, std::complex<double> b, double tol) {
  return std::abs(a - b) <= tol * std::abs(b);
}

}  // namespace

TEST_CASE("two smooth pure branches") {
  auto f = puiseux_factorize(twin_tangent_image(), kOrigin);
  CHECK(f.order == 2);
  REQUIRE(f.branches.size() == 2);
  auto bs = by_slope(f.branches);
  double slopes[2] = {2 - kSqrt3, 2 + kSqrt3};
  double psi[2] = {6 - 10 / kSqrt3, 6 + 10 / kSqrt3};
  for (int k = 0; k < 2; ++k) {
    CHECK(bs[k].type == BranchType::Pure);
    CHECK(bs[k].ramification == 1);
    CHECK(bs[k].cutoff == 2);
    CHECK(std::abs(bs[k].segment[1] - slopes[k]) < 1e-9);
    CHECK(close_rel(bs[k].psi0(), {0, psi[k]}, 1e-8));
  }
  auto c = contact_orders(f);
  CHECK(c.K == 2);
  CHECK(c.K_min == 2);
}

TEST_CASE("one branch with cutoff six") {
  auto f = puiseux_factorize(sextic_image(), kOrigin);
  CHECK(f.order == 1);
  REQUIRE(f.branches.size() == 1);
  const Branch& b = f.branches[0];
  CHECK(b.type == BranchType::Pure);
  CHECK(b.cutoff == 6);
  REQUIRE(b.segment_exact.has_value());
  std::vector<Rational> expected{0, 1, 0, 4, 0, 24};
  CHECK(*b.segment_exact == expected);
  CHECK(close_rel(b.psi0(), {0, 8}, 1e-8));
  CHECK(b.segment_poly() == P("z1 + 4z1^3 + 24z1^5"));
  auto c = contact_orders(f);
  CHECK(c.K == 6);
  CHECK(c.K_min == 6);
}

TEST_CASE("real type branches") {
  auto f = puiseux_factorize(P("4(z2^2 + 4z1z2 + z1^2 - 2z1^2z2^2)"), kOrigin);
  REQUIRE(f.branches.size() == 2);
  auto bs = by_slope(f.branches);
  CHECK(bs[0].type == BranchType::Real);
  CHECK(bs[1].type == BranchType::Real);
  CHECK(std::abs(bs[0].series[1] - (2 - kSqrt3)) < 1e-9);
  CHECK(std::abs(bs[1].series[1] - (2 + kSqrt3)) < 1e-9);
  CHECK_THROWS(contact_orders(f));
}

TEST_CASE("ramified branch") {
  auto f = puiseux_factorize(P("(z2 + z1 + i z1^2)^2 - 2 z1^5"), kOrigin);
  REQUIRE(f.branches.size() == 1);
  CHECK(f.branches[0].ramification == 2);
  CHECK(f.branches[0].cutoff == 2);
  CHECK(f.total_multiplicity() == 2);
  auto c = contact_orders(f);
  CHECK(c.K == 2);
  CHECK(c.K_min == 2);
}

TEST_CASE("switch_variables") {
  auto f = puiseux_factorize(P("z1 + z2 - 2i z1 z2"), kOrigin);
  auto s = switch_variables(f);
  REQUIRE(s.branches.size() == 1);
  CHECK(s.branches[0].cutoff == 2);
  CHECK(s.branches[0].segment_poly() == P("z1"));

  auto g = switch_variables(puiseux_factorize(sextic_image(), kOrigin));
  REQUIRE(g.branches.size() == 1);
  CHECK(g.branches[0].cutoff == 6);
  CHECK(g.branches[0].segment_poly() == P("z1 - 4z1^3 + 24z1^5"));

  auto t = puiseux_factorize(twin_tangent_image(), kOrigin);
  auto tt = by_slope(switch_variables(switch_variables(t)).branches);
  auto orig = by_slope(t.branches);
  REQUIRE(tt.size() == orig.size());
  for (std::size_t k = 0; k < tt.size(); ++k) {
    CHECK(tt[k].cutoff == orig[k].cutoff);
    CHECK(std::abs(tt[k].segment[1] - orig[k].segment[1]) < 1e-9);
  }
}

TEST_CASE("verify_branch_lower_bound") {
  Branch h;
  h.type = BranchType::Pure;
  h.cutoff = 2;
  h.segment = {0, 1};
  h.series = {0, 1, {0, 1}};
  h.order = 3;
  h.psi = {{0, 1}};
  auto lb = verify_branch_lower_bound(h, 0.125);
  CHECK(lb.passed);
  CHECK(lb.c_hat >= 0.5);

  Branch real;
  real.type = BranchType::Real;
  real.series = {0, 1};
  real.order = 2;
  CHECK_THROWS(verify_branch_lower_bound(real, 0.125));

  auto f = puiseux_factorize(sextic_image(), kOrigin);
  auto s = verify_branch_lower_bound(f.branches.at(0), 0.05);
  CHECK(s.passed);
  CHECK(s.c_hat > 0);
}

TEST_CASE("match_perturbed_segments") {
  auto a = match_perturbed_segments(P("z1 + z2 - 2i z1 z2"), kOrigin, {1, 2, 5});
  CHECK(a.ok);
  CHECK(a.exceptional.empty());
  REQUIRE(a.varies.size() == 1);
  CHECK(a.varies[0]);

  auto b = match_perturbed_segments(twin_tangent_image(), kOrigin, {0, 1, 3});
  CHECK(b.ok);

  CHECK_THROWS(match_perturbed_segments(P("z1 + z2 - 2i z1 z2"), kOrigin, {1, 2}));
}

TEST_CASE("unit_affine_check") {
  auto a = unit_affine_check(twin_tangent_image(), kOrigin, {1, 2, 3});
  CHECK(a.ok);
  CHECK(a.vacuous);

  auto b = unit_affine_check(sextic_image(), kOrigin, {1, 2, 3});
  CHECK(b.ok);
  CHECK_FALSE(b.vacuous);
  CHECK(b.checked_degree >= 4);

  auto c = unit_affine_check(P("z2 + z1 + i z1^4"), kOrigin, {1, 2, 3});
  CHECK(c.ok);
  CHECK(c.checked_degree >= 2);
}

TEST_CASE("corpus invariants") {
  for (const auto& [label, p] : fixtures::halfplane_corpus()) {
    CAPTURE(label);
    auto f = puiseux_factorize(p, kOrigin);
    auto dec = homog::decompose(p);
    CHECK(f.total_multiplicity() == dec.order);
    CHECK(f.reconstruction_residual < 1e-8);

    auto n = homog::normalize_lowest(p, kOrigin);
    auto slopes = homog::tangent_slopes(n.split.A.homogeneous_part(dec.order));
    std::vector<double> from_branches, from_tangent;
    for (const auto& b : f.branches) {
      CHECK(b.type == BranchType::Pure);
      for (int k = 0; k < b.ramification; ++k) from_branches.push_back(b.series.at(b.ramification).real());
      auto lb = verify_branch_lower_bound(b, 0.05);
      CHECK(lb.passed);
    }
    for (const auto& s : slopes.slopes) from_tangent.push_back(s.value.real());
    std::sort(from_branches.begin(), from_branches.end());
    std::sort(from_tangent.begin(), from_tangent.end());
    REQUIRE(from_branches.size() == from_tangent.size());
    for (std::size_t k = 0; k < from_tangent.size(); ++k)
      CHECK(std::abs(from_branches[k] - from_tangent[k]) < 1e-7);

    auto c = contact_orders(f);
    auto cs = contact_orders(switch_variables(f));
    CHECK(c.K == cs.K);
    CHECK(c.K_min == cs.K_min);
  }
}
