#include <algorithm>

#include "doctest.h"
#include "stablekit/fixtures.hpp"
#include "stablekit/numerator.hpp"
#include "stablekit/parse.hpp"
#include "stablekit/puiseux.hpp"

using namespace stablekit;
using namespace stablekit::numerator;

namespace {

Poly P(const std::string& s) { return parse_poly(s); }
const std::vector<GaussRat> kOrigin{GaussRat(0), GaussRat(0)};
const std::vector<GaussRat> kOne{GaussRat(1), GaussRat(1)};

Poly sextic_image() {
  return fixtures::halfplane_image(fixtures::get("sextic_contact"), kOne);
}

IdealPresentation ideal_of(const Poly& p) {
  return segment_ideal(puiseux::puiseux_factorize(p, kOrigin));
}

bool same_set(std::vector<Poly> a, std::vector<Poly> b) {
  if (a.size() != b.size()) return false;
  for (const auto& g : a)
    if (std::find(b.begin(), b.end(), g) == b.end()) return false;
  return true;
}

}  // namespace

TEST_CASE("segment ideals") {
  auto a = ideal_of(sextic_image());
  CHECK(a.tag == CaseTag::Order1);
  REQUIRE(a.exact);
  CHECK(same_set(a.generators, {P("z2 + z1 + 4z1^3 + 24z1^5"), P("z1^6")}));

  auto b = ideal_of(P("z1 + z2 - 2i z1 z2"));
  CHECK(b.tag == CaseTag::Order1);
  CHECK(same_set(b.generators, {P("z2 + z1"), P("z1^2")}));

  auto c = ideal_of(P("(z2 + z1 + i z1^2)(z2 + z1 + i z1^4)"));
  CHECK(c.tag == CaseTag::RepeatedSegments);
  REQUIRE(c.exact);
  CHECK(same_set(c.generators, {P("(z2 + z1)^2"), P("z1^2 (z2 + z1)"), P("z1^6")}));

  auto d = ideal_of(P("(z2 + z1 + i z1^2)(z2 + 2 z1 + i z1^2)"));
  CHECK(d.tag == CaseTag::DoublePoint);
}

TEST_CASE("surrogate polynomials") {
  auto fa = puiseux::puiseux_factorize(sextic_image(), kOrigin);
  CHECK(surrogate_poly(fa) == P("z2 + z1 + 4z1^3 + 24z1^5 + i z1^6"));
  auto fb = puiseux::puiseux_factorize(P("z1 + z2 - 2i z1 z2"), kOrigin);
  CHECK(surrogate_poly(fb) == P("z2 + z1 + i z1^2"));
  auto fc = puiseux::puiseux_factorize(P("(z2 + z1 + i z1^2)^2"), kOrigin);
  CHECK(surrogate_poly(fc) == P("(z2 + z1 + i z1^2)^2"));
}

TEST_CASE("reduce_mod_ideal") {
  auto ideal = ideal_of(P("z1 + z2 - 2i z1 z2"));
  CHECK(reduce_mod_ideal(P("z1 z2"), ideal).residual_zero);
  auto nf = reduce_mod_ideal(P("z1"), ideal);
  CHECK_FALSE(nf.residual_zero);
  REQUIRE(nf.coefficients.size() >= 1);
  CHECK(nf.coefficients[0] == P("z1"));
  CHECK(reduce_mod_ideal(Poly(2), ideal).residual_zero);
  CHECK(nf.dimension == 2);

  auto sextic = ideal_of(sextic_image());
  CHECK(reduce_mod_ideal(P("z1^6 + z1^2 (z2 + z1 + 4z1^3 + 24z1^5)"), sextic).residual_zero);
  CHECK_FALSE(reduce_mod_ideal(P("z1^5"), sextic).residual_zero);
}

TEST_CASE("quotient dimension equals the contact order") {
  CHECK(quotient_dimension(ideal_of(sextic_image())) == 6);
  CHECK(quotient_dimension(ideal_of(P("z1 + z2 - 2i z1 z2"))) == 2);
  CHECK(reduce_mod_ideal(P("1"), ideal_of(sextic_image())).dimension == 6);
}

TEST_CASE("locally bounded decisions") {
  const auto& fx = fixtures::get("rsf_fav");
  Poly p = fixtures::halfplane_image(fx, kOne);
  Poly q = fixtures::halfplane_numerator(fx, kOne);

  auto a = is_locally_bounded(q, p, kOrigin);
  CHECK(a.verdict == Verdict::Bounded);
  CHECK(a.sampling_agrees);

  auto b = is_locally_bounded(P("z1"), p, kOrigin);
  CHECK(b.verdict == Verdict::Unbounded);
  REQUIRE(b.witness >= 0);
  CHECK(std::abs(b.curves[b.witness].slope + 1) < 0.05);
}

TEST_CASE("corpus membership properties") {
  int pairs = 0;
  for (const auto& [label, p] : fixtures::halfplane_corpus()) {
    CAPTURE(label);
    auto f = puiseux::puiseux_factorize(p, kOrigin);
    auto ideal = segment_ideal(f);
    if (!ideal.exact) continue;
    CHECK(ideal_contains(p, ideal));
    CHECK(ideal_contains(reflect_bar(p), ideal));

    auto bar = is_locally_bounded(reflect_bar(p), p, kOrigin);
    CHECK(bar.verdict == Verdict::Bounded);
    CHECK(bar.sampling_agrees);

    Poly sq = surrogate_poly(f);
    for (const Poly& g : {reflect_bar(p), P("z1"), P("z1 z2"), P("z2^2")}) {
      auto vp = is_locally_bounded(g, p, kOrigin).verdict;
      auto vs = is_locally_bounded(g, sq, kOrigin).verdict;
      CHECK(vp == vs);
      ++pairs;
    }
  }
  CHECK(pairs >= 10);
}
