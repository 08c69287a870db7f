#include "doctest.h"
#include "stablekit/algebra.hpp"
#include "stablekit/fixtures.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/parse.hpp"
#include "stablekit/stability.hpp"

using namespace stablekit;
using namespace stablekit::stability;

namespace {
Poly P(const std::string& s) { return parse_poly(s); }
}  // namespace

TEST_CASE("check_stable") {
  CHECK(check_stable(P("2 - z1 - z2"), Domain::Disk).verdict == Verdict::NoZerosFound);

  auto r = check_stable(P("z1 z2 - 1/4"), Domain::Disk);
  REQUIRE(r.verdict == Verdict::ZeroFound);
  REQUIRE(r.witness.size() == 2);
  CHECK(std::abs(r.witness[0]) < 1);
  CHECK(std::abs(r.witness[1]) < 1);
  CHECK(std::abs(r.witness[0] * r.witness[1] - 0.25) < 1e-9);

  Poly p2 = P("(1 - 2i z1)((1 - 2i z1)^2 z2 + z1(1 - 2i z1) + i z1^2)^2 - 2 z1^5");
  CHECK(check_stable(p2, Domain::HalfPlane).verdict == Verdict::NoZerosFound);

  CHECK(check_stable(P("z1 + z2 + 2i z1 z2"), Domain::HalfPlane).verdict == Verdict::ZeroFound);
  CHECK(check_stable(P("1 - z1/2"), Domain::Disk).verdict == Verdict::NoZerosFound);
  CHECK(check_stable(P("4 - z1 - z2 - z3"), Domain::Disk).verdict == Verdict::NoZerosFound);
  CHECK_THROWS(check_stable(Poly(2), Domain::Disk));
}

TEST_CASE("toral polynomials are never reported with interior zeros") {
  auto r = check_stable(P("z1 z2 - 1"), Domain::Disk);
  CHECK(r.verdict != Verdict::ZeroFound);
  CHECK_FALSE(r.boundary_contacts.empty());
}

TEST_CASE("dichotomy_split") {
  Poly pure = P("z1 + z2 - 2i z1 z2");
  auto d = dichotomy_split(P("z1 + z2") * pure, Domain::HalfPlane);
  CHECK(d.symmetric_part == P("z1 + z2"));
  CHECK(d.symmetric_part * d.pure_part == P("z1 + z2") * pure);
  CHECK(make_monic(d.pure_part) == make_monic(pure));

  auto e = dichotomy_split(pure, Domain::HalfPlane);
  CHECK(e.pure);
  CHECK(e.symmetric_part.total_degree() == 0);
  CHECK(e.symmetric_part * e.pure_part == pure);

  Poly real = P("z1 + z2 - 4 z1 z2");
  auto f = dichotomy_split(real, Domain::HalfPlane);
  CHECK(f.pure_part.total_degree() == 0);
  CHECK(f.symmetric_part * f.pure_part == real);

  Poly toral = P("(z1 z2 - 1)(2 - z1 - z2)");
  auto g = dichotomy_split(toral, Domain::Disk);
  CHECK(g.symmetric_part == P("z1 z2 - 1"));
  CHECK(g.symmetric_part * g.pure_part == toral);
  CHECK(reflect_tilde(g.symmetric_part) == g.unimodular_const * g.symmetric_part);
}

TEST_CASE("A + tB is free of zeros in the open half-plane") {
  std::vector<GaussRat> origin{GaussRat(0), GaussRat(0)};
  for (const auto& [label, p] : fixtures::halfplane_corpus()) {
    CAPTURE(label);
    auto n = homog::normalize_lowest(p, origin);
    for (long t : {-2L, 1L, 3L}) {
      Poly level = n.split.A + GaussRat(t) * n.split.B;
      CHECK(check_stable(level, Domain::HalfPlane).verdict != Verdict::ZeroFound);
    }
    CHECK(check_stable(n.split.B, Domain::HalfPlane).verdict != Verdict::ZeroFound);
  }
}
