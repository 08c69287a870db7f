#include <cmath>

#include "doctest.h"
#include "stablekit/fixtures.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/parse.hpp"

using namespace stablekit;
using namespace stablekit::homog;

namespace {

Poly P(const std::string& s) { return parse_poly(s); }
const std::vector<GaussRat> kOrigin{GaussRat(0), GaussRat(0)};
const std::vector<GaussRat> kOne{GaussRat(1), GaussRat(1)};

Poly twin_tangent_image() {
  return GaussRat(-4) * P("z2^2 + 4z1z2 + z1^2 - 2z1^2z2^2 - 4i z1z2(z1 + z2)");
}

std::vector<double> finite_slopes(const SlopeProfile& s) {
  std::vector<double> out;
  for (const auto& sl : s.slopes)
    if (!sl.infinite) out.push_back(sl.value.real());
  return out;
}

}  // namespace

TEST_CASE("decompose") {
  auto d = decompose(P("2 - z1 - z2"), kOne);
  CHECK(d.order == 1);
  CHECK(d.part(1) == P("-z1 - z2"));

  auto e = decompose(twin_tangent_image());
  CHECK(e.order == 2);
  CHECK(e.part(2) == P("-4(z2^2 + 4z1z2 + z1^2)"));

  auto f = decompose(P("3 + z1 z2"), kOrigin);
  CHECK(f.order == 0);
  CHECK(f.part(0) == P("3"));

  CHECK_THROWS(decompose(Poly(2), kOrigin));
}

TEST_CASE("decompose is exact") {
  std::vector<GaussRat> c{GaussRat(1, 2), GaussRat(-1, 1)};
  Poly p = P("4 - 5z1 - 2z2 + 2z1z2 + 3z1^2 - z1^2z2 - z1^3z2");
  auto d = decompose(p, c);
  Poly sum(2);
  for (const auto& part : d.parts) {
    CHECK(part.is_homogeneous());
    sum += part;
  }
  CHECK(sum == p.shift(c));
}

TEST_CASE("normalize_lowest") {
  auto a = normalize_lowest(twin_tangent_image(), kOrigin);
  CHECK(std::abs(a.mu - std::complex<double>(1, 0)) < 1e-15);
  CHECK(a.split.A.homogeneous_part(2) == P("-4(z2^2 + 4z1z2 + z1^2)"));

  auto b = normalize_lowest(P("i z1 + i z2"), kOrigin);
  CHECK(std::abs(b.mu - std::complex<double>(0, -1)) < 1e-15);
  REQUIRE(b.mu_exact.has_value());
  CHECK(*b.mu_exact == GaussRat(0, -1));
  CHECK(has_real_coeffs(b.shifted.homogeneous_part(1)));

  auto c = normalize_lowest(P("z1 + z2 - 2i z1 z2"), kOrigin);
  CHECK(std::abs(c.mu - std::complex<double>(1, 0)) < 1e-15);
  CHECK(c.b_order == 2);
  CHECK(c.split.B == P("-2 z1 z2"));

  CHECK_THROWS_AS(normalize_lowest(P("z1 + i z2"), kOrigin), NormalizationError);
}

TEST_CASE("tangent_slopes") {
  auto s = tangent_slopes(P("-4(z2^2 + 4z1z2 + z1^2)"));
  CHECK(s.c == GaussRat(-4));
  auto f = finite_slopes(s);
  REQUIRE(f.size() == 2);
  CHECK(std::abs(f[0] - (2 - std::sqrt(3.0))) < 1e-9);
  CHECK(std::abs(f[1] - (2 + std::sqrt(3.0))) < 1e-9);
  CHECK(s.residual < 1e-10);

  auto t = tangent_slopes(P("4 z1 z2 (z1 + z2)"));
  CHECK(t.c == GaussRat(4));
  CHECK(t.infinite_multiplicity == 1);
  REQUIRE(t.slopes.size() == 3);
  CHECK(t.slopes[0].exact == Rational(0));
  CHECK(t.slopes[1].exact == Rational(1));
  CHECK(t.slopes[2].infinite);

  auto u = tangent_slopes(P("z2^3"));
  REQUIRE(u.slopes.size() == 3);
  for (const auto& sl : u.slopes) CHECK(sl.exact == Rational(0));

  CHECK_THROWS(tangent_slopes(P("z1 + z2^2")));
  CHECK_THROWS(tangent_slopes(P("z1 + z3")));
}

TEST_CASE("interlacing_check") {
  auto a = interlacing_check(P("-4(z2^2 + 4z1z2 + z1^2)"), P("4 z1 z2 (z1 + z2)"));
  CHECK(a.holds);
  CHECK(a.r == 0);
  CHECK(a.s == 1);

  auto b = interlacing_check(P("z1 + z2"), P("-z1(z1 + z2)"));
  CHECK(b.holds);
  CHECK(b.common.size() == 1);

  auto c = interlacing_check(P("z1 + z2"), P("z1^2 + z2^2"));
  CHECK_FALSE(c.holds);

  CHECK_THROWS(interlacing_check(P("z1 + z2"), P("z1^3")));
}

TEST_CASE("pure stable corpus satisfies the lowest-term properties") {
  for (const auto& [label, p] : fixtures::halfplane_corpus()) {
    CAPTURE(label);
    auto n = normalize_lowest(p, kOrigin);
    int M = n.decomposition.order;
    CHECK(M >= 1);
    CHECK(n.b_order == M + 1);
    Poly A_M = n.split.A.homogeneous_part(M);
    Poly B_next = n.split.B.homogeneous_part(M + 1);
    CHECK(interlacing_check(A_M, B_next).holds);
    auto s = tangent_slopes(A_M);
    CHECK(s.infinite_multiplicity == 0);
    for (const auto& sl : s.slopes) CHECK(std::abs(sl.value) > 1e-9);
  }
}
