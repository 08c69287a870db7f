#include <random>

#include "doctest.h"
#include "stablekit/fixtures.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/numerator.hpp"
#include "stablekit/parse.hpp"
#include "stablekit/puiseux.hpp"
#include "stablekit/regularity.hpp"
#include "stablekit/stability.hpp"

using namespace stablekit;
using namespace stablekit::regularity;

namespace {

Poly P(const std::string& s) { return parse_poly(s); }
const std::vector<GaussRat> kOrigin{GaussRat(0), GaussRat(0)};
const std::vector<GaussRat> kOne{GaussRat(1), GaussRat(1)};

Poly sextic_image() {
  return fixtures::halfplane_image(fixtures::get("sextic_contact"), kOne);
}

// Direct finite-difference limit of (f(tau - r delta) - f*) / r.
std::complex<double> numeric_disk_derivative(const Poly& q, const Poly& p, std::complex<double> limit,
                                             std::vector<std::complex<double>> delta) {
  CPoly qc = to_complex(q), pc = to_complex(p);
  auto at = [&](double r) {
    std::vector<std::complex<double>> z{1.0 - r * delta[0], 1.0 - r * delta[1]};
    return (qc.eval(z) / pc.eval(z) - limit) / r;
  };
  double r = 1e-3;
  return 2.0 * at(r) - at(2 * r);  // Richardson step
}

}  // namespace

TEST_CASE("limit of a bounded rational function") {
  auto r = analyze_regularity(P("(z1 - 1)(z2 - 1)"), P("2 - z1 - z2"), kOne, 4);
  CHECK(r.M == 1);
  CHECK(r.N == 2);
  CHECK(r.nt_bounded);
  REQUIRE(r.limit.has_value());
  CHECK(*r.limit == GaussRat(0));
}

TEST_CASE("regularity of -B/A with contact order six") {
  auto n = homog::normalize_lowest(sextic_image(), kOrigin);
  auto r = analyze_regularity(-n.split.B, n.split.A, kOrigin, 5);
  REQUIRE(r.limit.has_value());
  CHECK(*r.limit == GaussRat(0));
  CHECK(r.ck_order == 4);
  CHECK_FALSE(r.ck_at_least);
  REQUIRE(r.parts.size() == 5);
  CHECK(r.parts[0].value == P("z1"));
  CHECK(r.parts[1].value == Poly(2));
  CHECK(r.parts[2].value == P("2 z1^3"));
  CHECK(r.parts[3].value == Poly(2));
  CHECK_FALSE(r.parts[4].polynomial);
  CHECK(r.parts[4].num * P("z1 + z2") == P("4 z1^5 (z1 + 3 z2)") * r.parts[4].den);
  REQUIRE(r.jet.has_value());
  CHECK(*r.jet == P("z1 + 2 z1^3"));
  for (int j = 0; j < 4; ++j) CHECK(has_real_coeffs(*r.parts[j].value));

  auto fan = jet_fan_check(-n.split.B, n.split.A, r);
  CHECK(fan.bounded);
}

TEST_CASE("constant quotient") {
  Poly p = P("2 - z1 - z2");
  auto r = analyze_regularity(p, p, kOne, 6);
  REQUIRE(r.limit.has_value());
  CHECK(*r.limit == GaussRat(1));
  CHECK(r.ck_order == 6);
  CHECK(r.ck_at_least);
  REQUIRE(r.jet.has_value());
  CHECK(*r.jet == P("1"));
  CHECK(directional_derivative(r, std::vector<GaussRat>{GaussRat(0, 1), GaussRat(1, 1)}) ==
        GaussRat(0));
}

TEST_CASE("unbounded quotient has no limit") {
  auto r = analyze_regularity(P("z1 - 1"), P("(2 - z1 - z2)^2"), kOne, 3);
  CHECK_FALSE(r.nt_bounded);
  CHECK_FALSE(r.limit.has_value());
  CHECK(r.ck_order == -1);
}

TEST_CASE("disk directional derivatives") {
  Poly p = P("2 - z1 - z2");
  Poly phi_num = P("2 z1 z2 - z1 - z2");

  SUBCASE("function with a gradient") {
    Poly q = P("1 - z1") * phi_num + p;
    auto r = analyze_regularity(q, p, kOne, 3);
    REQUIRE(r.limit.has_value());
    CHECK(*r.limit == GaussRat(1));
    CHECK(r.gradient_exists);
    for (auto delta : {std::vector<long>{1, 1}, std::vector<long>{1, 3}, std::vector<long>{2, 1}}) {
      GaussRat d = disk_directional_derivative(r, {GaussRat(delta[0]), GaussRat(delta[1])});
      auto oracle = numeric_disk_derivative(q, p, 1.0, {double(delta[0]), double(delta[1])});
      CHECK(std::abs(d.to_complex() - oracle) < 1e-5);
      CHECK(d == GaussRat(-delta[0]));
    }
  }

  SUBCASE("inner function without a gradient") {
    auto r = analyze_regularity(phi_num, p, kOne, 3);
    REQUIRE(r.limit.has_value());
    CHECK(*r.limit == GaussRat(-1));
    CHECK_FALSE(r.gradient_exists);
    GaussRat d = disk_directional_derivative(r, {GaussRat(1), GaussRat(1)});
    auto oracle = numeric_disk_derivative(phi_num, p, -1.0, {1.0, 1.0});
    CHECK(std::abs(d.to_complex() - oracle) < 1e-5);
    GaussRat e = disk_directional_derivative(r, {GaussRat(1), GaussRat(2)});
    CHECK(std::abs(e.to_complex() - numeric_disk_derivative(phi_num, p, -1.0, {1.0, 2.0})) < 1e-5);
  }

  SUBCASE("requires a limit") {
    auto r = analyze_regularity(P("z1 - 1"), P("(2 - z1 - z2)^2"), kOne, 3);
    CHECK_THROWS_AS(disk_directional_derivative(r, {GaussRat(1), GaussRat(1)}), RegularityError);
  }
}

TEST_CASE("half-plane directional derivative matches the difference quotient") {
  Poly p = P("z1 + z2 - 2i z1 z2");
  Poly q = P("z1 + z2 + 2i z1 z2");
  auto r = analyze_regularity(q, p, kOrigin, 3);
  REQUIRE(r.limit.has_value());
  std::vector<std::complex<double>> v{{0.3, 1.0}, {-0.5, 2.0}};
  auto d = directional_derivative(r, v);
  CPoly qc = to_complex(q), pc = to_complex(p);
  auto f = [&](double t) {
    std::vector<std::complex<double>> z{t * v[0], t * v[1]};
    return qc.eval(z) / pc.eval(z);
  };
  std::complex<double> L = r.limit->to_complex();
  double h = 1e-5;
  auto oracle = 2.0 * (f(h) - L) / h - (f(2 * h) - L) / (2 * h);
  CHECK(std::abs(d - oracle) < 1e-5);
}

TEST_CASE("universal contact order cross-check") {
  auto a = uco_regularity_crosscheck(sextic_image(), kOrigin);
  CHECK(a.K_min == 6);
  CHECK(a.ck_order == 4);
  CHECK(a.holds);
  CHECK(a.tight);

  auto b = uco_regularity_crosscheck(P("z1 + z2 - 2i z1 z2"), kOrigin);
  CHECK(b.K_min == 2);
  CHECK(b.vacuous);
  CHECK(b.holds);

  auto c = uco_regularity_crosscheck(
      GaussRat(-4) * P("z2^2 + 4z1z2 + z1^2 - 2z1^2z2^2 - 4i z1z2(z1 + z2)"), kOrigin);
  CHECK(c.K_min == 2);
  CHECK(c.vacuous);
  CHECK(c.ck_order >= 0);
}

TEST_CASE("admissible numerators have limits") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coef(-3, 3);
  int pairs = 0;
  for (const auto& [label, p] : fixtures::halfplane_corpus()) {
    auto ideal = numerator::segment_ideal(puiseux::puiseux_factorize(p, kOrigin));
    if (!ideal.exact) continue;
    for (int trial = 0; trial < 5; ++trial) {
      Poly q(2);
      for (const auto& g : ideal.generators) {
        Poly mult = P(std::to_string(coef(rng)) + " + " + std::to_string(coef(rng)) + " z1 + " +
                      std::to_string(coef(rng)) + " i z2");
        q += mult * g;
      }
      if (q.is_zero()) continue;
      CAPTURE(label);
      auto r = analyze_regularity(q, p, kOrigin, 2);
      CHECK(r.nt_bounded);
      CHECK(r.limit.has_value());
      ++pairs;
    }
  }
  CHECK(pairs >= 20);
}

TEST_CASE("bounded quotients lift to stable polynomials in one more variable") {
  const auto& fx = fixtures::get("rsf_fav");
  Poly p = fixtures::halfplane_image(fx, kOne);
  Poly q = fixtures::halfplane_numerator(fx, kOne);
  Poly w = Poly::variable(3, 2);
  Poly i3 = Poly::constant(3, GaussRat::i());
  Poly lifted = GaussRat(2) * (w + i3) * p.with_nvars(3) - (w - i3) * q.with_nvars(3);
  stability::Options opts;
  opts.resolution = 6;
  CHECK(stability::check_stable(lifted, Domain::HalfPlane, opts).verdict !=
        stability::Verdict::ZeroFound);
}
