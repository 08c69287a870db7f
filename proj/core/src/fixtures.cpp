#include "stablekit/fixtures.hpp"

#include <stdexcept>

#include "stablekit/integrability.hpp"
#include "stablekit/parse.hpp"

namespace stablekit::fixtures {

const std::vector<Fixture>& corpus() {
  static const std::vector<Fixture> all = {
      {"two_minus", Domain::Disk, "2 - z1 - z2", "", {1, 1}, GaussRat(1),
       "simplest singular atoral polynomial"},
      {"twin_tangent", Domain::Disk, "4 - 3z1 - 3z2 + z1^2 z2 + z1 z2^2", "", {2, 2}, GaussRat(1),
       "two smooth branches with slopes 2 +- sqrt(3)"},
      {"sextic_contact", Domain::Disk, "4 - 5z1 - 2z2 + 2z1z2 + 3z1^2 - z1^2z2 - z1^3z2", "", {3, 1},
       GaussRat(1) / GaussRat(0, -4), "one branch with segment of cutoff 6"},
      {"quartic_contact", Domain::Disk, "4 - 3z1 - z2 - z1z2 + z1^2", "", {2, 1}, GaussRat(1),
       "contact order 4"},
      {"two_zeros", Domain::Disk, "4 - z2 + z1z2 - 3z1^2z2 - z1^3z2", "", {3, 1}, GaussRat(1),
       "zeros at (1,1) and (-1,1)"},
      {"rsf_fav", Domain::Disk, "2 - z1 - z2", "(z1 - 1)(z2 - 1)", {1, 1}, GaussRat(1),
       "bounded rational function with a slope -1 horn"},
      {"uhp_simple", Domain::HalfPlane, "z1 + z2 - 2i z1 z2", "", {1, 1}, GaussRat(1),
       "pure stable on the upper half-plane at the origin"},
  };
  return all;
}

const Fixture& get(const std::string& name) {
  for (const Fixture& f : corpus())
    if (f.name == name) return f;
  throw std::invalid_argument("unknown fixture: " + name);
}

Poly denominator(const Fixture& f) { return parse_poly(f.den); }

Poly numerator(const Fixture& f) { return f.num.empty() ? Poly(2) : parse_poly(f.num); }

namespace {

bool is_one(const std::vector<GaussRat>& tau) {
  return tau.size() == 2 && tau[0] == GaussRat(1) && tau[1] == GaussRat(1);
}

}  // namespace

Poly halfplane_image(const Fixture& f, const std::vector<GaussRat>& tau) {
  if (f.domain == Domain::HalfPlane) return denominator(f);
  Poly P = cayley_to_halfplane(rotate(denominator(f), tau), f.n);
  return is_one(tau) ? P * f.scale : P;
}

Poly halfplane_numerator(const Fixture& f, const std::vector<GaussRat>& tau) {
  if (f.domain == Domain::HalfPlane) return numerator(f);
  Poly Q = cayley_to_halfplane(rotate(numerator(f), tau), f.n);
  return is_one(tau) ? Q * f.scale : Q;
}

std::vector<std::pair<std::string, Poly>> halfplane_corpus() {
  std::vector<std::pair<std::string, Poly>> out;
  for (const Fixture& f : corpus()) {
    if (f.domain == Domain::HalfPlane) {
      out.emplace_back(f.name, denominator(f));
      continue;
    }
    if (!f.num.empty()) continue;
    for (const auto& tau : integrability::locate_torus_zeros(denominator(f))) {
      std::string label = f.name;
      if (!is_one(tau)) label += "@(" + tau[0].to_string() + "," + tau[1].to_string() + ")";
      out.emplace_back(label, halfplane_image(f, tau));
    }
  }
  return out;
}

}  // namespace stablekit::fixtures
