#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stablekit/polynomial.hpp"
#include "stablekit/stability.hpp"

namespace stablekit::fixtures {

struct Fixture {
  std::string name;
  Domain domain = Domain::Disk;
  std::string den;
  std::string num;                 // empty when the fixture is a bare denominator
  std::vector<int> n;              // degree used for the Cayley transfer
  GaussRat scale = GaussRat(1);    // applied to the half-plane image at (1,1)
  std::string description;
};

const std::vector<Fixture>& corpus();
const Fixture& get(const std::string& name);

Poly denominator(const Fixture& f);
Poly numerator(const Fixture& f);  // zero when absent

// Rotates tau to (1,1) and maps to the upper half-plane with the fixture degree.
Poly halfplane_image(const Fixture& f, const std::vector<GaussRat>& tau);
Poly halfplane_numerator(const Fixture& f, const std::vector<GaussRat>& tau);

// Pure stable half-plane polynomials vanishing at the origin.
std::vector<std::pair<std::string, Poly>> halfplane_corpus();

}  // namespace stablekit::fixtures
