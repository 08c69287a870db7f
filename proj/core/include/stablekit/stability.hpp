#pragma once

#include <complex>
#include <string>
#include <vector>

#include "stablekit/polynomial.hpp"

namespace stablekit {

enum class Domain { Disk, HalfPlane };

std::string to_string(Domain d);
Domain parse_domain(const std::string& s);

namespace stability {

enum class Verdict { NoZerosFound, ZeroFound, Inconclusive };
std::string to_string(Verdict v);

struct Options {
  int resolution = 12;       // radial levels per outer variable; 4x as many angles
  double contact_tol = 1e-7; // | |z| - 1 | below this counts as a boundary contact
  int retries = 2;           // grid perturbations after an inconclusive pass
};

struct Result {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::complex<double>> witness;  // a zero inside the open domain
  int slices = 0;
  // Outer points on the boundary whose slice has a root on the boundary circle.
  std::vector<std::vector<std::complex<double>>> boundary_contacts;
  std::string reason;
};

// Slices over a polar grid of the closed polydisk in all but the last variable
// and counts roots of the last variable in the open disk, by the argument
// principle cross-checked against companion roots. Half-plane inputs are
// first mapped to the polydisk. Supports 1 to 3 variables.
Result check_stable(const Poly& p, Domain domain, const Options& opts = {});

struct DichotomySplit {
  Poly symmetric_part;  // monic; reflection(g) = unimodular_const * g
  Poly pure_part;       // p / g
  GaussRat unimodular_const;
  bool pure = false;    // symmetric part is constant
};

// gcd of p with its reflection (bar for the half-plane, tilde for the disk).
DichotomySplit dichotomy_split(const Poly& p, Domain domain);

}  // namespace stability
}  // namespace stablekit
