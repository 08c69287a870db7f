#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "stablekit/polynomial.hpp"

namespace stablekit::regularity {

using cd = std::complex<double>;

// F_j = num / den, homogeneous of degree j, reduced by the gcd.
struct RationalPart {
  int degree = 0;
  Poly num;
  Poly den;
  bool polynomial = false;
  std::optional<Poly> value;  // num / den when den is constant
};

struct Report {
  std::vector<GaussRat> center;
  int M = 0;                     // order of vanishing of p
  int N = 0;                     // order of vanishing of q (kOrderInf for q = 0)
  bool nt_bounded = false;
  std::optional<GaussRat> limit;  // b with Q_M = b P_M
  Poly P_M, P_next, Q_next;      // P_M, P_{M+1}, Q_{M+1}
  Poly directional_num;          // Q_{M+1} - b P_{M+1}
  bool gradient_exists = false;  // F_1 is a polynomial
  int ck_order = -1;             // largest k with F_1..F_k polynomial; -1 without a limit
  bool ck_at_least = false;      // every F_j up to k_max was a polynomial
  int k_max = 0;
  std::vector<RationalPart> parts;  // F_1, F_2, ... up to the first failure or k_max
  std::optional<Poly> jet;          // b + F_1 + ... + F_{ck_order}
};

// Homogeneous expansion of q(center + z) / p(center + z) in the radial
// variable. Polynomiality of F_j is decided by exact division.
Report analyze_regularity(const Poly& q, const Poly& p, const std::vector<GaussRat>& center,
                          int k_max);

class RegularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (Q_{M+1}(v) - b P_{M+1}(v)) / P_M(v) for v in the upper half-plane.
GaussRat directional_derivative(const Report& r, const std::vector<GaussRat>& v);
cd directional_derivative(const Report& r, const std::vector<cd>& v);
// Limit of (f(tau - r delta) - f*(tau)) / r at a torus point, delta pointing
// out of the polydisk. The report must be taken at tau.
GaussRat disk_directional_derivative(const Report& r, const std::vector<GaussRat>& delta);

struct UcoCrosscheck {
  int K_min = 0;
  int K = 0;
  int ck_order = -1;
  bool ck_at_least = false;
  bool holds = false;   // ck_order >= K_min - 2
  bool tight = false;   // ck_order == K_min - 2
  bool vacuous = false; // K_min - 2 <= 0
  std::string label;    // "B^{K_min/2} point"
  Report report;        // of f = -B/A
};

// Regularity of -B/A for the normalized p = A + iB against the universal
// contact order at the center.
UcoCrosscheck uco_regularity_crosscheck(const Poly& p, const std::vector<GaussRat>& center);

struct FanCheck {
  std::vector<double> radii;
  std::vector<double> max_ratio;  // max |f - F| / r^{k+1} per radius
  bool bounded = false;           // ratios stay within a factor 8 of the first one
};

// Samples f - F along non-tangential rays z = center + r v, v in the upper
// half-plane with apertures 2 and 10, r = 2^{-m} for m in [m_lo, m_hi].
FanCheck jet_fan_check(const Poly& q, const Poly& p, const Report& r, int m_lo = 4,
                       int m_hi = 14);

}  // namespace stablekit::regularity
