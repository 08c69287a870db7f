#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "stablekit/polynomial.hpp"

namespace stablekit::homog {

class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// p(center + z) = sum_{j >= M} P_j(z).
struct HomogeneousDecomposition {
  std::vector<GaussRat> center;
  int order = kOrderInf;    // M
  std::vector<Poly> parts;  // parts[k] = P_{M+k}

  Poly part(int degree) const;
};

HomogeneousDecomposition decompose(const Poly& p, const std::vector<GaussRat>& center);
HomogeneousDecomposition decompose(const Poly& p);  // center at the origin

struct Normalization {
  std::complex<double> mu;          // unimodular with mu * P_M real
  std::optional<GaussRat> mu_exact; // present when mu lies in Q(i)
  GaussRat scale;                   // exact positive multiple of mu applied below
  Poly shifted;                     // scale * p(center + z)
  HomogeneousDecomposition decomposition;  // of `shifted`
  RealImagSplit split;              // A + iB = shifted
  int b_order = kOrderInf;          // lowest order of B
};

// Finds mu with mu * P_M real (mu = 1 when P_M is already real). Throws
// NormalizationError when the coefficients of P_M do not share an argument mod pi.
Normalization normalize_lowest(const Poly& p, const std::vector<GaussRat>& center);

struct Slope {
  std::complex<double> value;
  bool infinite = false;
  std::optional<Rational> exact;  // rational real slopes are certified exactly

  bool is_real(double tol = 1e-9) const {
    return infinite || std::abs(value.imag()) <= tol * (1.0 + std::abs(value));
  }
};

// H = c z1^r prod_j (z2 + a_j z1); slopes are the a_j plus r copies of infinity.
struct SlopeProfile {
  GaussRat c;
  int infinite_multiplicity = 0;  // r
  std::vector<Slope> slopes;      // finite slopes sorted by real part, then r infinite ones
  double residual = 0;            // max |H(1, -a)| / ||H|| over finite slopes
};

SlopeProfile tangent_slopes(const Poly& H);

struct InterlacingResult {
  bool holds = false;
  std::string reason;
  int r = 0;  // infinite slopes of A_M
  int s = 0;  // infinite slopes of B_{M+1}
  SlopeProfile a;
  SlopeProfile b;
  std::vector<Slope> common;  // slopes shared by A_M and B_{M+1}
};

// b_1 <= a_1 <= b_2 <= ... <= a_M <= b_{M+1}, ties allowed, s in {r, r + 1}.
// Throws on a degree mismatch or non-real coefficients.
InterlacingResult interlacing_check(const Poly& A_M, const Poly& B_next, double tol = 1e-9);

}  // namespace stablekit::homog
