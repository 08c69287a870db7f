#pragma once

#include <optional>
#include <vector>

#include "stablekit/polynomial.hpp"

namespace stablekit {

struct DivisionResult {
  Poly quotient;
  Poly remainder;
};

// Multivariate division by a single divisor using graded-lex leading terms.
DivisionResult divide(const Poly& a, const Poly& b);
// Quotient when b divides a exactly.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

// Scales p so its graded-lex leading coefficient is 1.
Poly make_monic(const Poly& p);

// Greatest common divisor over Q(i), normalized monic. gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

// Resultant of bivariate p, q with respect to variable `var`; the result is a
// polynomial in the other variable only.
Poly resultant(const Poly& p, const Poly& q, int var);

// Univariate helpers over Q(i), coefficients listed lowest degree first.
using UPoly = std::vector<GaussRat>;
void trim(UPoly& p);
UPoly upoly_mul(const UPoly& a, const UPoly& b);
// Returns false when the division is not exact.
bool upoly_divide_exact(const UPoly& a, const UPoly& b, UPoly& q);
GaussRat upoly_eval(const UPoly& p, const GaussRat& x);

// Exact linear algebra over Q(i).
using QMatrix = std::vector<std::vector<GaussRat>>;
GaussRat determinant(QMatrix m);
// Basis of the right null space.
std::vector<std::vector<GaussRat>> nullspace(QMatrix m, int ncols);

}  // namespace stablekit
