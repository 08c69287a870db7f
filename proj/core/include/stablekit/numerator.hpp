#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "stablekit/polynomial.hpp"
#include "stablekit/puiseux.hpp"

namespace stablekit::numerator {

using cd = std::complex<double>;

enum class CaseTag { Order1, RepeatedSegments, DoublePoint, OrdinaryMultiplePoint, General };
std::string to_string(CaseTag t);

// Initial segment z2 + q(z1) below cutoff 2L, shared by `multiplicity` roots.
struct Segment {
  std::optional<Poly> q;   // exact real coefficients
  std::vector<double> qf;  // coefficients of z1^k
  int cutoff = 0;          // 2L
  int multiplicity = 1;
};

// Generators of prod_j (z2 + q_j, z1^{2L_j})^{M_j} in the local ring at 0.
struct IdealPresentation {
  std::vector<Segment> segments;  // sorted by cutoff, then by q
  CaseTag tag = CaseTag::General;
  bool exact = false;
  std::vector<Poly> generators;    // present when exact
  std::vector<CPoly> generators_f;
  // Normal-form data: reduction order of the q's (first is divided out first)
  // and the degree bound of each coefficient f_n.
  std::vector<int> division_order;
  std::vector<int> bounds;
  int K = 0;  // DoublePoint: order of q1 - q2
  int N = 0;  // DoublePoint: min(2L1, K)
};

class NumeratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

IdealPresentation segment_ideal(const puiseux::LocalFactorization& f);

// [p] = prod_j (z2 + q_j(z1) + i z1^{2L_j})^{M_j}.
Poly surrogate_poly(const IdealPresentation& ideal);
CPoly surrogate_cpoly(const IdealPresentation& ideal);
Poly surrogate_poly(const puiseux::LocalFactorization& f);

struct NormalForm {
  CaseTag tag = CaseTag::General;
  std::vector<Poly> coefficients;          // f_n(z1), exact inputs
  std::vector<std::vector<cd>> coefficients_f;  // f_n as coefficient lists
  std::vector<int> bounds;
  bool residual_zero = false;
  bool exact = false;
  int dimension = 0;  // sum of the bounds
};

// f must already be expressed in local coordinates at the center.
NormalForm reduce_mod_ideal(const Poly& f, const IdealPresentation& ideal, double tol = 1e-9);

// Membership of f in the ideal by exact linear algebra in
// C[z1, z2] / (z1^S, prod_j (z2 + q_j)^{M_j}). Works in every case.
bool ideal_contains(const Poly& f, const IdealPresentation& ideal);
// Dimension of that finite quotient modulo the ideal.
int quotient_dimension(const IdealPresentation& ideal);

enum class Verdict { Bounded, Unbounded, Unknown };
std::string to_string(Verdict v);

struct CurveSample {
  std::string curve;          // z2 = t z1^{2L} - q_j(z1)
  int segment = 0;
  double t = 0;
  std::vector<double> x;      // |z1| sample points
  std::vector<double> ratio;  // |f / p| along the curve
  double slope = 0;           // log-log slope of ratio against x
};

struct BoundednessReport {
  Verdict verdict = Verdict::Unknown;
  bool conjectural = false;  // General case without membership
  std::string reason;
  IdealPresentation ideal;
  NormalForm normal_form;
  std::vector<CurveSample> curves;
  int witness = -1;          // index into curves of the steepest blow-up
  double ar_sup_coarse = 0;  // sup |f/p| over the approach fan, two radii bands
  double ar_sup_fine = 0;
  bool sampling_agrees = false;
};

// Whether f/p is bounded near center in the upper half-plane, for p pure
// stable at center.
BoundednessReport is_locally_bounded(const Poly& f, const Poly& p,
                                     const std::vector<GaussRat>& center);

}  // namespace stablekit::numerator
