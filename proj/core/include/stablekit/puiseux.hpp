#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "stablekit/polynomial.hpp"
#include "stablekit/series.hpp"

namespace stablekit::puiseux {

using cd = std::complex<double>;

enum class BranchType { Pure, Real, Unclassified };
std::string to_string(BranchType t);

// One conjugacy class of roots z2 = -phi(z1^{1/m}) near the center, in
// shifted coordinates. For a pure branch phi(t) = q(t^m) + t^{2mL} psi(t)
// with q real, deg q < 2L and Im psi(0) > 0.
struct Branch {
  int ramification = 1;                         // m
  std::vector<cd> series;                       // phi_k, coefficient of t^k
  int order = 0;                                // phi known modulo t^order
  std::optional<std::vector<GaussRat>> series_exact;
  BranchType type = BranchType::Unclassified;
  std::string note;                             // why a branch is unclassified
  int cutoff = 0;                               // 2L for pure branches
  std::vector<double> segment;                  // q_k, coefficient of z1^k
  std::optional<std::vector<Rational>> segment_exact;
  std::vector<cd> psi;                          // psi coefficients in t

  cd psi0() const { return psi.empty() ? cd(0) : psi[0]; }
  // Segment as a polynomial in z1 (exact when available).
  Poly segment_poly(int nvars = 2) const;
  CPoly segment_cpoly(int nvars = 2) const;
};

struct LocalFactorization {
  std::vector<GaussRat> center;
  int order = 0;           // order of vanishing M at the center
  int z1_power = 0;        // monomial factors removed before expansion
  int z2_power = 0;
  std::vector<Branch> branches;
  bool exact = false;      // series computed over Q(i)
  int truncation = 0;      // guaranteed order in z1 of every branch
  cd unit_at_center = 0;
  double reconstruction_residual = 0;

  int total_multiplicity() const;
};

struct Options {
  int truncation = 12;        // requested order in z1
  double real_tol = 1e-9;     // relative threshold for zeroing imaginary parts
  double zero_tol = 1e-10;    // relative zero test for floating coefficients
  bool allow_exact = true;
  int retries = 2;            // larger truncation / extended precision
};

class PuiseuxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Branches of p(center + z) = 0, z2 as a function of z1, grouped by conjugacy.
LocalFactorization puiseux_factorize(const Poly& p, const std::vector<GaussRat>& center,
                                     const Options& opts = {});
LocalFactorization puiseux_factorize(const Poly& p, const Options& opts = {});
// Floating input, expanded at the origin.
LocalFactorization puiseux_factorize(const CPoly& p, const Options& opts = {});

struct ContactOrders {
  int K = 0;      // max cutoff over pure branches
  int K_min = 0;  // min cutoff over pure branches
};
ContactOrders contact_orders(const LocalFactorization& f);

// Segments -I_{2L}(q)(-z2) with z1 as the dependent variable; cutoffs and
// ramifications are kept, psi keeps only its leading coefficient when m = 1.
LocalFactorization switch_variables(const LocalFactorization& f);

// Evaluates h(z) = q(z) + z^{2L} psi(z^{1/m}) for Im z >= 0, every conjugate.
std::vector<cd> eval_branch(const Branch& b, cd z);

struct LowerBound {
  bool passed = false;
  double c_hat = 0;   // min of Im h(z) / |z|^{2L} over the samples
  cd worst;           // sample attaining c_hat
  int samples = 0;
};
LowerBound verify_branch_lower_bound(const Branch& b, double r, int samples = 10000);

// Weierstrass data: p(center + z) = z1^a * u * W with W monic in z2.
struct WeierstrassData {
  std::vector<std::vector<cd>> unit;  // unit[j][a] = coefficient of z1^a z2^j
  int order = 0;                      // unit coefficients known modulo z1^order
  double residual = 0;
};
WeierstrassData weierstrass_unit(const Poly& p, const LocalFactorization& f);

struct PerturbedMatch {
  bool ok = false;
  std::vector<double> t_used;
  std::vector<double> exceptional;   // samples where factorization or matching failed
  std::vector<bool> varies;          // per branch of p: order-2L data differs across t
  std::string reason;
};
// Branches of A + tB share the segments of p up to each cutoff.
PerturbedMatch match_perturbed_segments(const Poly& p, const std::vector<GaussRat>& center,
                                        const std::vector<Rational>& t_samples, int T = 12);

struct UnitAffine {
  bool ok = false;
  bool vacuous = false;  // K_min < 4
  int checked_degree = -1;  // homogeneous parts u_j for j <= checked_degree were tested
  double max_defect = 0;    // largest second divided difference
  std::string reason;
};
UnitAffine unit_affine_check(const Poly& p, const std::vector<GaussRat>& center,
                             const std::vector<Rational>& t_samples, int T = 12);

}  // namespace stablekit::puiseux
