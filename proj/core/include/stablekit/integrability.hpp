#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "stablekit/polynomial.hpp"

namespace stablekit::integrability {

class IntegrabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Positive rational or infinity.
struct Index {
  Rational value;
  bool infinite = false;

  static Index inf() { return {Rational(0), true}; }
  double to_double() const;
  std::string to_string() const;
  friend bool operator<(const Index& a, const Index& b);
  friend bool operator==(const Index& a, const Index& b);
};

struct TorusZero {
  std::vector<GaussRat> tau;
  int order = 0;      // order of vanishing of p at tau
  int K = 0;          // contact order
  int K_min = 0;
  int N = 0;          // intersection multiplicity of p and its reflection
  bool upper_bound_only = false;  // order >= 2: indices form a candidate superset
  std::vector<Index> indices;     // finite ones contributed by this zero
  Poly r;                         // element of (p, p~) at tau, non-zero at the other zeros
  int r_power = 0;
  int r_variable = 0;             // r = (z_{v} - tau_v)^{r_power}
};

struct Profile {
  std::vector<TorusZero> zeros;
  std::vector<Index> indices;   // sorted, ends with infinity
  std::vector<Poly> witnesses;  // witnesses[k] attains indices[k]
  std::vector<int> witness_zero;  // zero that produced the index, -1 for infinity
  std::vector<std::string> notes;
  int total_N = 0;
};

// Points of T^2 where p and its reflection vanish, with Gaussian-rational
// coordinates. Zeros at other points are reported through `unresolved`.
std::vector<std::vector<GaussRat>> locate_torus_zeros(const Poly& p, int* unresolved = nullptr);

// Sum over Puiseux branches of the vanishing order of the reflection along
// the branch, after rotating tau to (1,1) and mapping to the half-plane.
// With swap = true the roles of z1 and z2 are exchanged first.
int intersection_multiplicity(const Poly& p, const std::vector<GaussRat>& tau, bool swap = false);

Profile derivative_integrability_indices(const Poly& p);

// Smallest power a such that (z_var - tau_var)^a lies in (p, p~) at tau,
// decided through the segment ideal of the half-plane image.
int local_power_in_ideal(const Poly& p, const std::vector<GaussRat>& tau, int var, int cap = 64);

// Whether f lies in (p, p~) at tau (order-one zeros only).
bool residual_zero_at(const Poly& f, const Poly& p, const std::vector<GaussRat>& tau);

enum class Verdict { Finite, Divergent, Borderline };
std::string to_string(Verdict v);

struct QuadratureParams {
  double window = 0.1;    // outer shells cover |theta2 - arg tau2| <= window
  int shells = 20;
  int outer_nodes = 8;    // Gauss-Legendre nodes per shell
  int inner_nodes = 12;   // per inner subinterval
  int fit_shells = 5;     // deepest valid shells used for the decay fit
  double rate_threshold = 0.05;
  double precision_floor = 1e-13;  // minimal |p| scale relative to the coefficients
};

struct Estimate {
  double exponent = 0;
  Verdict verdict = Verdict::Borderline;
  double rate = 0;                 // fitted log2 decay of the shell sums
  std::vector<double> shell_sums;  // summed over zeros, shell k covers [2^-k-1, 2^-k] window
  int shells_used = 0;
  std::string diagnostics;
};

// Estimates the integral of |d/dz1 (q/p)|^exponent over T^2 near the zeros of
// p by iterated quadrature and classifies it by the decay of dyadic shells.
std::vector<Estimate> integrability_cutoff_estimate(const Poly& q, const Poly& p,
                                                    const std::vector<double>& exponents,
                                                    const QuadratureParams& params = {});

}  // namespace stablekit::integrability
