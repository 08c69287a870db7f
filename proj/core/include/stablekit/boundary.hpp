#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "stablekit/polynomial.hpp"

namespace stablekit::boundary {

using Point = std::array<double, 2>;

struct Window {
  double r = 0.1;  // |x1| < r
  double R = 1.0;  // |x2| < R
};

struct TracePoint {
  double x1 = 0;
  int branch = 0;  // ordered by increasing x2
  double x2 = 0;
};

struct Trace {
  double t = 0;
  int branches = 0;              // M, roots of A - tB through the origin
  std::vector<TracePoint> points;
  int dropped = 0;               // grid abscissae where the root count disagreed with M
};

class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Real curves A - tB = 0 near the origin, where A + iB is p normalized at
// the origin. Each abscissa x1 = +-r k / n contributes the M real roots in
// (-R, R), sorted upward.
std::vector<Trace> trace_level_sets(const Poly& p, const std::vector<double>& t_values,
                                    const Window& window, int n = 200);

struct Slice {
  double x1 = 0;
  std::vector<double> lower;  // roots of A - s1 B, sorted
  std::vector<double> upper;  // roots of A - s2 B, sorted
  bool alternates = false;    // endpoints scanned upward alternate s1, s2, ...
  bool sandwich = false;      // sign checks at interval midpoints and gaps
};

struct LevelRegion {
  double s1 = 0, s2 = 0;
  Window window;
  Poly A, B;
  int branches = 0;
  std::vector<Slice> slices;
  std::vector<double> pinch_exponent;  // per branch pair: log-log slope of the width
  std::vector<double> pinch_constant;  // per pair: max width / x1^2
  bool certified = false;              // every slice alternates and passes the sign checks

  // Membership from the root intervals at x1 (x1 > 0).
  bool contains(double x1, double x2) const;
  // Membership from the ratio s1 <= A/B <= s2.
  bool ratio_contains(double x1, double x2, double tol = 1e-12) const;
};

// The level region {s1 <= A/B <= s2} for x1 in (0, r).
LevelRegion level_region(const Poly& p, double s1, double s2, const Window& window, int n = 64);

enum class HornKind { NonTrivial, TrivialAlongX1, TrivialAlongX2 };
std::string to_string(HornKind k);

// NonTrivial: |x2 - a x1| <= B x1^2. TrivialAlongX1: |x2| <= B x1^2.
// TrivialAlongX2: |x1| <= B x2^2. All within |x| <= radius.
struct Horn {
  HornKind kind = HornKind::NonTrivial;
  double slope = 0;
  double B = 1;
  double radius = 1;

  bool contains(const Point& x) const;
};

struct SequenceVerdict {
  std::vector<bool> member;  // per point, in the union of the horns
  bool trapped = false;      // every considered point from n0 on is a member
  int first_violation = -1;  // first considered non-member
};

// values, when non-empty, tags each point with f(x^n); only points with
// |f(x^n) - zeta0| < eps are considered.
SequenceVerdict horn_classify(const std::vector<Point>& points, const std::vector<Horn>& horns,
                              int n0 = 0, const std::vector<std::complex<double>>& values = {},
                              std::complex<double> zeta0 = 0, double eps = 0);

// Smallest B with all points (|x| <= radius) inside the horn of the given kind and slope.
double fit_horn_constant(const std::vector<Point>& points, HornKind kind, double slope, double radius);

// Points (theta1, theta2) near (0,0) with q - lambda p = 0 at
// (tau1 e^{i theta1}, tau2 e^{i theta2}), for |theta1| < window.
std::vector<Point> trace_torus_level_set(const Poly& q, const Poly& p, std::complex<double> lambda,
                                         const std::vector<GaussRat>& tau, double window, int n = 400);

}  // namespace stablekit::boundary
