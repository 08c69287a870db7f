#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stablekit::realization {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

class RealizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// g(w) = c - <(w_P + S)^{-1} alpha, beta>, w_P = w1 P + w2 (I - P).
struct PipRealization {
  int n = 0;
  cd c;
  Vec alpha, beta;
  Mat S, P;
};

struct ValidationReport {
  bool valid = false;
  double min_eig_im_T = 0;
  double projection_error = 0;  // max of ||P^2 - P||, ||P - P*||
  double min_im_g = 0;          // over the sampled points
  int samples = 0;
  bool limit_finite = false;
  cd limit;                     // g*(0,0) when finite
  double beta_kernel_mass = 0;  // ||beta component in Ker(S)||
  std::vector<std::string> problems;
};

// Checks Im T >= -tol, the projection property, and Im g(w) >= -tol at
// `samples` random points of the upper half-plane squared.
ValidationReport validate_pip(const PipRealization& R, int samples = 1000, std::uint64_t seed = 1,
                              double tol = 1e-10);

cd eval_realization(const PipRealization& R, cd w1, cd w2);

struct RankDecision {
  int rank = 0;
  bool ambiguous = false;
  std::vector<int> candidates;  // both ranks when ambiguous
  std::vector<double> singular_values;
};

// Gap of at least 1e3 between consecutive singular values decides the rank.
RankDecision decide_rank(const Mat& S, double gap = 1e3);

struct LocalSplit {
  RankDecision rank;
  Mat range_basis, kernel_basis;  // orthonormal columns
  Mat S_hat;                      // compression of S to Range(S)
  Vec alpha_hat, beta_hat;        // alpha, beta in range coordinates
  Mat Y;                          // compression of P to Ker(S)
  std::vector<double> t;          // eigenvalues of Y, ascending
  std::vector<double> horn_slopes;  // -t/(1-t); +inf for t = 1
  double kernel_symmetry = 0;     // ||S* K|| for the kernel basis K
  double alpha_kernel = 0, beta_kernel = 0;
  double s_hat_min_im_eig = 0;
  double s_hat_inv_norm = 0;
  double alpha_norm = 0, beta_norm = 0;
  cd limit;                       // c - <S_hat^{-1} alpha, beta>
  bool invariants_hold = false;
};

LocalSplit local_split(const PipRealization& R, double tol = 1e-9);

// Schur-complement form through the split; throws when the kernel block of w_P is singular.
cd eval_local(const PipRealization& R, const LocalSplit& L, cd w1, cd w2);

// Lower bound on ||x_hat|| once g(x) is within |eta0 - g*|/2 of eta0.
double hat_x_lower_bound(const LocalSplit& L, cd eta0);

// Random valid realization of dimension n with a kernel of dimension k.
PipRealization random_realization(int n, int k, std::uint64_t seed);

}  // namespace stablekit::realization
