#include "stablekit/realization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace stablekit::realization {

namespace {

const cd I(0, 1);

void check_dims(const PipRealization& R) {
  int n = R.n;
  if (n < 0 || R.alpha.size() != n || R.beta.size() != n || R.S.rows() != n || R.S.cols() != n ||
      R.P.rows() != n || R.P.cols() != n)
    throw RealizationError("realization dimensions are inconsistent");
}

Mat w_P(const PipRealization& R, cd w1, cd w2) {
  Mat id = Mat::Identity(R.n, R.n);
  return w1 * R.P + w2 * (id - R.P);
}

Mat im_part(const Mat& M) { return (M - M.adjoint()) / (2.0 * I); }

double min_hermitian_eig(const Mat& H) {
  if (H.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Mat random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0, 1);
  Mat M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = cd(N(rng), N(rng));
  return M;
}

Mat random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(n, n, rng));
  return qr.householderQ() * Mat::Identity(n, n);
}

}  // namespace

cd eval_realization(const PipRealization& R, cd w1, cd w2) {
  check_dims(R);
  if (R.n == 0) return R.c;
  Mat M = w_P(R, w1, w2) + R.S;
  Eigen::FullPivLU<Mat> lu(M);
  if (!lu.isInvertible()) throw RealizationError("w_P + S is singular at this point");
  Vec x = lu.solve(R.alpha);
  return R.c - R.beta.dot(x);
}

RankDecision decide_rank(const Mat& S, double gap) {
  RankDecision d;
  int n = static_cast<int>(S.rows());
  if (n == 0) return d;
  Eigen::JacobiSVD<Mat> svd(S);
  auto sv = svd.singularValues();
  for (int k = 0; k < n; ++k) d.singular_values.push_back(sv(k));
  double s0 = sv(0);
  if (s0 == 0) {
    d.rank = 0;
    return d;
  }
  int r = 0;
  while (r < n && sv(r) > 1e-8 * s0) ++r;
  d.rank = r;
  double below = r < n ? sv(r) : 1e-8 * s0;
  if (r > 0 && sv(r - 1) < gap * below) {
    d.ambiguous = true;
    d.candidates = {r - 1, r};
  }
  return d;
}

LocalSplit local_split(const PipRealization& R, double tol) {
  check_dims(R);
  LocalSplit L;
  int n = R.n;
  L.rank = decide_rank(R.S);
  int r = L.rank.rank;
  if (n > 0) {
    Eigen::JacobiSVD<Mat> svd(R.S, Eigen::ComputeFullU | Eigen::ComputeFullV);
    L.range_basis = svd.matrixU().leftCols(r);
    L.kernel_basis = svd.matrixV().rightCols(n - r);
  } else {
    L.range_basis = Mat(0, 0);
    L.kernel_basis = Mat(0, 0);
  }
  const Mat& U = L.range_basis;
  const Mat& K = L.kernel_basis;
  L.S_hat = U.adjoint() * R.S * U;
  L.alpha_hat = U.adjoint() * R.alpha;
  L.beta_hat = U.adjoint() * R.beta;
  L.Y = K.adjoint() * R.P * K;
  L.Y = (L.Y + L.Y.adjoint()) / 2.0;
  if (K.cols() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(L.Y, Eigen::EigenvaluesOnly);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      double t = std::clamp(es.eigenvalues()(k), 0.0, 1.0);
      L.t.push_back(t);
      double slope = std::abs(1 - t) < 1e-9 ? std::numeric_limits<double>::infinity() : -t / (1 - t);
      L.horn_slopes.push_back(slope + 0.0);
    }
  }
  L.kernel_symmetry = K.cols() > 0 ? (R.S.adjoint() * K).norm() : 0.0;
  L.alpha_kernel = K.cols() > 0 ? (K.adjoint() * R.alpha).norm() : 0.0;
  L.beta_kernel = K.cols() > 0 ? (K.adjoint() * R.beta).norm() : 0.0;
  L.s_hat_min_im_eig = min_hermitian_eig(im_part(L.S_hat));
  L.alpha_norm = L.alpha_hat.norm();
  L.beta_norm = L.beta_hat.norm();

  bool invertible = true;
  if (r > 0) {
    Eigen::JacobiSVD<Mat> shat(L.S_hat);
    double smin = shat.singularValues()(r - 1);
    invertible = smin > 0;
    L.s_hat_inv_norm = invertible ? 1 / smin : std::numeric_limits<double>::infinity();
    if (invertible) L.limit = R.c - L.beta_hat.dot(L.S_hat.fullPivLu().solve(L.alpha_hat));
  } else {
    L.limit = R.c;
  }
  double scale = std::max(1.0, R.S.norm());
  L.invariants_hold = !L.rank.ambiguous && invertible && L.kernel_symmetry <= tol * scale &&
                      L.alpha_kernel <= tol * std::max(1.0, R.alpha.norm()) &&
                      L.beta_kernel <= tol * std::max(1.0, R.beta.norm()) &&
                      L.s_hat_min_im_eig >= -tol * scale;
  return L;
}

cd eval_local(const PipRealization& R, const LocalSplit& L, cd w1, cd w2) {
  int k = static_cast<int>(L.kernel_basis.cols());
  int r = static_cast<int>(L.range_basis.cols());
  if (r == 0) return R.c;
  Mat W = w_P(R, w1, w2);
  Mat W22 = L.range_basis.adjoint() * W * L.range_basis;
  Mat X = L.S_hat + W22;
  if (k > 0) {
    Mat W11 = L.kernel_basis.adjoint() * W * L.kernel_basis;
    Mat W12 = L.kernel_basis.adjoint() * W * L.range_basis;
    Mat W21 = L.range_basis.adjoint() * W * L.kernel_basis;
    Eigen::FullPivLU<Mat> lu11(W11);
    if (!lu11.isInvertible()) throw RealizationError("kernel block of w_P is singular");
    X -= W21 * lu11.solve(W12);
  }
  Eigen::FullPivLU<Mat> lu(X);
  if (!lu.isInvertible()) throw RealizationError("local Schur complement is singular");
  return R.c - L.beta_hat.dot(lu.solve(L.alpha_hat));
}

double hat_x_lower_bound(const LocalSplit& L, cd eta0) {
  double den = 4 * L.alpha_norm * L.beta_norm * L.s_hat_inv_norm * L.s_hat_inv_norm;
  if (den == 0) return std::numeric_limits<double>::infinity();
  return std::abs(eta0 - L.limit) / den;
}

ValidationReport validate_pip(const PipRealization& R, int samples, std::uint64_t seed, double tol) {
  check_dims(R);
  ValidationReport rep;
  int n = R.n;
  Mat T(n + 1, n + 1);
  T(0, 0) = R.c;
  if (n > 0) {
    T.block(0, 1, 1, n) = R.beta.adjoint();
    T.block(1, 0, n, 1) = R.alpha;
    T.block(1, 1, n, n) = R.S;
  }
  rep.min_eig_im_T = min_hermitian_eig(im_part(T));
  if (rep.min_eig_im_T < -tol) rep.problems.push_back("Im T is indefinite");
  if (n > 0)
    rep.projection_error = std::max((R.P * R.P - R.P).norm(), (R.P - R.P.adjoint()).norm());
  if (rep.projection_error > 1e-9) rep.problems.push_back("P is not an orthogonal projection");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-5, 5), lg(-3, 1);
  rep.min_im_g = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    cd w1(re(rng), std::pow(10.0, lg(rng)));
    cd w2(re(rng), std::pow(10.0, lg(rng)));
    rep.min_im_g = std::min(rep.min_im_g, eval_realization(R, w1, w2).imag());
  }
  rep.samples = samples;
  if (samples > 0 && rep.min_im_g < -tol) rep.problems.push_back("Im g is negative at a sample");

  LocalSplit L = local_split(R);
  rep.beta_kernel_mass = L.beta_kernel;
  rep.limit_finite = !L.rank.ambiguous && L.beta_kernel <= 1e-9 * std::max(1.0, R.beta.norm());
  if (rep.limit_finite)
    rep.limit = L.limit;
  else
    rep.problems.push_back("beta has a component in Ker(S); g(it,it) diverges");
  rep.valid = rep.min_eig_im_T >= -tol && rep.projection_error <= 1e-9 &&
              (samples == 0 || rep.min_im_g >= -tol);
  return rep;
}

PipRealization random_realization(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 0 || k >= n) throw RealizationError("need 0 <= k < n");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0, 1);
  int r = n - k;
  Mat U = random_unitary(n, rng);
  Mat Ur = U.rightCols(r);
  Mat A = random_matrix(r, r, rng), Bm = random_matrix(r, r, rng);
  Mat H = (A + A.adjoint()) / 2.0;
  Mat G = Bm * Bm.adjoint() / static_cast<double>(r) + 0.1 * Mat::Identity(r, r);
  PipRealization R;
  R.n = n;
  R.S = Ur * (H + I * G) * Ur.adjoint();
  Mat Gf = Ur * G * Ur.adjoint();
  Vec v = Ur * random_matrix(r, 1, rng);
  R.beta = Ur * random_matrix(r, 1, rng);
  R.alpha = R.beta + 2.0 * I * (Gf * v);
  double vgv = v.dot(Gf * v).real();
  R.c = cd(unif(rng) * 2 - 1, vgv + unif(rng));
  int m = static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1));
  Mat Q = random_unitary(n, rng).leftCols(m);
  R.P = Q * Q.adjoint();
  return R;
}

}  // namespace stablekit::realization
