#include <random>

#include "doctest.h"
#include "stablekit/realization.hpp"

using namespace stablekit::realization;

namespace {

const cd I(0, 1);

PipRealization scalar_example() {
  PipRealization R;
  R.n = 1;
  R.c = I;
  R.alpha = Vec::Ones(1);
  R.beta = Vec::Ones(1);
  R.S = Mat::Constant(1, 1, I);
  R.P = Mat::Identity(1, 1);
  return R;
}

// Kernel e1, range e2, P the projection onto span(cos a e1 + sin a e2).
PipRealization kernel_example(double angle) {
  PipRealization R;
  R.n = 2;
  R.c = I;
  R.S = Mat::Zero(2, 2);
  R.S(1, 1) = I;
  R.alpha = Vec::Zero(2);
  R.alpha(1) = 1;
  R.beta = R.alpha;
  Vec u(2);
  u << std::cos(angle), std::sin(angle);
  R.P = u * u.adjoint();
  return R;
}

std::vector<std::pair<cd, cd>> random_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-3, 3), im(0.01, 3);
  std::vector<std::pair<cd, cd>> out;
  for (int k = 0; k < count; ++k) out.push_back({{re(rng), im(rng)}, {re(rng), im(rng)}});
  return out;
}

}  // namespace

TEST_CASE("scalar realization") {
  PipRealization R = scalar_example();
  auto rep = validate_pip(R);
  CHECK(rep.valid);
  CHECK(rep.limit_finite);
  CHECK(std::abs(rep.limit - 2.0 * I) < 1e-12);
  CHECK(std::abs(eval_realization(R, I, I) - 1.5 * I) < 1e-12);
  for (auto [w1, w2] : random_points(20, 3))
    CHECK(std::abs(eval_realization(R, w1, w2) - (I - 1.0 / (w1 + I))) < 1e-12);
  for (double t : {1e-2, 1e-4, 1e-6})
    CHECK(std::abs(eval_realization(R, t * I, t * I) - rep.limit) < 10 * t);
}

TEST_CASE("constant realization") {
  PipRealization R = scalar_example();
  R.alpha.setZero();
  R.beta.setZero();
  R.c = cd(0.3, 0.5);
  CHECK(validate_pip(R).valid);
  R.c = cd(0.3, -0.5);
  CHECK_FALSE(validate_pip(R).valid);
}

TEST_CASE("beta mass on the kernel makes the limit diverge") {
  PipRealization R;
  R.n = 2;
  R.c = I;
  R.S = Mat::Zero(2, 2);
  R.S(1, 1) = I;
  R.alpha = Vec::Zero(2);
  R.alpha(0) = 1;
  R.beta = R.alpha;
  R.P = Mat::Identity(2, 2);
  auto rep = validate_pip(R);
  CHECK(rep.valid);
  CHECK_FALSE(rep.limit_finite);
  CHECK(rep.beta_kernel_mass > 0.5);
  CHECK(std::abs(eval_realization(R, 1e-6 * I, 1e-6 * I)) > 1e5);
}

TEST_CASE("invalid data is reported") {
  PipRealization R = scalar_example();
  R.S(0, 0) = -I;
  CHECK_FALSE(validate_pip(R).valid);
  PipRealization Q = scalar_example();
  Q.P(0, 0) = 0.5;
  auto rep = validate_pip(Q);
  CHECK_FALSE(rep.valid);
  CHECK(rep.projection_error > 0.1);
  PipRealization B = scalar_example();
  B.alpha = Vec::Ones(2);
  CHECK_THROWS_AS(validate_pip(B), RealizationError);
}

TEST_CASE("random realizations are Pick functions") {
  for (int seed = 1; seed <= 5; ++seed) {
    PipRealization R = random_realization(4, seed % 3, seed);
    CHECK(validate_pip(R, 200, seed).valid);
    for (auto [w1, w2] : random_points(50, seed)) CHECK(eval_realization(R, w1, w2).imag() >= -1e-10);
  }
}

TEST_CASE("local split") {
  SUBCASE("invertible S") {
    PipRealization R = scalar_example();
    auto L = local_split(R);
    CHECK(L.rank.rank == 1);
    CHECK(L.kernel_basis.cols() == 0);
    CHECK(L.t.empty());
    CHECK(L.invariants_hold);
    CHECK(std::abs(L.limit - 2.0 * I) < 1e-12);
  }

  SUBCASE("kernel mixed by P") {
    PipRealization R = kernel_example(M_PI / 4);
    CHECK(validate_pip(R).valid);
    auto L = local_split(R);
    CHECK(L.invariants_hold);
    REQUIRE(L.t.size() == 1);
    CHECK(std::abs(L.t[0] - 0.5) < 1e-12);
    CHECK(std::abs(L.horn_slopes[0] + 1) < 1e-12);
    for (auto [w1, w2] : random_points(50, 5)) {
      cd g = eval_realization(R, w1, w2), h = eval_local(R, L, w1, w2);
      CHECK(std::abs(g - h) <= 1e-9 * std::abs(g));
    }
    CHECK(hat_x_lower_bound(L, 0.0) > 0);
  }

  SUBCASE("kernel outside the range of P") {
    auto L = local_split(kernel_example(M_PI / 2));
    REQUIRE(L.t.size() == 1);
    CHECK(L.t[0] < 1e-12);
    CHECK(std::abs(L.horn_slopes[0]) < 1e-12);
  }

  SUBCASE("kernel inside the range of P") {
    auto L = local_split(kernel_example(0));
    REQUIRE(L.horn_slopes.size() == 1);
    CHECK(std::isinf(L.horn_slopes[0]));
  }
}

TEST_CASE("rank decisions") {
  Mat S = Mat::Zero(3, 3);
  S(0, 0) = 1;
  S(1, 1) = 1e-3;
  auto d = decide_rank(S);
  CHECK(d.rank == 2);
  CHECK_FALSE(d.ambiguous);

  S(2, 2) = 5e-9;
  S(1, 1) = 1e-6;
  auto e = decide_rank(S);
  CHECK(e.ambiguous);
  CHECK(e.candidates.size() == 2);
  CHECK_FALSE(local_split(PipRealization{3, I, Vec::Zero(3), Vec::Zero(3), S * I, Mat::Zero(3, 3)})
                  .invariants_hold);
}
