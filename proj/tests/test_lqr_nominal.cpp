/*
 Copyright 2026 The xlqr authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

 https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <doctest.h>

#include <cmath>
#include <optional>

#include "xlqr/bench.hpp"
#include "xlqr/lqr_nominal.hpp"

using xlqr::CostModel;
using xlqr::GaussianSampler;
using xlqr::LinearSystem;
using xlqr::Matrix;
using xlqr::RiccatiSolution;
using xlqr::Vector;

namespace {

LinearSystem scalar_system(double a, double b) {
  return {Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b)};
}

CostModel unit_cost(int dx, int du) {
  return {Matrix::Identity(dx, dx), Matrix::Identity(du, du)};
}

// Positive root of the scalar Riccati quadratic
// b^2 P^2 + (r - q b^2 - a^2 r) P - q r = 0, derived by clearing the
// denominator of P = q + a^2 P - a^2 b^2 P^2 / (r + b^2 P).
double scalar_dare_oracle(double a, double b, double q, double r) {
  const double A2 = b * b;
  const double A1 = r - q * b * b - a * a * r;
  const double A0 = -q * r;
  return (-A1 + std::sqrt(A1 * A1 - 4.0 * A2 * A0)) / (2.0 * A2);
}

}  // namespace

TEST_SUITE("lqr_nominal") {

TEST_CASE("memoryless plant has unit value and zero gain") {
  const auto sol = xlqr::solve_dare(scalar_system(0.0, 1.0), unit_cost(1, 1));
  REQUIRE(sol.has_value());
  CHECK(sol->P(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol->K_star(0, 0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("scalar Riccati solution matches the quadratic root") {
  const double a = 1.5, b = 1.8;
  const double P_expect = scalar_dare_oracle(a, b, 1.0, 1.0);
  const auto sol = xlqr::solve_dare(scalar_system(a, b), unit_cost(1, 1));
  REQUIRE(sol.has_value());
  CHECK(sol->P(0, 0) == doctest::Approx(P_expect).epsilon(1e-8));
  const double K_expect = -a * b * P_expect / (1.0 + b * b * P_expect);
  CHECK(sol->K_star(0, 0) == doctest::Approx(K_expect).epsilon(1e-8));
}

TEST_CASE("benchmark system: small residual and a stabilizing gain") {
  const LinearSystem sys = xlqr::dean_system();
  const auto sol = xlqr::solve_dare(sys, unit_cost(3, 3));
  REQUIRE(sol.has_value());
  const Matrix& P = sol->P;
  const Matrix& K = sol->K_star;
  const Matrix Acl = sys.A + sys.B * K;
  const Matrix res = P - (unit_cost(3, 3).Q + K.transpose() * K +
                          Acl.transpose() * P * Acl);
  CHECK(res.norm() <= 1e-9 * (1.0 + P.norm()));
  CHECK(xlqr::is_stabilizing(K, sys));
}

TEST_CASE("non-stabilizable pair diverges to an empty result") {
  CHECK_FALSE(xlqr::solve_dare(scalar_system(2.0, 0.0), unit_cost(1, 1)));
}

TEST_CASE("controller cost closed forms and the instability marker") {
  const LinearSystem sys = scalar_system(0.0, 1.0);
  const CostModel cost = unit_cost(1, 1);
  const Matrix K0 = Matrix::Zero(1, 1);
  const auto c = xlqr::controller_cost(sys, cost, K0, 1.0);
  REQUIRE(c.has_value());
  CHECK(*c == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_FALSE(
      xlqr::controller_cost(scalar_system(1.5, 1.8), cost, K0, 1.0));
}

TEST_CASE("optimal gain attains sigma^2 trace P and beats other gains") {
  const LinearSystem sys = xlqr::dean_system();
  const CostModel cost = unit_cost(3, 3);
  const auto sol = xlqr::solve_dare(sys, cost);
  REQUIRE(sol.has_value());
  const auto c_star = xlqr::controller_cost(sys, cost, sol->K_star, 1.0);
  REQUIRE(c_star.has_value());
  CHECK(*c_star == doctest::Approx(sol->P.trace()).epsilon(1e-6));

  const Matrix K_other = sol->K_star + 0.05 * Matrix::Identity(3, 3);
  const auto c_other = xlqr::controller_cost(sys, cost, K_other, 1.0);
  REQUIRE(c_other.has_value());
  CHECK(*c_other >= *c_star - 1e-9);
}

TEST_CASE("certainty-equivalent gain on an empty region is zero") {
  xlqr::GramianAccumulator acc(1, 1, 1.0);
  xlqr::NoiseModel noise;
  const xlqr::EllipsoidRegion region =
      xlqr::credibility_region(acc, noise, 0.1);
  const auto K = xlqr::cec_controller(region, unit_cost(1, 1));
  REQUIRE(K.has_value());
  CHECK(K->norm() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("covariance SDP solves the memoryless plant exactly") {
  const auto res =
      xlqr::nominal_lqr_sdp(scalar_system(0.0, 1.0), unit_cost(1, 1), 1.0);
  CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(res.K(0, 0)) <= 1e-3);
  CHECK(std::abs(res.tightness) <= 1e-5);
}

TEST_CASE("covariance SDP agrees with the Riccati gain on random plants") {
  GaussianSampler rng(23);
  const CostModel cost = unit_cost(2, 1);
  int tested = 0;
  for (int attempt = 0; attempt < 100 && tested < 5; ++attempt) {
    LinearSystem sys{0.6 * rng.normal_matrix(2, 2), rng.normal_matrix(2, 1)};
    const auto ric = xlqr::solve_dare(sys, cost);
    if (!ric) continue;
    ++tested;
    const auto res = xlqr::nominal_lqr_sdp(sys, cost, 1.0);
    CHECK((res.K - ric->K_star).cwiseAbs().maxCoeff() <= 1e-3);
    const double obj_dare = ric->P.trace();
    CHECK(std::abs(res.objective - obj_dare) <= 1e-4 * (1.0 + obj_dare));
    CHECK(std::abs(res.tightness) <= 1e-5);
  }
  CHECK(tested == 5);
}

TEST_CASE("discrete Lyapunov solve inverts the recursion") {
  CHECK((*xlqr::solve_discrete_lyapunov(Matrix::Constant(1, 1, 0.5),
                                        Matrix::Identity(1, 1)))(0, 0) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  GaussianSampler rng(29);
  Matrix F = rng.normal_matrix(3, 3);
  F *= 0.7 / xlqr::spectral_radius(F);
  const Matrix W =
      xlqr::symmetrize(rng.normal_matrix(3, 3)) + 4.0 * Matrix::Identity(3, 3);
  const auto X = xlqr::solve_discrete_lyapunov(F, W);
  REQUIRE(X.has_value());
  CHECK((*X - F * (*X) * F.transpose() - W).norm() <= 1e-9 * (1.0 + X->norm()));

  CHECK_FALSE(xlqr::solve_discrete_lyapunov(Matrix::Constant(1, 1, 1.0),
                                            Matrix::Identity(1, 1)));
}

}  // TEST_SUITE
