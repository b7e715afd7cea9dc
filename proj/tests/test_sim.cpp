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

#include <cstdio>
#include <fstream>
#include <string>

#include "xlqr/sim.hpp"

using xlqr::CostModel;
using xlqr::GaussianSampler;
using xlqr::LinearSystem;
using xlqr::Matrix;
using xlqr::NoiseModel;
using xlqr::Trajectory;
using xlqr::Vector;

namespace {

LinearSystem scalar_system(double a, double b) {
  return {Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b)};
}

NoiseModel zero_noise(int dx, int cols) {
  NoiseModel noise;
  noise.forced_noise = Matrix::Zero(dx, cols);
  return noise;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("one noiseless step of the scalar plant") {
  const LinearSystem sys = scalar_system(1.5, 1.8);
  const NoiseModel noise = zero_noise(1, 1);
  GaussianSampler rng(0);
  const Vector x = Vector::Constant(1, 1.0);
  const Vector u = Vector::Constant(1, 1.0);
  const Vector next = xlqr::step(sys, x, u, noise, rng);
  CHECK(next(0) == doctest::Approx(3.3).epsilon(1e-12));
}

TEST_CASE("forced noise columns are consumed in order") {
  const LinearSystem sys = scalar_system(0.0, 0.0);
  NoiseModel noise;
  Matrix w(1, 3);
  w << 7.0, -2.0, 0.5;
  noise.forced_noise = w;
  GaussianSampler rng(0);
  const Vector x = Vector::Zero(1);
  const Vector u = Vector::Zero(1);
  CHECK(xlqr::step(sys, x, u, noise, rng)(0) == doctest::Approx(7.0));
  CHECK(xlqr::step(sys, x, u, noise, rng)(0) == doctest::Approx(-2.0));
  CHECK(xlqr::step(sys, x, u, noise, rng)(0) == doctest::Approx(0.5));
}

TEST_CASE("stage cost is the quadratic form in x and u") {
  CostModel cost{Matrix::Identity(2, 2), Matrix::Identity(1, 1)};
  Vector x(2);
  x << 1.0, 1.0;
  const Vector u = Vector::Constant(1, 2.0);
  CHECK(xlqr::stage_cost(cost, x, u) == doctest::Approx(6.0));

  CostModel heavy{2.0 * Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  CHECK(xlqr::stage_cost(heavy, Vector::Constant(1, 3.0),
                         Vector::Constant(1, 1.0)) == doctest::Approx(19.0));
}

TEST_CASE("rollout starts at the origin and is seed-deterministic") {
  const LinearSystem sys = scalar_system(0.5, 1.0);
  const CostModel cost{Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  NoiseModel noise;
  noise.seed = 42;

  GaussianSampler rng_a(42), rng_b(42), rng_c(43);
  const Matrix K = Matrix::Zero(1, 1);
  const Trajectory a = xlqr::rollout(sys, cost, K, noise, 20, rng_a);
  const Trajectory b = xlqr::rollout(sys, cost, K, noise, 20, rng_b);
  const Trajectory c = xlqr::rollout(sys, cost, K, noise, 20, rng_c);

  REQUIRE(a.length() == 20);
  REQUIRE(static_cast<int>(a.states.size()) == 21);
  CHECK(a.states[0].norm() == doctest::Approx(0.0));
  for (int i = 0; i <= 20; ++i) CHECK(a.states[i] == b.states[i]);
  bool differs = false;
  for (int i = 0; i <= 20; ++i) {
    if ((a.states[i] - c.states[i]).norm() > 0) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("total cost sums stages plus the terminal penalty") {
  Trajectory traj;
  traj.states = {Vector::Zero(1), Vector::Constant(1, 2.0)};
  traj.inputs = {Vector::Zero(1)};
  traj.stage_costs = {3.0};
  CHECK(xlqr::total_exploration_cost(traj, Matrix::Zero(1, 1)) ==
        doctest::Approx(3.0));
  CHECK(xlqr::total_exploration_cost(traj, Matrix::Identity(1, 1)) ==
        doctest::Approx(7.0));
}

TEST_CASE("trajectory CSV has the documented header") {
  const LinearSystem sys = scalar_system(0.5, 1.0);
  const CostModel cost{Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  NoiseModel noise;
  GaussianSampler rng(1);
  const Trajectory traj =
      xlqr::rollout(sys, cost, Matrix::Zero(1, 1), noise, 5, rng);

  const std::string path = "sim_traj_test.csv";
  xlqr::write_trajectory_csv(traj, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("step", 0) == 0);
  CHECK(header.find("stage_cost") != std::string::npos);
  int data_lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++data_lines;
  }
  CHECK(data_lines == 5);
  in.close();
  std::remove(path.c_str());
}

}  // TEST_SUITE
