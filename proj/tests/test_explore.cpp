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

#include "xlqr/bench.hpp"
#include "xlqr/explore.hpp"

using xlqr::CostModel;
using xlqr::ExplorationLog;
using xlqr::GaussianSampler;
using xlqr::LinearSystem;
using xlqr::Matrix;
using xlqr::NoiseModel;
using xlqr::ProbingPolicy;

namespace {

LinearSystem scalar_plant() {
  return {Matrix::Constant(1, 1, 1.5), Matrix::Constant(1, 1, 1.8)};
}

CostModel unit_cost(int dx, int du) {
  return {Matrix::Identity(dx, dx), Matrix::Identity(du, du)};
}

ExplorationLog scalar_run(std::uint64_t seed, const std::string& region_kind) {
  NoiseModel noise;
  noise.seed = seed;
  ProbingPolicy policy;
  return xlqr::run_exploration(scalar_plant(), unit_cost(1, 1), noise, policy,
                               0.1, 0.25, "robust_lqr", "robust_lqr", 200,
                               region_kind);
}

}  // namespace

TEST_SUITE("explore") {

TEST_CASE("scalar exploration certifies quickly and stabilizes the truth") {
  const ExplorationLog log = scalar_run(3, "ellipsoid");
  REQUIRE(log.outcome == "certified");
  CHECK(log.termination_step <= 30);
  CHECK(log.certificate.certified);
  CHECK(xlqr::is_stabilizing(log.certificate.K, scalar_plant()));
  CHECK(static_cast<int>(log.steps.size()) == log.termination_step);
  CHECK(log.total_cost > 0.0);
}

TEST_CASE("fixed seeds reproduce the entire log") {
  const ExplorationLog a = scalar_run(7, "ellipsoid");
  const ExplorationLog b = scalar_run(7, "ellipsoid");
  CHECK(a.outcome == b.outcome);
  CHECK(a.termination_step == b.termination_step);
  CHECK(a.total_cost == b.total_cost);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].stage_cost == b.steps[i].stage_cost);
    CHECK(a.steps[i].synthesis_status == b.steps[i].synthesis_status);
  }
}

TEST_CASE("certified stop survives an independent boundary re-check") {
  const ExplorationLog log = scalar_run(11, "ellipsoid");
  REQUIRE(log.outcome == "certified");
  GaussianSampler rng(999);
  for (const LinearSystem& sys :
       xlqr::sample_boundary(log.certificate.region, 1000, rng)) {
    CHECK(xlqr::is_stabilizing(log.certificate.K, sys));
  }
}

TEST_CASE("ball relaxation never stops before the ellipsoid") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const ExplorationLog ell = scalar_run(seed, "ellipsoid");
    const ExplorationLog ball = scalar_run(seed, "ball");
    REQUIRE(ell.outcome == "certified");
    REQUIRE(ball.outcome == "certified");
    CHECK(ball.termination_step >= ell.termination_step);
  }
}

TEST_CASE("horizon cap is reported as such") {
  NoiseModel noise;
  noise.seed = 5;
  ProbingPolicy policy;
  const ExplorationLog log =
      xlqr::run_exploration(xlqr::dean_system(), unit_cost(3, 3), noise,
                            policy, 0.1, 1.0, "robust_sls", "robust_sls", 4);
  CHECK(log.outcome == "horizon-cap");
  CHECK(log.termination_step == 4);
  CHECK_FALSE(log.certificate.certified);
}

TEST_CASE("early steps are skipped while the data matrix is singular") {
  NoiseModel noise;
  noise.seed = 5;
  ProbingPolicy policy;
  const ExplorationLog log =
      xlqr::run_exploration(xlqr::dean_system(), unit_cost(3, 3), noise,
                            policy, 0.1, 1e-18, "robust_sls", "robust_sls", 3);
  REQUIRE(!log.steps.empty());
  CHECK(log.steps[0].synthesis_status == "skipped");
}

TEST_CASE("data-dependent probing variants terminate and certify") {
  for (const std::string variant : {"cec", "minmax", "relaxed_sls"}) {
    NoiseModel noise;
    noise.seed = 17;
    ProbingPolicy policy;
    policy.variant = variant;
    const ExplorationLog log =
        xlqr::run_exploration(scalar_plant(), unit_cost(1, 1), noise, policy,
                              0.1, 0.25, "robust_lqr", "robust_lqr", 200);
    REQUIRE(log.outcome == "certified");
    CHECK(xlqr::is_stabilizing(log.certificate.K, scalar_plant()));
  }
}

TEST_CASE("sampling-based stop returns an uncertified controller") {
  NoiseModel noise;
  noise.seed = 2;
  ProbingPolicy policy;
  const ExplorationLog log =
      xlqr::cec_stopping_run(scalar_plant(), unit_cost(1, 1), noise, policy,
                             0.1, 0.25, 200, 300);
  REQUIRE(log.outcome == "stopped");
  CHECK_FALSE(log.certificate.certified);
  CHECK(xlqr::is_stabilizing(log.certificate.K,
                             log.certificate.region.center()));
  GaussianSampler rng(424);
  int stabilized = 0;
  const auto members =
      xlqr::sample_boundary(log.certificate.region, 200, rng);
  for (const LinearSystem& sys : members) {
    if (xlqr::is_stabilizing(log.certificate.K, sys)) ++stabilized;
  }
  // Approximate rule: most fresh boundary systems are still stabilized.
  CHECK(stabilized >= 180);
}

TEST_CASE("log serialization carries the per-step series") {
  const ExplorationLog log = scalar_run(3, "ellipsoid");
  const nlohmann::json j = xlqr::exploration_log_to_json(log);
  CHECK(j.contains("outcome"));
  CHECK(j.contains("termination_step"));
  CHECK(j.contains("steps"));
  CHECK(j["steps"].is_array());
  CHECK(j["steps"].size() == log.steps.size());

  const std::string path = "explore_log_test.csv";
  xlqr::write_exploration_csv(log, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("step", 0) == 0);
  CHECK(header.find("lambda_min_D") != std::string::npos);
  in.close();
  std::remove(path.c_str());
}

}  // TEST_SUITE
