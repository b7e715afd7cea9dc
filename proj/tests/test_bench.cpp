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
#include <filesystem>
#include <limits>
#include <vector>

#include "xlqr/bench.hpp"

using xlqr::EllipsoidRegion;
using xlqr::ExperimentConfig;
using xlqr::GaussianSampler;
using xlqr::LinearSystem;
using xlqr::Matrix;
using xlqr::SummaryRow;

namespace {

ExperimentConfig scalar_config() {
  ExperimentConfig cfg;
  cfg.system = LinearSystem{Matrix::Constant(1, 1, 1.5),
                            Matrix::Constant(1, 1, 1.8)};
  cfg.lambda = 0.25;
  cfg.synthesis = "robust_lqr";
  cfg.stopping = "robust_lqr";
  cfg.trials = 4;
  cfg.seed = 12;
  cfg.max_horizon = 100;
  return cfg;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("preset plants have the documented shapes") {
  const LinearSystem dean = xlqr::dean_system();
  CHECK(dean.dx() == 3);
  CHECK(dean.du() == 3);
  CHECK((dean.B - Matrix::Identity(3, 3)).norm() == doctest::Approx(0.0));
  const double rho = xlqr::spectral_radius(dean.A);
  CHECK(rho > 1.0);
  CHECK(rho < 1.1);

  const LinearSystem big = xlqr::explosive_system();
  CHECK(big.dx() == 4);
  CHECK(big.du() == 3);
  CHECK(xlqr::spectral_radius(big.A) > 1.0);
}

TEST_CASE("config validation rejects malformed requests") {
  ExperimentConfig cfg = scalar_config();
  CHECK_NOTHROW(xlqr::validate_config(cfg));

  cfg.trials = 0;
  CHECK_THROWS(xlqr::validate_config(cfg));

  cfg = scalar_config();
  cfg.preset = "dean";  // second system mode
  CHECK_THROWS(xlqr::validate_config(cfg));

  cfg = scalar_config();
  cfg.policy = "unknown";
  CHECK_THROWS(xlqr::validate_config(cfg));

  cfg = scalar_config();
  cfg.system.reset();
  CHECK_THROWS(xlqr::validate_config(cfg));
}

TEST_CASE("lambda resolution honors the heuristic mode") {
  ExperimentConfig cfg;
  cfg.preset = "dean";
  cfg.lambda_mode = "heuristic";
  const LinearSystem sys = xlqr::resolve_system(cfg);
  Matrix AB(3, 6);
  AB << sys.A, sys.B;
  const double expect = xlqr::lambda_heuristic(AB.norm(), 3, 3, cfg.sigma_w_sq);
  CHECK(xlqr::resolve_lambda(cfg, sys) == doctest::Approx(expect));

  cfg.lambda_mode = "explicit";
  cfg.lambda = 0.75;
  CHECK(xlqr::resolve_lambda(cfg, sys) == doctest::Approx(0.75));
}

TEST_CASE("config JSON round trip and stable hashing") {
  const ExperimentConfig cfg = scalar_config();
  const ExperimentConfig back = xlqr::config_from_json(xlqr::config_to_json(cfg));
  CHECK(back.lambda == doctest::Approx(cfg.lambda));
  CHECK(back.trials == cfg.trials);
  CHECK(back.stopping == cfg.stopping);
  REQUIRE(back.system.has_value());
  CHECK((back.system->A - cfg.system->A).norm() == doctest::Approx(0.0));

  const std::string h = xlqr::config_hash(cfg);
  CHECK(h.size() == 16);
  CHECK(h == xlqr::config_hash(back));
  ExperimentConfig other = cfg;
  other.lambda = 0.5;
  CHECK(h != xlqr::config_hash(other));
}

TEST_CASE("summary CSV header names the documented columns") {
  CHECK(xlqr::summary_csv_header() ==
        "config-hash,policy,region,median_steps,std_steps,median_logcost,"
        "std_logcost,failures");
  SummaryRow row;
  row.hash = "abc";
  row.policy = "vanilla";
  row.region = "ellipsoid";
  const std::string line = xlqr::summary_csv_row(row);
  CHECK(line.rfind("abc,vanilla,ellipsoid", 0) == 0);
}

TEST_CASE("seeded trial batches are reproducible") {
  const ExperimentConfig cfg = scalar_config();
  std::vector<xlqr::ExplorationLog> logs_a, logs_b;
  const SummaryRow a = xlqr::run_config(cfg, &logs_a);
  const SummaryRow b = xlqr::run_config(cfg, &logs_b);
  CHECK(a.trials == 4);
  CHECK(a.failures == 0);
  CHECK(a.median_steps == b.median_steps);
  CHECK(a.std_steps == b.std_steps);
  CHECK(a.median_logcost == b.median_logcost);
  REQUIRE(logs_a.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(logs_a[i].termination_step == logs_b[i].termination_step);
    CHECK(logs_a[i].total_cost == logs_b[i].total_cost);
  }
}

TEST_CASE("artifact directory receives one log per trial") {
  namespace fs = std::filesystem;
  ExperimentConfig cfg = scalar_config();
  cfg.trials = 2;
  cfg.out_dir = "bench_artifacts_test";
  fs::remove_all(cfg.out_dir);
  xlqr::run_config(cfg);
  int json_logs = 0;
  for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
    if (entry.path().extension() == ".json") ++json_logs;
  }
  CHECK(json_logs >= 2);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("median and deviation helpers") {
  CHECK(xlqr::median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(xlqr::median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
  CHECK(xlqr::sample_std({1.0, 2.0, 3.0}) == doctest::Approx(1.0));
}

TEST_CASE("random instances have bounded dimensions and definite shapes") {
  GaussianSampler rng(71);
  for (int i = 0; i < 20; ++i) {
    const EllipsoidRegion region = xlqr::random_region(rng, 3, -1.0, 3.0);
    CHECK(region.dx() >= 1);
    CHECK(region.dx() <= 3);
    CHECK(region.du() >= 1);
    CHECK(region.du() <= 3);
    CHECK(xlqr::min_eigenvalue_sym(region.D) > 0.0);
  }
}

TEST_CASE("coverage protocol reports a pooled frequency") {
  const xlqr::CoverageReport rep =
      xlqr::run_coverage(1, 1, 1.0, 2.0, 0.1, 1.0, 1.0, 20, 5, 3);
  CHECK(rep.systems == 20);
  CHECK(rep.steps_each == 5);
  CHECK(rep.coverage >= 0.0);
  CHECK(rep.coverage <= 1.0);
  const xlqr::CoverageReport again =
      xlqr::run_coverage(1, 1, 1.0, 2.0, 0.1, 1.0, 1.0, 20, 5, 3);
  CHECK(rep.coverage == again.coverage);
}

TEST_CASE("equivalence battery agrees on a small smoke batch") {
  const xlqr::EquivalenceReport rep = xlqr::run_equivalence(10, 2, 2);
  CHECK(rep.trials == 10);
  CHECK(rep.agreements == rep.usable);
  CHECK(rep.solver_failures == 0);
  CHECK(rep.max_roundtrip_residual < 1e-9);
  CHECK(rep.max_lqr_lmi_violation < 1e-6);
  CHECK(rep.max_sls_lmi_violation < 1e-6);
}

TEST_CASE("radius study: nominal at zero radius, robust reaches farther") {
  const std::vector<double> radii = {0.0, 0.35};
  const auto rows = xlqr::run_radius_compare(2, radii, 4);
  REQUIRE(!rows.empty());
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (row.radius == 0.0) {
      CHECK(row.cec_worst_cost == doctest::Approx(row.robust_worst_cost));
      CHECK(row.cec_worst_cost < inf);
    } else if (row.cec_worst_cost < inf) {
      // Whenever the nominal gain survives the ball, the robust one must.
      CHECK(row.robust_worst_cost < inf);
    }
  }
  const std::string csv = xlqr::radius_compare_csv(rows);
  CHECK(csv.rfind("system,", 0) == 0);
}

TEST_CASE("table formatting carries all four policies") {
  SummaryRow row;
  row.policy = "vanilla";
  row.region = "ellipsoid";
  row.median_steps = 44.0;
  row.std_steps = 8.2;
  row.median_logcost = 8.7;
  row.std_logcost = 0.58;
  const std::string table = xlqr::format_table1({row});
  CHECK(table.find("vanilla") != std::string::npos);
  CHECK(table.find("44") != std::string::npos);
}

}  // TEST_SUITE
