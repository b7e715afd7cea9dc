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

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "xlqr/bench.hpp"
#include "xlqr/json_io.hpp"
#include "xlqr/robust_synth.hpp"
#include "xlqr/sysid.hpp"

namespace {

using xlqr::ExperimentConfig;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

void add_config_flags(CLI::App* sc, std::string& config_path,
                      ExperimentConfig& flags) {
  sc->add_option("--config", config_path, "config JSON file")
      ->check(CLI::ExistingFile);
  sc->add_option("--preset", flags.preset, "system preset: dean | explosive4x4");
  sc->add_option("--random-C", flags.random_C,
                 "draw the plant from the Frobenius sphere of this radius");
  sc->add_option("--dx", flags.dx, "state dimension for --random-C");
  sc->add_option("--du", flags.du, "input dimension for --random-C");
  sc->add_option("--delta", flags.delta, "credibility failure budget");
  sc->add_option("--lambda", flags.lambda, "prior precision");
  sc->add_option("--lambda-mode", flags.lambda_mode, "explicit | heuristic");
  sc->add_option("--sigma-w-sq", flags.sigma_w_sq, "process noise variance");
  sc->add_option("--sigma-u-sq", flags.sigma_u_sq, "probing noise variance");
  sc->add_option("--policy", flags.policy,
                 "probing policy: vanilla | cec | minmax | relaxed_sls");
  sc->add_option("--synthesis", flags.synthesis,
                 "returned-controller synthesis: robust_sls | robust_lqr");
  sc->add_option("--stopping", flags.stopping,
                 "stopping rule: robust_sls | robust_lqr | cec");
  sc->add_option("--region", flags.region, "region kind: ellipsoid | ball");
  sc->add_option("--n-boundary", flags.n_boundary,
                 "boundary samples for the cec stopping rule");
  sc->add_option("--trials", flags.trials, "number of seeded runs");
  sc->add_option("--seed", flags.seed, "base seed");
  sc->add_option("--max-horizon", flags.max_horizon, "step cap per run");
  sc->add_option("--out", flags.out_dir, "artifact directory");
}

ExperimentConfig merge_config(const CLI::App* sc,
                              const std::string& config_path,
                              const ExperimentConfig& flags) {
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = xlqr::config_from_json(xlqr::load_json(config_path));
  }
  if (sc->count("--preset") > 0) {
    cfg.preset = flags.preset;
    cfg.system.reset();
    cfg.random_C = 0.0;
  }
  if (sc->count("--random-C") > 0) {
    cfg.random_C = flags.random_C;
    cfg.preset.clear();
    cfg.system.reset();
  }
  if (sc->count("--dx") > 0) cfg.dx = flags.dx;
  if (sc->count("--du") > 0) cfg.du = flags.du;
  if (sc->count("--delta") > 0) cfg.delta = flags.delta;
  if (sc->count("--lambda") > 0) cfg.lambda = flags.lambda;
  if (sc->count("--lambda-mode") > 0) cfg.lambda_mode = flags.lambda_mode;
  if (sc->count("--sigma-w-sq") > 0) cfg.sigma_w_sq = flags.sigma_w_sq;
  if (sc->count("--sigma-u-sq") > 0) cfg.sigma_u_sq = flags.sigma_u_sq;
  if (sc->count("--policy") > 0) cfg.policy = flags.policy;
  if (sc->count("--synthesis") > 0) cfg.synthesis = flags.synthesis;
  if (sc->count("--stopping") > 0) cfg.stopping = flags.stopping;
  if (sc->count("--region") > 0) cfg.region = flags.region;
  if (sc->count("--n-boundary") > 0) cfg.n_boundary = flags.n_boundary;
  if (sc->count("--trials") > 0) cfg.trials = flags.trials;
  if (sc->count("--seed") > 0) cfg.seed = flags.seed;
  if (sc->count("--max-horizon") > 0) cfg.max_horizon = flags.max_horizon;
  if (sc->count("--out") > 0) cfg.out_dir = flags.out_dir;
  return cfg;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"certified exploration and robust controller synthesis"};
  app.require_subcommand(1);

  std::string config_path;
  ExperimentConfig flags;
  CLI::App* explore = app.add_subcommand(
      "explore", "run seeded exploration trials for one configuration");
  add_config_flags(explore, config_path, flags);
  explore->callback([&] {
    ExperimentConfig cfg = merge_config(explore, config_path, flags);
    xlqr::SummaryRow row = xlqr::run_config(cfg);
    std::cout << xlqr::summary_csv_header() << '\n'
              << xlqr::summary_csv_row(row) << '\n';
  });

  int t1_trials = 50;
  std::uint64_t t1_seed = 0;
  std::string t1_out;
  CLI::App* table1 = app.add_subcommand(
      "table1", "policy x stopping-variant benchmark grid on the 3x3 preset");
  table1->add_option("--trials", t1_trials, "trials per cell");
  table1->add_option("--seed", t1_seed, "base seed");
  table1->add_option("--out", t1_out, "artifact directory");
  table1->callback([&] {
    std::vector<xlqr::SummaryRow> rows =
        xlqr::run_table1(t1_trials, t1_seed, t1_out);
    std::cout << xlqr::format_table1(rows);
    std::cout << xlqr::summary_csv_header() << '\n';
    for (const xlqr::SummaryRow& row : rows) {
      std::cout << xlqr::summary_csv_row(row) << '\n';
    }
  });

  int cov_dx = 1, cov_du = 1, cov_systems = 200, cov_steps = 10;
  double cov_C = 1.0, cov_lambda = 0.0, cov_scale = 1.0, cov_delta = 0.1;
  double cov_sw = 1.0, cov_su = 1.0;
  std::uint64_t cov_seed = 0;
  std::string cov_out;
  CLI::App* coverage = app.add_subcommand(
      "coverage", "empirical credibility-region coverage on random plants");
  coverage->add_option("--dx", cov_dx, "state dimension");
  coverage->add_option("--du", cov_du, "input dimension");
  coverage->add_option("--C", cov_C, "Frobenius radius of the plant sphere");
  coverage->add_option("--lambda", cov_lambda,
                       "explicit prior precision (default: heuristic)");
  coverage->add_option("--lambda-scale", cov_scale,
                       "multiplier on the heuristic prior precision");
  coverage->add_option("--delta", cov_delta, "credibility failure budget");
  coverage->add_option("--sigma-w-sq", cov_sw, "process noise variance");
  coverage->add_option("--sigma-u-sq", cov_su, "probing noise variance");
  coverage->add_option("--systems", cov_systems, "sampled plants");
  coverage->add_option("--steps", cov_steps, "steps per plant");
  coverage->add_option("--seed", cov_seed, "base seed");
  coverage->add_option("--out", cov_out, "report JSON path");
  coverage->callback([&] {
    double lambda = cov_lambda;
    if (coverage->count("--lambda") == 0) {
      lambda = cov_scale *
               xlqr::lambda_heuristic(cov_C, cov_dx, cov_du, cov_sw);
    }
    xlqr::CoverageReport report =
        xlqr::run_coverage(cov_dx, cov_du, cov_C, lambda, cov_delta, cov_sw,
                           cov_su, cov_systems, cov_steps, cov_seed);
    nlohmann::json j;
    j["C"] = report.C;
    j["lambda"] = report.lambda;
    j["systems"] = report.systems;
    j["steps_each"] = report.steps_each;
    j["coverage"] = report.coverage;
    emit(j.dump(2), cov_out);
  });

  int rc_systems = 5;
  std::vector<double> rc_radii = {0.0,  0.25, 0.5,  0.75, 1.0, 1.25,
                                  1.5,  1.75, 2.0,  2.5,  3.0};
  std::uint64_t rc_seed = 0;
  std::string rc_out;
  CLI::App* radius = app.add_subcommand(
      "radius-compare",
      "worst-case cost vs uncertainty radius, nominal vs robust gain");
  radius->add_option("--systems", rc_systems, "number of sampled scalar plants");
  radius->add_option("--radii", rc_radii, "radius grid")->delimiter(',');
  radius->add_option("--seed", rc_seed, "base seed");
  radius->add_option("--out", rc_out, "CSV path");
  radius->callback([&] {
    std::vector<xlqr::RadiusCompareRow> rows =
        xlqr::run_radius_compare(rc_systems, rc_radii, rc_seed);
    emit(xlqr::radius_compare_csv(rows), rc_out);
  });

  int eq_trials = 200, eq_dim_cap = 3;
  std::uint64_t eq_seed = 0;
  std::string eq_out;
  CLI::App* equivalence = app.add_subcommand(
      "equivalence",
      "verdict agreement of the two robust syntheses plus certificate maps");
  equivalence->add_option("--trials", eq_trials, "random instances");
  equivalence->add_option("--dim-cap", eq_dim_cap, "max state/input dimension");
  equivalence->add_option("--seed", eq_seed, "base seed");
  equivalence->add_option("--out", eq_out, "report JSON path");
  equivalence->callback([&] {
    xlqr::EquivalenceReport report =
        xlqr::run_equivalence(eq_trials, eq_dim_cap, eq_seed);
    nlohmann::json j;
    j["trials"] = report.trials;
    j["solver_failures"] = report.solver_failures;
    j["marginal"] = report.marginal;
    j["usable"] = report.usable;
    j["agreements"] = report.agreements;
    j["both_feasible"] = report.both_feasible;
    j["max_lqr_lmi_violation"] = report.max_lqr_lmi_violation;
    j["max_sls_lmi_violation"] = report.max_sls_lmi_violation;
    j["max_roundtrip_residual"] = report.max_roundtrip_residual;
    emit(j.dump(2), eq_out);
  });

  std::string sy_region_path, sy_method = "robust_sls", sy_out;
  double sy_sw = 1.0;
  CLI::App* synth = app.add_subcommand(
      "synth", "one-shot robust synthesis from a region JSON");
  synth->add_option("--region", sy_region_path, "region JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--method", sy_method,
                    "robust_sls | robust_lqr | relaxed_sls | minmax");
  synth->add_option("--sigma-w-sq", sy_sw, "process noise variance");
  synth->add_option("--out", sy_out, "certificate JSON path");
  synth->callback([&] {
    xlqr::EllipsoidRegion region =
        xlqr::region_from_json(xlqr::load_json(sy_region_path));
    xlqr::SynthesisCertificate cert;
    if (sy_method == "robust_sls") {
      cert = xlqr::robust_sls(region);
    } else if (sy_method == "robust_lqr") {
      cert = xlqr::robust_lqr(
          region, xlqr::identity_cost(region.dx(), region.du()), sy_sw);
    } else if (sy_method == "relaxed_sls") {
      cert = xlqr::relaxed_sls(region);
    } else if (sy_method == "minmax") {
      cert = xlqr::minmax_controller(region);
    } else {
      throw std::invalid_argument("synth: unknown method " + sy_method);
    }
    emit(xlqr::certificate_to_json(cert).dump(2), sy_out);
    if (cert.status == xlqr::SolveStatus::NumericalFailure) {
      throw std::runtime_error("synthesis failed numerically");
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
