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

#ifndef XLQR_BENCH_HPP
#define XLQR_BENCH_HPP

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xlqr/explore.hpp"
#include "xlqr/lin_core.hpp"
#include "xlqr/rng.hpp"
#include "xlqr/sim.hpp"
#include "xlqr/sysid.hpp"

namespace xlqr {

/// Marginally unstable 3x3 benchmark system with identity input matrix.
LinearSystem dean_system();

/// Upper-triangular explosive 4x4 system with a 4x3 input matrix.
LinearSystem explosive_system();

CostModel identity_cost(int dx, int du);

/// One benchmark configuration. Exactly one of `preset` / `system` /
/// `random_C` selects the plant; random mode draws (A B) uniformly from the
/// Frobenius sphere of radius random_C at dimensions (dx, du), seeded from
/// `seed`. `stopping` accepts robust_sls, robust_lqr, or cec (the
/// sampling-based baseline rule). lambda_mode "heuristic" replaces `lambda`
/// with the prior-matching value computed from the plant's Frobenius norm.
struct ExperimentConfig {
  std::string preset;  // dean | explosive4x4 | empty
  std::optional<LinearSystem> system;
  double random_C = 0.0;  // > 0 selects random mode
  int dx = 0;             // random mode dims
  int du = 0;
  double delta = 0.1;
  double lambda = 1.0;
  std::string lambda_mode = "explicit";  // explicit | heuristic
  double sigma_w_sq = 1.0;
  double sigma_u_sq = 1.0;
  std::string policy = "vanilla";
  std::string synthesis = "robust_sls";
  std::string stopping = "robust_sls";
  std::string region = "ellipsoid";  // ellipsoid | ball
  int n_boundary = 1000;
  int trials = 50;
  std::uint64_t seed = 0;
  int max_horizon = 2000;
  std::string out_dir;  // empty: no per-run JSON logs
};

void validate_config(const ExperimentConfig& cfg);
LinearSystem resolve_system(const ExperimentConfig& cfg);
double resolve_lambda(const ExperimentConfig& cfg, const LinearSystem& sys);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// FNV-1a hash of the canonical config JSON (output paths excluded),
/// rendered as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Aggregate of one configuration's trials. Medians and deviations are
/// computed over completed runs only; failures (horizon-cap or
/// solver-failure outcomes) are counted separately.
struct SummaryRow {
  std::string hash;
  std::string policy;
  std::string region;  // ellipsoid | ball | cec-stop
  int trials = 0;
  int failures = 0;
  double median_steps = 0.0;
  double std_steps = 0.0;
  double median_logcost = 0.0;
  double std_logcost = 0.0;
};

std::string summary_csv_header();
std::string summary_csv_row(const SummaryRow& row);

/// Runs the configuration's trials (fanning out across hardware threads),
/// writes per-run JSON logs when out_dir is set, and returns the summary.
/// Trial seeds derive from cfg.seed alone, so paired-seed comparisons across
/// configurations hold by construction.
SummaryRow run_config(const ExperimentConfig& cfg,
                      std::vector<ExplorationLog>* logs = nullptr);

/// Full benchmark grid on the 3x3 preset: four probing policies crossed
/// with ellipsoid stopping, 2-ball stopping, and the baseline cec stop.
std::vector<SummaryRow> run_table1(int trials, std::uint64_t seed,
                                   const std::string& out_dir);

/// Plain-text table of run_table1 rows (policies as rows, variants as
/// median +- std columns).
std::string format_table1(const std::vector<SummaryRow>& rows);

struct CoverageReport {
  double C = 0.0;
  double lambda = 0.0;
  int systems = 0;
  int steps_each = 0;
  double coverage = 0.0;  // pooled share of step-wise region hits
};

/// Samples `systems` plants uniformly from the Frobenius sphere of radius C,
/// evolves each for steps_each pure-noise steps, and reports the pooled
/// share of steps whose credibility region contained the plant.
CoverageReport run_coverage(int dx, int du, double C, double lambda,
                            double delta, double sigma_w_sq,
                            double sigma_u_sq, int systems, int steps_each,
                            std::uint64_t seed);

struct RadiusCompareRow {
  int system_index = 0;
  double a = 0.0;
  double b = 0.0;
  double radius = 0.0;
  double cec_worst_cost = 0.0;     // +inf marks an unstabilized member
  double robust_worst_cost = 0.0;  // +inf also when synthesis fails
};

/// Scalar robustness study: for each sampled system, the worst
/// infinite-horizon cost over members of the ball of each radius, once for
/// the nominal Riccati gain and once for the robust synthesis on that ball.
std::vector<RadiusCompareRow> run_radius_compare(
    int n_systems, const std::vector<double>& radii, std::uint64_t seed);

std::string radius_compare_csv(const std::vector<RadiusCompareRow>& rows);

struct EquivalenceReport {
  int trials = 0;
  int solver_failures = 0;
  int marginal = 0;
  int usable = 0;
  int agreements = 0;
  int both_feasible = 0;
  double max_lqr_lmi_violation = 0.0;  // feasibility-form -> cost-form map
  double max_sls_lmi_violation = 0.0;  // cost-form -> normalized-form map
  double max_roundtrip_residual = 0.0;
};

/// Random instances spanning feasible and infeasible region scales; both
/// syntheses are solved per instance and verdicts compared on the clean,
/// non-marginal set. Feasible pairs also exercise the certificate maps.
EquivalenceReport run_equivalence(int trials, int dim_cap,
                                  std::uint64_t seed);

/// Random synthesis instance: dimensions up to dim_cap, Ginibre-style
/// center, and a well-conditioned shape matrix scaled by 10^u with u
/// uniform in [log10_lo, log10_hi].
EllipsoidRegion random_region(GaussianSampler& rng, int dim_cap,
                              double log10_lo, double log10_hi);

double median(std::vector<double> values);
double sample_std(const std::vector<double>& values);

}  // namespace xlqr

#endif  // XLQR_BENCH_HPP
