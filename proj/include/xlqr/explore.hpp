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

#ifndef XLQR_EXPLORE_HPP
#define XLQR_EXPLORE_HPP

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "xlqr/lin_core.hpp"
#include "xlqr/robust_synth.hpp"
#include "xlqr/sim.hpp"
#include "xlqr/sysid.hpp"

namespace xlqr {

/// How the exploration input u_i is chosen. vanilla plays pure noise
/// N(0, sigma_u^2 I); the data-dependent variants play N(K_i x_i,
/// sigma_u^2 I) with K_i from the certainty-equivalent Riccati gain, the
/// norm-minimizing synthesis, or the relaxed feasibility synthesis, falling
/// back to K_i = 0 whenever that sub-synthesis fails.
struct ProbingPolicy {
  std::string variant = "vanilla";  // vanilla | cec | minmax | relaxed_sls
  double sigma_u_sq = 1.0;
};

/// One exploration step: the state the input was applied at, the input, the
/// incurred cost, and the stopping-rule attempt on the region built from all
/// data through this step.
struct StepRecord {
  int step = 0;
  Vector state;
  Vector input;
  double stage_cost = 0.0;
  double lambda_min_D = 0.0;
  std::string synthesis_status;  // skipped | optimal | infeasible | numerical-failure
  double t_value = 0.0;          // NaN when no solved certificate
};

/// Full record of one exploration run. outcome is "certified" (robust
/// certificate found and verified; `certificate` carries it), "stopped"
/// (sampling-based baseline rule fired; controller in `certificate.K`, no
/// robust guarantee), "horizon-cap", or "solver-failure".
struct ExplorationLog {
  std::vector<StepRecord> steps;
  Trajectory trajectory;
  int termination_step = 0;
  std::string outcome;
  SynthesisCertificate certificate;
  double total_cost = 0.0;
};

/// Online exploration: probe per policy, accumulate least-squares data,
/// build the credibility region at level delta (ellipsoid, or its 2-ball
/// relaxation when region_kind is "ball"), and attempt the stopping-rule
/// synthesis each step once cond(V + lambda I) < 1e12. On a certified stop
/// the returned controller comes from the `synthesis` method (re-solved only
/// when it differs from `stopping`); both tags accept robust_sls or
/// robust_lqr. Hitting max_horizon yields the horizon-cap outcome.
ExplorationLog run_exploration(const LinearSystem& sys, const CostModel& cost,
                               const NoiseModel& noise,
                               const ProbingPolicy& policy, double delta,
                               double lambda, const std::string& synthesis,
                               const std::string& stopping,
                               int max_horizon = 2000,
                               const std::string& region_kind = "ellipsoid");

/// Baseline loop: same probing, but the stopping rule computes the
/// certainty-equivalent gain and stops once it stabilizes every one of
/// n_boundary sampled boundary systems. The returned controller carries no
/// robust certificate.
ExplorationLog cec_stopping_run(const LinearSystem& sys, const CostModel& cost,
                                const NoiseModel& noise,
                                const ProbingPolicy& policy, double delta,
                                double lambda, int n_boundary = 1000,
                                int max_horizon = 2000,
                                const std::string& region_kind = "ellipsoid");

nlohmann::json exploration_log_to_json(const ExplorationLog& log);

/// CSV with header: step, state_norm, stage_cost, lambda_min_D,
/// synthesis_status, t_value.
void write_exploration_csv(const ExplorationLog& log, const std::string& path);

}  // namespace xlqr

#endif  // XLQR_EXPLORE_HPP
