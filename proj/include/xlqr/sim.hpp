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

#ifndef XLQR_SIM_HPP
#define XLQR_SIM_HPP

#include <optional>
#include <string>
#include <vector>

#include "xlqr/lin_core.hpp"
#include "xlqr/rng.hpp"

namespace xlqr {

/// Process and probing noise parameters. When `forced_noise` is set, step()
/// consumes its columns in order instead of sampling (test hook; a column of
/// zeros makes the dynamics exact).
struct NoiseModel {
  double sigma_w_sq = 1.0;
  double sigma_u_sq = 1.0;
  std::uint64_t seed = 0;
  std::optional<Matrix> forced_noise;
  mutable int forced_cursor = 0;
};

struct CostModel {
  Matrix Q;
  Matrix R;
};

struct Trajectory {
  std::vector<Vector> states;       // x_0 .. x_T
  std::vector<Vector> inputs;       // u_0 .. u_{T-1}
  std::vector<double> stage_costs;  // c_0 .. c_{T-1}

  int length() const { return static_cast<int>(inputs.size()); }
};

/// One transition x' = A x + B u + w, w ~ N(0, sigma_w^2 I) drawn from rng
/// (or taken from noise.forced_noise when present).
Vector step(const LinearSystem& sys, const Vector& x, const Vector& u,
            const NoiseModel& noise, GaussianSampler& rng);

/// x^T Q x + u^T R u.
double stage_cost(const CostModel& cost, const Vector& x, const Vector& u);

/// Sum of stage costs plus terminal penalty x_T^T P x_T.
double total_exploration_cost(const Trajectory& traj, const Matrix& terminal_P);

/// Rolls out u_t = K x_t + eta_t, eta ~ N(0, sigma_u^2 I), from x_0 = 0.
Trajectory rollout(const LinearSystem& sys, const CostModel& cost,
                   const Matrix& K, const NoiseModel& noise, int horizon,
                   GaussianSampler& rng);

/// CSV with header: step, x0.., u0.., stage_cost.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace xlqr

#endif  // XLQR_SIM_HPP
