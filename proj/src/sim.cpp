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

#include "xlqr/sim.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace xlqr {

Vector step(const LinearSystem& sys, const Vector& x, const Vector& u,
            const NoiseModel& noise, GaussianSampler& rng) {
  if (x.size() != sys.dx() || u.size() != sys.du()) {
    throw std::invalid_argument("step: state or input dimension mismatch");
  }
  Vector w;
  if (noise.forced_noise.has_value()) {
    const Matrix& seq = *noise.forced_noise;
    if (seq.rows() != sys.dx()) {
      throw std::invalid_argument("step: forced noise has wrong row count");
    }
    if (noise.forced_cursor >= seq.cols()) {
      throw std::out_of_range("step: forced noise sequence exhausted");
    }
    w = seq.col(noise.forced_cursor++);
  } else {
    w = rng.normal_vector(sys.dx(), std::sqrt(noise.sigma_w_sq));
  }
  return sys.A * x + sys.B * u + w;
}

double stage_cost(const CostModel& cost, const Vector& x, const Vector& u) {
  if (x.size() != cost.Q.rows() || u.size() != cost.R.rows()) {
    throw std::invalid_argument("stage_cost: dimension mismatch");
  }
  return x.dot(cost.Q * x) + u.dot(cost.R * u);
}

double total_exploration_cost(const Trajectory& traj,
                              const Matrix& terminal_P) {
  if (traj.states.empty()) {
    throw std::invalid_argument("total_exploration_cost: empty trajectory");
  }
  double total = 0.0;
  for (double c : traj.stage_costs) total += c;
  const Vector& xT = traj.states.back();
  total += xT.dot(terminal_P * xT);
  return total;
}

Trajectory rollout(const LinearSystem& sys, const CostModel& cost,
                   const Matrix& K, const NoiseModel& noise, int horizon,
                   GaussianSampler& rng) {
  Trajectory traj;
  Vector x = Vector::Zero(sys.dx());
  traj.states.push_back(x);
  for (int t = 0; t < horizon; ++t) {
    Vector u = K * x + rng.normal_vector(sys.du(), std::sqrt(noise.sigma_u_sq));
    traj.inputs.push_back(u);
    traj.stage_costs.push_back(stage_cost(cost, x, u));
    x = step(sys, x, u, noise, rng);
    traj.states.push_back(x);
  }
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_trajectory_csv: cannot open " + path);
  }
  const int dx = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
  const int du = traj.inputs.empty() ? 0 : static_cast<int>(traj.inputs[0].size());
  out << "step";
  for (int i = 0; i < dx; ++i) out << ",x" << i;
  for (int i = 0; i < du; ++i) out << ",u" << i;
  out << ",stage_cost\n";
  out.precision(17);
  for (int t = 0; t < traj.length(); ++t) {
    out << t;
    for (int i = 0; i < dx; ++i) out << "," << traj.states[t](i);
    for (int i = 0; i < du; ++i) out << "," << traj.inputs[t](i);
    out << "," << traj.stage_costs[t] << "\n";
  }
  out.close();
}

}  // namespace xlqr
