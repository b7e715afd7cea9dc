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

#include "xlqr/explore.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "xlqr/lqr_nominal.hpp"
#include "xlqr/rng.hpp"

namespace xlqr {

namespace {

constexpr double kCondGate = 1e12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Distinct seed stream for the boundary samples of the baseline stopping
// rule, so runs are reproducible from the noise seed alone.
constexpr std::uint64_t kBoundaryStream = 0x51ab1e00u;

struct StopResult {
  bool stop = false;
  std::string status;  // for the step log
  double t_value = kNaN;
  std::string outcome;  // set when stop
  SynthesisCertificate cert;
};

using StoppingRule = std::function<StopResult(const EllipsoidRegion&, int)>;

void validate_common(const ProbingPolicy& policy, double delta, double lambda,
                     const std::string& region_kind) {
  if (!(lambda > 0.0)) throw std::invalid_argument("explore: lambda must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("explore: delta must be in (0, 1)");
  if (!(policy.sigma_u_sq > 0.0)) throw std::invalid_argument("explore: sigma_u_sq must be positive");
  if (policy.variant != "vanilla" && policy.variant != "cec" &&
      policy.variant != "minmax" && policy.variant != "relaxed_sls") {
    throw std::invalid_argument("explore: unknown probing policy " + policy.variant);
  }
  if (region_kind != "ellipsoid" && region_kind != "ball") {
    throw std::invalid_argument("explore: region kind must be ellipsoid or ball");
  }
}

Matrix probing_gain(const ProbingPolicy& policy, const EllipsoidRegion& region,
                    const CostModel& cost) {
  const int dx = region.dx();
  const int du = region.du();
  Matrix zero = Matrix::Zero(du, dx);
  try {
    if (policy.variant == "cec") {
      std::optional<Matrix> K = cec_controller(region, cost);
      return K ? *K : zero;
    }
    if (policy.variant == "minmax") {
      SynthesisCertificate c = minmax_controller(region);
      return c.status == SolveStatus::Optimal ? c.K : zero;
    }
    if (policy.variant == "relaxed_sls") {
      SynthesisCertificate c = relaxed_sls(region);
      return c.status == SolveStatus::Optimal ? c.K : zero;
    }
  } catch (const std::exception&) {
    return zero;
  }
  return zero;
}

double condition_number_sym(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M));
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

ExplorationLog explore_loop(const LinearSystem& sys, const CostModel& cost,
                            const NoiseModel& noise,
                            const ProbingPolicy& policy, double delta,
                            double lambda, const std::string& region_kind,
                            int max_horizon, const StoppingRule& stopping) {
  validate_common(policy, delta, lambda, region_kind);
  if (max_horizon < 1) throw std::invalid_argument("explore: max_horizon must be >= 1");
  const int dx = sys.dx();
  const int du = sys.du();

  GramianAccumulator acc(dx, du, lambda);
  GaussianSampler rng(noise.seed);
  ExplorationLog log;
  log.trajectory.states.push_back(Vector::Zero(dx));
  std::optional<EllipsoidRegion> prev_region;
  bool terminated = false;

  for (int i = 1; i <= max_horizon; ++i) {
    const Vector x = log.trajectory.states.back();
    Matrix Ki = Matrix::Zero(du, dx);
    if (policy.variant != "vanilla" && prev_region) {
      Ki = probing_gain(policy, *prev_region, cost);
    }
    Vector u = Ki * x + rng.normal_vector(du, std::sqrt(policy.sigma_u_sq));
    Vector xn = step(sys, x, u, noise, rng);
    const double c = stage_cost(cost, x, u);
    absorb(acc, x, u, xn);
    log.trajectory.inputs.push_back(u);
    log.trajectory.stage_costs.push_back(c);
    log.trajectory.states.push_back(xn);

    EllipsoidRegion region = credibility_region(acc, noise, delta);
    if (region_kind == "ball") region = ball_region_from(region);
    prev_region = region;

    StepRecord rec;
    rec.step = i;
    rec.state = x;
    rec.input = u;
    rec.stage_cost = c;
    rec.lambda_min_D = min_eigenvalue_sym(region.D);
    rec.t_value = kNaN;

    const int k = dx + du;
    Matrix Vreg = acc.V + lambda * Matrix::Identity(k, k);
    if (condition_number_sym(Vreg) >= kCondGate) {
      rec.synthesis_status = "skipped";
      log.steps.push_back(rec);
      continue;
    }

    StopResult sr = stopping(region, i);
    rec.synthesis_status = sr.status;
    rec.t_value = sr.t_value;
    log.steps.push_back(rec);
    if (sr.stop) {
      log.outcome = sr.outcome;
      log.certificate = sr.cert;
      log.termination_step = i;
      terminated = true;
      break;
    }
  }

  if (!terminated) {
    log.termination_step = max_horizon;
    log.outcome = "horizon-cap";
  }

  Matrix P_terminal = Matrix::Zero(dx, dx);
  if (std::optional<RiccatiSolution> ric = solve_dare(sys, cost)) {
    P_terminal = ric->P;
  }
  log.total_cost = total_exploration_cost(log.trajectory, P_terminal);
  return log;
}

SynthesisCertificate synthesize(const std::string& method,
                                const EllipsoidRegion& region,
                                const CostModel& cost, double sigma_w_sq) {
  if (method == "robust_sls") return robust_sls(region);
  return robust_lqr(region, cost, sigma_w_sq);
}

constexpr std::uint32_t kCertifyStream = 0x7e11ca10u;
constexpr int kCertifySamples = 1000;

// Fresh-sample stabilization check, independent of the synthesis module's
// internal verification.
bool passes_boundary_check(const Matrix& K, const EllipsoidRegion& region,
                           std::uint64_t seed) {
  GaussianSampler srng(seed);
  for (const LinearSystem& member :
       sample_boundary(region, kCertifySamples, srng)) {
    if (!is_stabilizing(K, member)) return false;
  }
  return true;
}

}  // namespace

ExplorationLog run_exploration(const LinearSystem& sys, const CostModel& cost,
                               const NoiseModel& noise,
                               const ProbingPolicy& policy, double delta,
                               double lambda, const std::string& synthesis,
                               const std::string& stopping,
                               int max_horizon,
                               const std::string& region_kind) {
  for (const std::string* tag : {&synthesis, &stopping}) {
    if (*tag != "robust_sls" && *tag != "robust_lqr") {
      throw std::invalid_argument("explore: method tag must be robust_sls or robust_lqr");
    }
  }

  StoppingRule rule = [&](const EllipsoidRegion& region, int step) -> StopResult {
    StopResult out;
    SynthesisCertificate cert;
    try {
      cert = synthesize(stopping, region, cost, noise.sigma_w_sq);
    } catch (const std::exception&) {
      out.status = "numerical-failure";
      return out;
    }
    out.status = to_string(cert.status);
    if (cert.status == SolveStatus::Optimal) out.t_value = cert.t;
    if (!cert.certified) return out;

    const std::uint64_t verify_seed = split_seed(
        noise.seed, kCertifyStream + static_cast<std::uint64_t>(step));
    if (synthesis == stopping) {
      if (!passes_boundary_check(cert.K, region, verify_seed)) {
        out.status = "numerical-failure";
        return out;
      }
      out.stop = true;
      out.outcome = "certified";
      out.cert = cert;
      return out;
    }
    if (!passes_boundary_check(cert.K, region, verify_seed)) {
      out.status = "numerical-failure";
      return out;
    }
    SynthesisCertificate final_cert;
    try {
      final_cert = synthesize(synthesis, region, cost, noise.sigma_w_sq);
    } catch (const std::exception&) {
      final_cert.status = SolveStatus::NumericalFailure;
    }
    out.stop = true;
    if (final_cert.certified &&
        passes_boundary_check(final_cert.K, region,
                              split_seed(noise.seed, kCertifyStream + 1 +
                                                         static_cast<std::uint64_t>(step)))) {
      out.outcome = "certified";
      out.cert = final_cert;
    } else {
      out.outcome = "solver-failure";
      out.cert = final_cert;
    }
    return out;
  };

  return explore_loop(sys, cost, noise, policy, delta, lambda, region_kind,
                      max_horizon, rule);
}

ExplorationLog cec_stopping_run(const LinearSystem& sys, const CostModel& cost,
                                const NoiseModel& noise,
                                const ProbingPolicy& policy, double delta,
                                double lambda, int n_boundary,
                                int max_horizon,
                                const std::string& region_kind) {
  if (n_boundary < 1) throw std::invalid_argument("explore: n_boundary must be >= 1");

  StoppingRule rule = [&](const EllipsoidRegion& region, int step_index) -> StopResult {
    StopResult out;
    std::optional<Matrix> K = cec_controller(region, cost);
    if (!K) {
      out.status = "numerical-failure";
      return out;
    }
    out.status = "optimal";
    GaussianSampler brng(split_seed(noise.seed, kBoundaryStream + step_index));
    for (const LinearSystem& member : sample_boundary(region, n_boundary, brng)) {
      if (!is_stabilizing(*K, member)) return out;
    }
    out.stop = true;
    out.outcome = "stopped";
    out.cert.method = "cec";
    out.cert.status = SolveStatus::Optimal;
    out.cert.certified = false;
    out.cert.marginal = false;
    out.cert.K = *K;
    out.cert.region = region;
    out.cert.members_checked = n_boundary;
    out.cert.member_violations = 0;
    out.cert.note = "sampling-based stopping rule; no robust certificate";
    return out;
  };

  return explore_loop(sys, cost, noise, policy, delta, lambda, region_kind,
                      max_horizon, rule);
}

nlohmann::json exploration_log_to_json(const ExplorationLog& log) {
  nlohmann::json j;
  j["outcome"] = log.outcome;
  j["termination_step"] = log.termination_step;
  j["total_cost"] = log.total_cost;
  j["certificate"] = certificate_to_json(log.certificate);
  nlohmann::json steps = nlohmann::json::array();
  for (const StepRecord& rec : log.steps) {
    nlohmann::json s;
    s["step"] = rec.step;
    s["state"] = std::vector<double>(rec.state.data(), rec.state.data() + rec.state.size());
    s["input"] = std::vector<double>(rec.input.data(), rec.input.data() + rec.input.size());
    s["stage_cost"] = rec.stage_cost;
    s["lambda_min_D"] = rec.lambda_min_D;
    s["synthesis_status"] = rec.synthesis_status;
    if (std::isfinite(rec.t_value)) {
      s["t_value"] = rec.t_value;
    } else {
      s["t_value"] = nullptr;
    }
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  return j;
}

void write_exploration_csv(const ExplorationLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  out << "step,state_norm,stage_cost,lambda_min_D,synthesis_status,t_value\n";
  for (const StepRecord& rec : log.steps) {
    out << rec.step << ',' << rec.state.norm() << ',' << rec.stage_cost << ','
        << rec.lambda_min_D << ',' << rec.synthesis_status << ','
        << rec.t_value << '\n';
  }
}

}  // namespace xlqr
