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

#include "xlqr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "xlqr/json_io.hpp"
#include "xlqr/lqr_nominal.hpp"
#include "xlqr/robust_synth.hpp"

namespace xlqr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int uniform_dim(GaussianSampler& rng, int cap) {
  int d = 1 + static_cast<int>(rng.uniform01() * cap);
  return std::min(d, cap);
}

}  // namespace

LinearSystem dean_system() {
  Matrix A(3, 3);
  A << 1.01, 0.01, 0.00,
       0.01, 1.01, 0.01,
       0.00, 0.01, 1.01;
  return {A, Matrix::Identity(3, 3)};
}

LinearSystem explosive_system() {
  Matrix A(4, 4);
  A << 1.5, 1.0, 0.4, 2.3,
       0.0, 1.3, 1.3, 1.1,
       0.0, 0.0, 1.0, 0.7,
       0.0, 0.0, 0.0, 0.8;
  Matrix B(4, 3);
  B << 0.6, 0.7, 0.3,
       0.8, 1.1, 1.1,
       1.2, 0.2, 2.3,
       2.1, 0.4, 0.4;
  return {A, B};
}

CostModel identity_cost(int dx, int du) {
  return {Matrix::Identity(dx, dx), Matrix::Identity(du, du)};
}

void validate_config(const ExperimentConfig& cfg) {
  const int modes = (!cfg.preset.empty() ? 1 : 0) +
                    (cfg.system.has_value() ? 1 : 0) +
                    (cfg.random_C > 0.0 ? 1 : 0);
  if (modes != 1) {
    throw std::invalid_argument(
        "config: exactly one of preset, explicit system, or random_C required");
  }
  if (!cfg.preset.empty() && cfg.preset != "dean" && cfg.preset != "explosive4x4") {
    throw std::invalid_argument("config: unknown preset " + cfg.preset);
  }
  if (cfg.random_C > 0.0 && (cfg.dx < 1 || cfg.du < 1)) {
    throw std::invalid_argument("config: random mode needs dx >= 1 and du >= 1");
  }
  if (cfg.lambda_mode != "explicit" && cfg.lambda_mode != "heuristic") {
    throw std::invalid_argument("config: lambda_mode must be explicit or heuristic");
  }
  if (cfg.policy != "vanilla" && cfg.policy != "cec" && cfg.policy != "minmax" &&
      cfg.policy != "relaxed_sls") {
    throw std::invalid_argument("config: unknown policy " + cfg.policy);
  }
  if (cfg.synthesis != "robust_sls" && cfg.synthesis != "robust_lqr") {
    throw std::invalid_argument("config: synthesis must be robust_sls or robust_lqr");
  }
  if (cfg.stopping != "robust_sls" && cfg.stopping != "robust_lqr" &&
      cfg.stopping != "cec") {
    throw std::invalid_argument("config: stopping must be robust_sls, robust_lqr, or cec");
  }
  if (cfg.region != "ellipsoid" && cfg.region != "ball") {
    throw std::invalid_argument("config: region must be ellipsoid or ball");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw std::invalid_argument("config: delta must be in (0, 1)");
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("config: lambda must be positive");
  if (!(cfg.sigma_w_sq > 0.0) || !(cfg.sigma_u_sq > 0.0)) {
    throw std::invalid_argument("config: noise variances must be positive");
  }
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.max_horizon < 1) throw std::invalid_argument("config: max_horizon must be >= 1");
  if (cfg.n_boundary < 1) throw std::invalid_argument("config: n_boundary must be >= 1");
}

LinearSystem resolve_system(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.preset == "dean") return dean_system();
  if (cfg.preset == "explosive4x4") return explosive_system();
  if (cfg.random_C > 0.0) {
    GaussianSampler draw(split_seed(cfg.seed, 0x5d5ee));
    Matrix AB = draw.normal_matrix(cfg.dx, cfg.dx + cfg.du, 1.0);
    AB *= cfg.random_C / AB.norm();
    return {AB.leftCols(cfg.dx), AB.rightCols(cfg.du)};
  }
  return *cfg.system;
}

double resolve_lambda(const ExperimentConfig& cfg, const LinearSystem& sys) {
  if (cfg.lambda_mode == "explicit") return cfg.lambda;
  Matrix AB(sys.dx(), sys.dx() + sys.du());
  AB << sys.A, sys.B;
  return lambda_heuristic(AB.norm(), sys.dx(), sys.du(), cfg.sigma_w_sq);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  if (cfg.system) {
    j["A"] = matrix_to_json(cfg.system->A);
    j["B"] = matrix_to_json(cfg.system->B);
  }
  if (cfg.random_C > 0.0) {
    j["random_C"] = cfg.random_C;
    j["dx"] = cfg.dx;
    j["du"] = cfg.du;
  }
  j["delta"] = cfg.delta;
  j["lambda"] = cfg.lambda;
  j["lambda_mode"] = cfg.lambda_mode;
  j["sigma_w_sq"] = cfg.sigma_w_sq;
  j["sigma_u_sq"] = cfg.sigma_u_sq;
  j["policy"] = cfg.policy;
  j["synthesis"] = cfg.synthesis;
  j["stopping"] = cfg.stopping;
  j["region"] = cfg.region;
  j["n_boundary"] = cfg.n_boundary;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["max_horizon"] = cfg.max_horizon;
  if (!cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.preset = j.value("preset", std::string());
  if (j.contains("A") || j.contains("B")) {
    if (!j.contains("A") || !j.contains("B")) {
      throw std::invalid_argument("config: explicit system needs both A and B");
    }
    cfg.system = LinearSystem{matrix_from_json(j.at("A")), matrix_from_json(j.at("B"))};
  }
  cfg.random_C = j.value("random_C", cfg.random_C);
  cfg.dx = j.value("dx", cfg.dx);
  cfg.du = j.value("du", cfg.du);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.lambda = j.value("lambda", cfg.lambda);
  cfg.lambda_mode = j.value("lambda_mode", cfg.lambda_mode);
  cfg.sigma_w_sq = j.value("sigma_w_sq", cfg.sigma_w_sq);
  cfg.sigma_u_sq = j.value("sigma_u_sq", cfg.sigma_u_sq);
  cfg.policy = j.value("policy", cfg.policy);
  cfg.synthesis = j.value("synthesis", cfg.synthesis);
  cfg.stopping = j.value("stopping", cfg.stopping);
  cfg.region = j.value("region", cfg.region);
  cfg.n_boundary = j.value("n_boundary", cfg.n_boundary);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.max_horizon = j.value("max_horizon", cfg.max_horizon);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
  nlohmann::json j = config_to_json(cfg);
  j.erase("out_dir");
  const std::string s = j.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string summary_csv_header() {
  return "config-hash,policy,region,median_steps,std_steps,median_logcost,std_logcost,failures";
}

std::string summary_csv_row(const SummaryRow& row) {
  std::ostringstream out;
  out.precision(10);
  out << row.hash << ',' << row.policy << ',' << row.region << ','
      << row.median_steps << ',' << row.std_steps << ','
      << row.median_logcost << ',' << row.std_logcost << ',' << row.failures;
  return out.str();
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double sample_std(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

SummaryRow run_config(const ExperimentConfig& cfg,
                      std::vector<ExplorationLog>* logs_out) {
  validate_config(cfg);
  const LinearSystem sys = resolve_system(cfg);
  const CostModel cost = identity_cost(sys.dx(), sys.du());
  const ProbingPolicy policy{cfg.policy, cfg.sigma_u_sq};
  const double lambda = resolve_lambda(cfg, sys);

  std::vector<ExplorationLog> logs(cfg.trials);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int j; (j = next.fetch_add(1)) < cfg.trials;) {
      NoiseModel noise;
      noise.sigma_w_sq = cfg.sigma_w_sq;
      noise.sigma_u_sq = cfg.sigma_u_sq;
      noise.seed = split_seed(cfg.seed, static_cast<std::uint64_t>(j));
      try {
        if (cfg.stopping == "cec") {
          logs[j] = cec_stopping_run(sys, cost, noise, policy, cfg.delta,
                                     lambda, cfg.n_boundary, cfg.max_horizon,
                                     cfg.region);
        } else {
          logs[j] = run_exploration(sys, cost, noise, policy, cfg.delta,
                                    lambda, cfg.synthesis, cfg.stopping,
                                    cfg.max_horizon, cfg.region);
        }
      } catch (const std::exception&) {
        logs[j].outcome = "solver-failure";
        logs[j].termination_step = 0;
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, cfg.trials));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  SummaryRow row;
  row.hash = config_hash(cfg);
  row.policy = cfg.policy;
  row.region = cfg.stopping == "cec" ? "cec-stop" : cfg.region;
  row.trials = cfg.trials;
  std::vector<double> steps;
  std::vector<double> logcosts;
  for (const ExplorationLog& log : logs) {
    if (log.outcome == "certified" || log.outcome == "stopped") {
      steps.push_back(static_cast<double>(log.termination_step));
      logcosts.push_back(std::log(log.total_cost));
    } else {
      ++row.failures;
    }
  }
  row.median_steps = median(steps);
  row.std_steps = sample_std(steps);
  row.median_logcost = median(logcosts);
  row.std_logcost = sample_std(logcosts);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    save_json(config_to_json(cfg), cfg.out_dir + "/config.json");
    for (int j = 0; j < cfg.trials; ++j) {
      std::ostringstream name;
      name << cfg.out_dir << "/run_" << std::setw(3) << std::setfill('0') << j
           << ".json";
      save_json(exploration_log_to_json(logs[j]), name.str());
    }
    std::ofstream csv(cfg.out_dir + "/summary.csv");
    csv << summary_csv_header() << '\n' << summary_csv_row(row) << '\n';
  }

  if (logs_out != nullptr) *logs_out = std::move(logs);
  return row;
}

std::vector<SummaryRow> run_table1(int trials, std::uint64_t seed,
                                   const std::string& out_dir) {
  const std::vector<std::string> policies = {"vanilla", "cec", "minmax",
                                             "relaxed_sls"};
  struct Variant {
    const char* tag;
    const char* region;
    const char* stopping;
  };
  const std::vector<Variant> variants = {
      {"ellipsoid", "ellipsoid", "robust_sls"},
      {"ball", "ball", "robust_sls"},
      {"cec-stop", "ellipsoid", "cec"},
  };

  std::vector<SummaryRow> rows;
  for (const std::string& policy : policies) {
    for (const Variant& variant : variants) {
      ExperimentConfig cfg;
      cfg.preset = "dean";
      cfg.lambda = 1.0;
      cfg.policy = policy;
      cfg.region = variant.region;
      cfg.stopping = variant.stopping;
      cfg.trials = trials;
      cfg.seed = seed;
      if (!out_dir.empty()) {
        cfg.out_dir = out_dir + "/" + policy + "_" + variant.tag;
      }
      rows.push_back(run_config(cfg));
    }
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/table1.csv");
    csv << summary_csv_header() << '\n';
    for (const SummaryRow& row : rows) csv << summary_csv_row(row) << '\n';
    std::ofstream txt(out_dir + "/table1.txt");
    txt << format_table1(rows);
  }
  return rows;
}

std::string format_table1(const std::vector<SummaryRow>& rows) {
  auto find = [&](const std::string& policy,
                  const std::string& region) -> const SummaryRow* {
    for (const SummaryRow& row : rows) {
      if (row.policy == policy && row.region == region) return &row;
    }
    return nullptr;
  };
  auto cell = [](const SummaryRow* row, bool steps) {
    char buf[64];
    if (row == nullptr) return std::string("-");
    if (steps) {
      std::snprintf(buf, sizeof(buf), "%.0f+-%.1f", row->median_steps,
                    row->std_steps);
    } else {
      std::snprintf(buf, sizeof(buf), "%.2f+-%.2f", row->median_logcost,
                    row->std_logcost);
    }
    return std::string(buf);
  };

  std::ostringstream out;
  out << std::left << std::setw(12) << "policy";
  for (const char* tag : {"ellipsoid", "ball", "cec-stop"}) {
    out << std::setw(16) << (std::string(tag) + " steps") << std::setw(16)
        << (std::string(tag) + " logC");
  }
  out << '\n';
  for (const char* policy : {"vanilla", "cec", "minmax", "relaxed_sls"}) {
    out << std::left << std::setw(12) << policy;
    for (const char* region : {"ellipsoid", "ball", "cec-stop"}) {
      const SummaryRow* row = find(policy, region);
      out << std::setw(16) << cell(row, true) << std::setw(16)
          << cell(row, false);
    }
    out << '\n';
  }
  return out.str();
}

CoverageReport run_coverage(int dx, int du, double C, double lambda,
                            double delta, double sigma_w_sq,
                            double sigma_u_sq, int systems, int steps_each,
                            std::uint64_t seed) {
  if (dx < 1 || du < 1) throw std::invalid_argument("coverage: dims must be >= 1");
  if (!(C > 0.0)) throw std::invalid_argument("coverage: C must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("coverage: lambda must be positive");
  if (systems < 1 || steps_each < 1) {
    throw std::invalid_argument("coverage: systems and steps must be >= 1");
  }

  GaussianSampler draw(split_seed(seed, 0));
  long hits = 0;
  long total = 0;
  for (int s = 0; s < systems; ++s) {
    Matrix AB = draw.normal_matrix(dx, dx + du, 1.0);
    AB *= C / AB.norm();
    LinearSystem sys{AB.leftCols(dx), AB.rightCols(du)};

    NoiseModel noise;
    noise.sigma_w_sq = sigma_w_sq;
    noise.sigma_u_sq = sigma_u_sq;
    noise.seed = split_seed(seed, 1 + static_cast<std::uint64_t>(s));
    GaussianSampler rng(noise.seed);
    GramianAccumulator acc(dx, du, lambda);
    Vector x = Vector::Zero(dx);
    for (int i = 0; i < steps_each; ++i) {
      Vector u = rng.normal_vector(du, std::sqrt(sigma_u_sq));
      Vector xn = step(sys, x, u, noise, rng);
      absorb(acc, x, u, xn);
      EllipsoidRegion region = credibility_region(acc, noise, delta);
      hits += region_contains(region, sys) ? 1 : 0;
      ++total;
      x = xn;
    }
  }

  CoverageReport report;
  report.C = C;
  report.lambda = lambda;
  report.systems = systems;
  report.steps_each = steps_each;
  report.coverage = static_cast<double>(hits) / static_cast<double>(total);
  return report;
}

std::vector<RadiusCompareRow> run_radius_compare(
    int n_systems, const std::vector<double>& radii, std::uint64_t seed) {
  if (n_systems < 1) throw std::invalid_argument("radius-compare: need >= 1 system");
  const CostModel cost = identity_cost(1, 1);
  GaussianSampler draw(split_seed(seed, 0));
  std::vector<RadiusCompareRow> rows;

  for (int s = 0; s < n_systems; ++s) {
    const double a = -3.0 + 6.0 * draw.uniform01();
    const double b = -3.0 + 6.0 * draw.uniform01();
    LinearSystem sys{Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b)};
    std::optional<RiccatiSolution> ric = solve_dare(sys, cost);
    if (!ric) continue;
    const Matrix K_cec = ric->K_star;

    auto worst = [&](const Matrix& K, const std::vector<LinearSystem>& members) {
      double w = 0.0;
      for (const LinearSystem& member : members) {
        std::optional<double> c = controller_cost(member, cost, K, 1.0);
        if (!c) return kInf;
        w = std::max(w, *c);
      }
      return w;
    };

    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      const double r = radii[ri];
      RadiusCompareRow row;
      row.system_index = s;
      row.a = a;
      row.b = b;
      row.radius = r;
      if (r <= 0.0) {
        const double nominal = *controller_cost(sys, cost, K_cec, 1.0);
        row.cec_worst_cost = nominal;
        row.robust_worst_cost = nominal;
        rows.push_back(row);
        continue;
      }
      EllipsoidRegion region;
      region.A_hat = sys.A;
      region.B_hat = sys.B;
      region.D = Matrix::Identity(2, 2) / (r * r);
      region.delta = 0.0;
      region.c_delta = 0.0;

      GaussianSampler srng(split_seed(seed, 1000 + 100 * s + ri));
      std::vector<LinearSystem> members = sample_boundary(region, 64, srng);
      std::vector<LinearSystem> inner = sample_interior(region, 32, srng);
      members.insert(members.end(), inner.begin(), inner.end());
      members.push_back(sys);

      row.cec_worst_cost = worst(K_cec, members);
      SynthesisCertificate cert = robust_lqr(region, cost, 1.0);
      row.robust_worst_cost = cert.certified ? worst(cert.K, members) : kInf;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string radius_compare_csv(const std::vector<RadiusCompareRow>& rows) {
  std::ostringstream out;
  out.precision(10);
  out << "system,a,b,radius,cec_worst_cost,robust_worst_cost\n";
  for (const RadiusCompareRow& row : rows) {
    out << row.system_index << ',' << row.a << ',' << row.b << ','
        << row.radius << ',' << row.cec_worst_cost << ','
        << row.robust_worst_cost << '\n';
  }
  return out.str();
}

EllipsoidRegion random_region(GaussianSampler& rng, int dim_cap,
                              double log10_lo, double log10_hi) {
  const int dx = uniform_dim(rng, dim_cap);
  const int du = uniform_dim(rng, dim_cap);
  const int k = dx + du;
  EllipsoidRegion region;
  region.A_hat = rng.normal_matrix(dx, dx, 1.0 / std::sqrt(static_cast<double>(dx)));
  region.B_hat = rng.normal_matrix(dx, du, 1.0);
  Matrix G = rng.normal_matrix(k, k, 1.0 / std::sqrt(static_cast<double>(k)));
  Matrix W = G.transpose() * G + 0.25 * Matrix::Identity(k, k);
  const double scale = std::pow(10.0, log10_lo + rng.uniform01() * (log10_hi - log10_lo));
  region.D = scale * W;
  region.delta = 0.1;
  region.c_delta = 0.0;
  return region;
}

EquivalenceReport run_equivalence(int trials, int dim_cap,
                                  std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("equivalence: trials must be >= 1");
  if (dim_cap < 1) throw std::invalid_argument("equivalence: dim_cap must be >= 1");

  EquivalenceReport report;
  report.trials = trials;
  GaussianSampler rng(seed);
  const double sigma_w_sq = 1.0;

  for (int i = 0; i < trials; ++i) {
    EllipsoidRegion region = random_region(rng, dim_cap, -2.0, 6.0);
    const CostModel cost = identity_cost(region.dx(), region.du());
    SynthesisCertificate sls = robust_sls(region);
    SynthesisCertificate lqr = robust_lqr(region, cost, sigma_w_sq);
    if (sls.status == SolveStatus::NumericalFailure ||
        lqr.status == SolveStatus::NumericalFailure) {
      ++report.solver_failures;
      continue;
    }
    if (sls.marginal || lqr.marginal) {
      ++report.marginal;
      continue;
    }
    ++report.usable;
    const bool feas_sls = sls.status == SolveStatus::Optimal;
    const bool feas_lqr = lqr.status == SolveStatus::Optimal;
    if (feas_sls == feas_lqr) ++report.agreements;
    if (!(feas_sls && feas_lqr)) continue;

    ++report.both_feasible;
    try {
      SynthesisCertificate mapped = sls_to_lqr_solution(sls, sigma_w_sq);
      const double e1 = lqr_lmi_min_eig(region, mapped.Sigma, mapped.t, sigma_w_sq);
      report.max_lqr_lmi_violation = std::max(report.max_lqr_lmi_violation, -e1);

      auto [U, s_val] = lqr_to_sls_solution(lqr.Sigma, lqr.t, sigma_w_sq);
      const double e2 = sls_u_lmi_min_eig(region, U, s_val);
      report.max_sls_lmi_violation = std::max(report.max_sls_lmi_violation, -e2);

      auto [U2, s2] = lqr_to_sls_solution(mapped.Sigma, mapped.t, sigma_w_sq);
      Matrix IK(region.dx() + region.du(), region.dx());
      IK << Matrix::Identity(region.dx(), region.dx()), sls.K;
      Matrix U1 = IK * sls.X * IK.transpose();
      const double resid = std::max((U2 - U1).cwiseAbs().maxCoeff(),
                                    std::abs(s2 - sls.t));
      report.max_roundtrip_residual = std::max(report.max_roundtrip_residual, resid);
    } catch (const std::exception&) {
      report.max_lqr_lmi_violation = kInf;
    }
  }
  return report;
}

}  // namespace xlqr
