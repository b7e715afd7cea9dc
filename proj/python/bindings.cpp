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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xlqr/bench.hpp"
#include "xlqr/explore.hpp"
#include "xlqr/lin_core.hpp"
#include "xlqr/lqr_nominal.hpp"
#include "xlqr/robust_synth.hpp"
#include "xlqr/rng.hpp"
#include "xlqr/sim.hpp"
#include "xlqr/sysid.hpp"

namespace py = pybind11;
using namespace xlqr;

namespace {

CostModel cost_from(const Matrix& Q, const Matrix& R) { return {Q, R}; }

NoiseModel noise_from(double sigma_w_sq, double sigma_u_sq,
                      std::uint64_t seed) {
  NoiseModel noise;
  noise.sigma_w_sq = sigma_w_sq;
  noise.sigma_u_sq = sigma_u_sq;
  noise.seed = seed;
  return noise;
}

}  // namespace

PYBIND11_MODULE(_xlqr, m) {
  m.doc() = "robust controller synthesis from single-trajectory data";

  py::class_<LinearSystem>(m, "LinearSystem")
      .def(py::init([](Matrix A, Matrix B) {
             return LinearSystem{std::move(A), std::move(B)};
           }),
           py::arg("A"), py::arg("B"))
      .def_readwrite("A", &LinearSystem::A)
      .def_readwrite("B", &LinearSystem::B)
      .def_property_readonly("dx", &LinearSystem::dx)
      .def_property_readonly("du", &LinearSystem::du);

  py::class_<EllipsoidRegion>(m, "EllipsoidRegion")
      .def(py::init([](Matrix A_hat, Matrix B_hat, Matrix D, double delta,
                       double c_delta) {
             EllipsoidRegion region;
             region.A_hat = std::move(A_hat);
             region.B_hat = std::move(B_hat);
             region.D = std::move(D);
             region.delta = delta;
             region.c_delta = c_delta;
             return region;
           }),
           py::arg("A_hat"), py::arg("B_hat"), py::arg("D"),
           py::arg("delta") = 0.1, py::arg("c_delta") = 0.0)
      .def_readwrite("A_hat", &EllipsoidRegion::A_hat)
      .def_readwrite("B_hat", &EllipsoidRegion::B_hat)
      .def_readwrite("D", &EllipsoidRegion::D)
      .def_readwrite("delta", &EllipsoidRegion::delta)
      .def_readwrite("c_delta", &EllipsoidRegion::c_delta)
      .def_property_readonly("dx", &EllipsoidRegion::dx)
      .def_property_readonly("du", &EllipsoidRegion::du);

  py::class_<SynthesisCertificate>(m, "SynthesisCertificate")
      .def_readonly("method", &SynthesisCertificate::method)
      .def_property_readonly(
          "status",
          [](const SynthesisCertificate& c) { return to_string(c.status); })
      .def_readonly("certified", &SynthesisCertificate::certified)
      .def_readonly("marginal", &SynthesisCertificate::marginal)
      .def_readonly("K", &SynthesisCertificate::K)
      .def_readonly("X", &SynthesisCertificate::X)
      .def_readonly("S", &SynthesisCertificate::S)
      .def_readonly("Sigma", &SynthesisCertificate::Sigma)
      .def_readonly("t", &SynthesisCertificate::t)
      .def_readonly("objective", &SynthesisCertificate::objective)
      .def_readonly("members_checked", &SynthesisCertificate::members_checked)
      .def_readonly("member_violations",
                    &SynthesisCertificate::member_violations)
      .def_readonly("note", &SynthesisCertificate::note);

  py::class_<StrongStability>(m, "StrongStability")
      .def_readonly("kappa", &StrongStability::kappa)
      .def_readonly("gamma", &StrongStability::gamma)
      .def_readonly("H", &StrongStability::H)
      .def_readonly("L", &StrongStability::L);

  py::class_<FeasibilityDiagnostic>(m, "FeasibilityDiagnostic")
      .def_readonly("lhs", &FeasibilityDiagnostic::lhs)
      .def_readonly("rhs", &FeasibilityDiagnostic::rhs)
      .def_readonly("predicted_feasible",
                    &FeasibilityDiagnostic::predicted_feasible);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("step", &StepRecord::step)
      .def_readonly("state", &StepRecord::state)
      .def_readonly("input", &StepRecord::input)
      .def_readonly("stage_cost", &StepRecord::stage_cost)
      .def_readonly("lambda_min_D", &StepRecord::lambda_min_D)
      .def_readonly("synthesis_status", &StepRecord::synthesis_status)
      .def_readonly("t_value", &StepRecord::t_value);

  py::class_<ExplorationLog>(m, "ExplorationLog")
      .def_readonly("steps", &ExplorationLog::steps)
      .def_readonly("termination_step", &ExplorationLog::termination_step)
      .def_readonly("outcome", &ExplorationLog::outcome)
      .def_readonly("certificate", &ExplorationLog::certificate)
      .def_readonly("total_cost", &ExplorationLog::total_cost);

  m.def("dean_system", &dean_system);
  m.def("explosive_system", &explosive_system);
  m.def("spectral_radius", &spectral_radius, py::arg("M"));
  m.def(
      "is_stabilizing",
      [](const Matrix& K, const LinearSystem& sys, double margin) {
        return is_stabilizing(K, sys, margin);
      },
      py::arg("K"), py::arg("system"), py::arg("margin") = 1e-9);
  m.def("chi2_quantile", &chi2_quantile, py::arg("dof"), py::arg("delta"));
  m.def("lambda_heuristic", &lambda_heuristic, py::arg("C"), py::arg("dx"),
        py::arg("du"), py::arg("sigma_w_sq"));
  m.def(
      "ball_region_from",
      [](const EllipsoidRegion& region) { return ball_region_from(region); },
      py::arg("region"));
  m.def(
      "region_contains",
      [](const EllipsoidRegion& region, const LinearSystem& sys, double tol) {
        return region_contains(region, sys, tol);
      },
      py::arg("region"), py::arg("system"), py::arg("tol") = 1e-9);
  m.def(
      "sample_boundary",
      [](const EllipsoidRegion& region, int count, std::uint64_t seed) {
        GaussianSampler rng(seed);
        return sample_boundary(region, count, rng);
      },
      py::arg("region"), py::arg("count"), py::arg("seed") = 0);

  m.def(
      "solve_dare",
      [](const LinearSystem& sys, const Matrix& Q,
         const Matrix& R) -> std::optional<std::pair<Matrix, Matrix>> {
        std::optional<RiccatiSolution> sol = solve_dare(sys, cost_from(Q, R));
        if (!sol) return std::nullopt;
        return std::make_pair(sol->P, sol->K_star);
      },
      py::arg("system"), py::arg("Q"), py::arg("R"));
  m.def(
      "controller_cost",
      [](const LinearSystem& sys, const Matrix& Q, const Matrix& R,
         const Matrix& K, double sigma_w_sq) {
        return controller_cost(sys, cost_from(Q, R), K, sigma_w_sq);
      },
      py::arg("system"), py::arg("Q"), py::arg("R"), py::arg("K"),
      py::arg("sigma_w_sq") = 1.0);

  m.def(
      "robust_sls",
      [](const EllipsoidRegion& region) { return robust_sls(region); },
      py::arg("region"));
  m.def(
      "relaxed_sls",
      [](const EllipsoidRegion& region) { return relaxed_sls(region); },
      py::arg("region"));
  m.def(
      "robust_lqr",
      [](const EllipsoidRegion& region, const Matrix& Q, const Matrix& R,
         double sigma_w_sq) {
        return robust_lqr(region, cost_from(Q, R), sigma_w_sq);
      },
      py::arg("region"), py::arg("Q"), py::arg("R"),
      py::arg("sigma_w_sq") = 1.0);
  m.def(
      "minmax_controller",
      [](const EllipsoidRegion& region) { return minmax_controller(region); },
      py::arg("region"));
  m.def(
      "bound_controller_norm",
      [](const EllipsoidRegion& region, const Matrix& K) {
        return bound_controller_norm(region, K);
      },
      py::arg("region"), py::arg("K"));
  m.def(
      "sls_to_lqr_solution",
      [](const SynthesisCertificate& cert, double sigma_w_sq) {
        return sls_to_lqr_solution(cert, sigma_w_sq);
      },
      py::arg("certificate"), py::arg("sigma_w_sq") = 1.0);
  m.def(
      "lqr_to_sls_solution",
      [](const Matrix& Sigma, double t, double sigma_w_sq) {
        return lqr_to_sls_solution(Sigma, t, sigma_w_sq);
      },
      py::arg("Sigma"), py::arg("t"), py::arg("sigma_w_sq") = 1.0);
  m.def(
      "strong_stability",
      [](const SynthesisCertificate& cert, double sigma_w_sq) {
        return strong_stability(cert, sigma_w_sq);
      },
      py::arg("certificate"), py::arg("sigma_w_sq") = 1.0);
  m.def(
      "feasibility_diagnostic",
      [](const LinearSystem& sys, const Matrix& K,
         const EllipsoidRegion& region) {
        return feasibility_diagnostic(sys, K, region);
      },
      py::arg("system"), py::arg("K"), py::arg("region"));

  m.def(
      "run_exploration",
      [](const LinearSystem& sys, const Matrix& Q, const Matrix& R,
         double sigma_w_sq, double sigma_u_sq, std::uint64_t seed,
         const std::string& policy, double delta, double lambda,
         const std::string& synthesis, const std::string& stopping,
         int max_horizon, const std::string& region_kind) {
        return run_exploration(sys, cost_from(Q, R),
                               noise_from(sigma_w_sq, sigma_u_sq, seed),
                               ProbingPolicy{policy, sigma_u_sq}, delta,
                               lambda, synthesis, stopping, max_horizon,
                               region_kind);
      },
      py::arg("system"), py::arg("Q"), py::arg("R"),
      py::arg("sigma_w_sq") = 1.0, py::arg("sigma_u_sq") = 1.0,
      py::arg("seed") = 0, py::arg("policy") = "vanilla",
      py::arg("delta") = 0.1, py::arg("lambda_") = 1.0,
      py::arg("synthesis") = "robust_sls", py::arg("stopping") = "robust_sls",
      py::arg("max_horizon") = 2000, py::arg("region_kind") = "ellipsoid");
  m.def(
      "cec_stopping_run",
      [](const LinearSystem& sys, const Matrix& Q, const Matrix& R,
         double sigma_w_sq, double sigma_u_sq, std::uint64_t seed,
         const std::string& policy, double delta, double lambda,
         int n_boundary, int max_horizon, const std::string& region_kind) {
        return cec_stopping_run(sys, cost_from(Q, R),
                                noise_from(sigma_w_sq, sigma_u_sq, seed),
                                ProbingPolicy{policy, sigma_u_sq}, delta,
                                lambda, n_boundary, max_horizon, region_kind);
      },
      py::arg("system"), py::arg("Q"), py::arg("R"),
      py::arg("sigma_w_sq") = 1.0, py::arg("sigma_u_sq") = 1.0,
      py::arg("seed") = 0, py::arg("policy") = "vanilla",
      py::arg("delta") = 0.1, py::arg("lambda_") = 1.0,
      py::arg("n_boundary") = 1000, py::arg("max_horizon") = 2000,
      py::arg("region_kind") = "ellipsoid");
}
