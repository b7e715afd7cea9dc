# Copyright 2026 The xlqr authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Robust controller synthesis from single-trajectory data."""

from ._xlqr import (
    EllipsoidRegion,
    ExplorationLog,
    FeasibilityDiagnostic,
    LinearSystem,
    StepRecord,
    StrongStability,
    SynthesisCertificate,
    ball_region_from,
    bound_controller_norm,
    cec_stopping_run,
    chi2_quantile,
    controller_cost,
    dean_system,
    explosive_system,
    feasibility_diagnostic,
    is_stabilizing,
    lambda_heuristic,
    lqr_to_sls_solution,
    minmax_controller,
    region_contains,
    relaxed_sls,
    robust_lqr,
    robust_sls,
    run_exploration,
    sample_boundary,
    sls_to_lqr_solution,
    solve_dare,
    spectral_radius,
    strong_stability,
)

__all__ = [
    "EllipsoidRegion",
    "ExplorationLog",
    "FeasibilityDiagnostic",
    "LinearSystem",
    "StepRecord",
    "StrongStability",
    "SynthesisCertificate",
    "ball_region_from",
    "bound_controller_norm",
    "cec_stopping_run",
    "chi2_quantile",
    "controller_cost",
    "dean_system",
    "explosive_system",
    "feasibility_diagnostic",
    "is_stabilizing",
    "lambda_heuristic",
    "lqr_to_sls_solution",
    "minmax_controller",
    "region_contains",
    "relaxed_sls",
    "robust_lqr",
    "robust_sls",
    "run_exploration",
    "sample_boundary",
    "sls_to_lqr_solution",
    "solve_dare",
    "spectral_radius",
    "strong_stability",
]

__version__ = "0.1.0"
