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

import math

import numpy as np
import pytest

import xlqr


def small_region(scale=50.0):
    return xlqr.EllipsoidRegion(
        A_hat=np.array([[1.5]]),
        B_hat=np.array([[1.8]]),
        D=scale * np.eye(2),
        delta=0.1,
    )


def test_presets_and_spectral_radius():
    dean = xlqr.dean_system()
    assert dean.A.shape == (3, 3) and dean.B.shape == (3, 3)
    assert xlqr.spectral_radius(dean.A) == pytest.approx(
        1.01 + 0.01 * math.sqrt(2.0), abs=1e-9
    )
    boom = xlqr.explosive_system()
    assert boom.A.shape == (4, 4) and boom.B.shape == (4, 3)
    assert xlqr.spectral_radius(boom.A) == pytest.approx(1.5, abs=1e-12)


def test_chi2_quantile_matches_known_values():
    # dof=2: quantile is -2 ln(delta)
    assert xlqr.chi2_quantile(2, 0.1) == pytest.approx(-2.0 * math.log(0.1), rel=1e-9)
    assert xlqr.chi2_quantile(1, 0.5) == pytest.approx(0.45493642311957, rel=1e-6)


def test_robust_sls_certifies_small_region():
    region = small_region()
    cert = xlqr.robust_sls(region)
    assert cert.status == "optimal"
    assert cert.certified
    # the gain must stabilize every sampled member
    for member in xlqr.sample_boundary(region, 64, seed=7):
        assert xlqr.is_stabilizing(cert.K, member)


def test_robust_lqr_matches_nominal_on_tight_region():
    region = small_region(scale=1e9)
    q = np.eye(1)
    cert = xlqr.robust_lqr(region, q, q, sigma_w_sq=1.0)
    assert cert.status == "optimal"
    sys = xlqr.LinearSystem(A=np.array([[1.5]]), B=np.array([[1.8]]))
    sol = xlqr.solve_dare(sys, q, q)
    assert sol is not None
    _, k_star = sol
    assert cert.K[0, 0] == pytest.approx(k_star[0, 0], abs=1e-4)


def test_certificate_maps_round_trip():
    region = small_region()
    cert = xlqr.robust_sls(region)
    lqr_form = xlqr.sls_to_lqr_solution(cert, sigma_w_sq=1.0)
    assert lqr_form.Sigma.shape == (2, 2)
    u_mat, s = xlqr.lqr_to_sls_solution(lqr_form.Sigma, lqr_form.t, 1.0)
    assert 0.0 <= s < 1.0
    assert s == pytest.approx(cert.t, abs=1e-8)
    assert u_mat.shape == (2, 2)


def test_strong_stability_invariants():
    region = small_region()
    cert = xlqr.robust_lqr(region, np.eye(1), np.eye(1), sigma_w_sq=1.0)
    ss = xlqr.strong_stability(cert, sigma_w_sq=1.0)
    assert ss.kappa >= 1.0
    assert 0.0 < ss.gamma <= 0.5
    assert np.linalg.norm(ss.L, 2) <= 1.0 - ss.gamma + 1e-8


def test_exploration_terminates_on_scalar_plant():
    sys = xlqr.LinearSystem(A=np.array([[1.5]]), B=np.array([[1.8]]))
    log = xlqr.run_exploration(
        sys,
        np.eye(1),
        np.eye(1),
        sigma_w_sq=1.0,
        sigma_u_sq=1.0,
        seed=3,
        policy="vanilla",
        delta=0.1,
        lambda_=0.25,
    )
    assert log.outcome == "certified"
    assert log.termination_step <= 50
    assert xlqr.is_stabilizing(log.certificate.K, sys)
    assert log.total_cost > 0.0


def test_feasibility_diagnostic_scalar_example():
    sys = xlqr.LinearSystem(A=np.array([[1.5]]), B=np.array([[1.8]]))
    diag = xlqr.feasibility_diagnostic(sys, np.array([[-5.0 / 6.0]]), small_region())
    assert diag.lhs == pytest.approx(19.6066, rel=1e-3)
    assert diag.predicted_feasible == (diag.lhs <= diag.rhs)
