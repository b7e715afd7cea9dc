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

#ifndef XLQR_LQR_NOMINAL_HPP
#define XLQR_LQR_NOMINAL_HPP

#include <optional>

#include "xlqr/sim.hpp"
#include "xlqr/sysid.hpp"

namespace xlqr {

struct RiccatiSolution {
  Matrix P;
  Matrix K_star;
  int iterations = 0;
  double residual = 0.0;
};

/// Fixed-point iteration P <- Q + A^T P A - A^T P B (R + B^T P B)^{-1} B^T P A
/// from P_0 = Q. Returns nothing if the iteration diverges
/// (||P||_F > 1e12) or max_iter is exhausted before residual < tol.
std::optional<RiccatiSolution> solve_dare(const LinearSystem& sys,
                                          const CostModel& cost,
                                          double tol = 1e-12,
                                          int max_iter = 100000);

/// Infinite-horizon average cost sigma_w^2 Tr(P_K) of u = K x, where P_K
/// solves P_K = Q + K^T R K + (A+BK)^T P_K (A+BK). Empty when the closed
/// loop is not Schur stable.
std::optional<double> controller_cost(const LinearSystem& sys,
                                      const CostModel& cost, const Matrix& K,
                                      double sigma_w_sq);

/// Certainty-equivalent controller: DARE gain computed on the region's
/// center estimates. Empty when the DARE diverges.
std::optional<Matrix> cec_controller(const EllipsoidRegion& region,
                                     const CostModel& cost);

struct NominalSdpResult {
  Matrix Sigma;      // joint second moment, (dx+du) x (dx+du)
  Matrix K;          // Sigma_ux Sigma_xx^{-1}
  double objective;  // Tr(blkdiag(Q, R) Sigma)
  double tightness;  // max-abs eigenvalue of the covariance-constraint slack
};

/// Covariance-form LQR as a semidefinite program:
///   minimize Tr(blkdiag(Q,R) Sigma)
///   s.t. Sigma >= 0, Sigma_xx >= (A B) Sigma (A B)^T + sigma_w^2 I.
/// Throws on infeasibility (non-stabilizable input).
NominalSdpResult nominal_lqr_sdp(const LinearSystem& sys, const CostModel& cost,
                                 double sigma_w_sq);

/// Discrete Lyapunov solve X = F X F^T + W by Kronecker vectorization.
/// Empty when rho(F) >= 1.
std::optional<Matrix> solve_discrete_lyapunov(const Matrix& F, const Matrix& W);

}  // namespace xlqr

#endif  // XLQR_LQR_NOMINAL_HPP
