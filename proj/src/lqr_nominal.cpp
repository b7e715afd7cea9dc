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

#include "xlqr/lqr_nominal.hpp"

#include <stdexcept>

#include "xlqr/sdp_bridge.hpp"

namespace xlqr {

namespace {

Matrix riccati_map(const Matrix& P, const LinearSystem& sys,
                   const CostModel& cost) {
  const Matrix& A = sys.A;
  const Matrix& B = sys.B;
  const Matrix BtPA = B.transpose() * P * A;
  const Matrix gram = cost.R + B.transpose() * P * B;
  return cost.Q + A.transpose() * P * A -
         BtPA.transpose() * gram.ldlt().solve(BtPA);
}

}  // namespace

std::optional<RiccatiSolution> solve_dare(const LinearSystem& sys,
                                          const CostModel& cost, double tol,
                                          int max_iter) {
  Matrix P = cost.Q;
  int it = 0;
  double residual = 0.0;
  for (; it < max_iter; ++it) {
    const Matrix P_next = symmetrize(riccati_map(P, sys, cost));
    residual = (P_next - P).norm();
    P = P_next;
    if (P.norm() > 1e12) return std::nullopt;
    if (residual < tol * (1.0 + P.norm())) break;
  }
  if (it == max_iter) return std::nullopt;
  RiccatiSolution out;
  out.P = P;
  const Matrix gram = cost.R + sys.B.transpose() * P * sys.B;
  out.K_star = -gram.ldlt().solve(sys.B.transpose() * P * sys.A);
  out.iterations = it + 1;
  out.residual = (P - riccati_map(P, sys, cost)).norm();
  return out;
}

std::optional<Matrix> solve_discrete_lyapunov(const Matrix& F,
                                              const Matrix& W) {
  if (spectral_radius(F) >= 1.0) return std::nullopt;
  const int n = static_cast<int>(F.rows());
  // vec(F X F^T) = (F (x) F) vec(X), so (I - F (x) F) vec(X) = vec(W).
  Matrix M = Matrix::Identity(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M.block(i * n, j * n, n, n) -= F(i, j) * F;
  Eigen::Map<const Vector> w(W.data(), n * n);
  Vector x = M.partialPivLu().solve(w);
  Eigen::Map<const Matrix> X(x.data(), n, n);
  return symmetrize(X);
}

std::optional<double> controller_cost(const LinearSystem& sys,
                                      const CostModel& cost, const Matrix& K,
                                      double sigma_w_sq) {
  const Matrix F = sys.A + sys.B * K;
  const Matrix W = cost.Q + K.transpose() * cost.R * K;
  // P_K = W + F^T P_K F, i.e. Lyapunov in F^T.
  auto P = solve_discrete_lyapunov(F.transpose(), W);
  if (!P) return std::nullopt;
  return sigma_w_sq * P->trace();
}

std::optional<Matrix> cec_controller(const EllipsoidRegion& region,
                                     const CostModel& cost) {
  auto sol = solve_dare(region.center(), cost);
  if (!sol) return std::nullopt;
  return sol->K_star;
}

NominalSdpResult nominal_lqr_sdp(const LinearSystem& sys, const CostModel& cost,
                                 double sigma_w_sq) {
  const int dx = sys.dx(), du = sys.du(), k = dx + du;
  Matrix AB(dx, k);
  AB << sys.A, sys.B;
  Matrix QR = Matrix::Zero(k, k);
  QR.topLeftCorner(dx, dx) = cost.Q;
  QR.bottomRightCorner(du, du) = cost.R;
  const Matrix Ex = Matrix::Identity(k, k).topRows(dx);  // selects x rows

  LmiProblem prob;
  VarRef Sigma = prob.add_symmetric("Sigma", k);
  prob.add_objective(Sigma, QR);
  const int psd = prob.add_block(k);
  prob.add_term(psd, Sigma, Matrix::Identity(k, k), Matrix::Identity(k, k));
  const int cov = prob.add_block(dx);
  prob.add_term(cov, Sigma, Ex, Ex.transpose());
  prob.add_term(cov, Sigma, -AB, AB.transpose());
  prob.add_constant(cov, -sigma_w_sq * Matrix::Identity(dx, dx));

  LmiSolution sol = prob.solve();
  if (sol.status == SolveStatus::Infeasible) {
    throw std::runtime_error(
        "nominal_lqr_sdp: infeasible (system not stabilizable)");
  }
  if (sol.status != SolveStatus::Optimal) {
    throw std::runtime_error("nominal_lqr_sdp: solver failed: " + sol.note);
  }

  NominalSdpResult out;
  out.Sigma = sol.value("Sigma");
  const Matrix Sxx = out.Sigma.topLeftCorner(dx, dx);
  const Matrix Sux = out.Sigma.bottomLeftCorner(du, dx);
  out.K = Sxx.ldlt().solve(Sux.transpose()).transpose();
  out.objective = sol.objective;
  const Matrix slack =
      Sxx - AB * out.Sigma * AB.transpose() -
      sigma_w_sq * Matrix::Identity(dx, dx);
  out.tightness = slack.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace xlqr
