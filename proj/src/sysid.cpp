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

#include "xlqr/sysid.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace xlqr {

void absorb(GramianAccumulator& acc, const Vector& x, const Vector& u,
            const Vector& x_next) {
  if (x.size() != acc.dx() || u.size() != acc.du() ||
      x_next.size() != acc.dx()) {
    throw std::invalid_argument("absorb: dimension mismatch");
  }
  Vector z(x.size() + u.size());
  z << x, u;
  acc.V.noalias() += z * z.transpose();
  acc.M.noalias() += z * x_next.transpose();
  acc.n_samples += 1;
}

void absorb_trajectory(GramianAccumulator& acc, const Trajectory& traj) {
  for (int t = 0; t < traj.length(); ++t) {
    absorb(acc, traj.states[t], traj.inputs[t], traj.states[t + 1]);
  }
}

std::pair<Matrix, Matrix> rls_estimate(const GramianAccumulator& acc) {
  const int k = acc.dx() + acc.du();
  const Matrix Vreg = acc.V + acc.lambda * Matrix::Identity(k, k);
  // (A_hat B_hat)^T = Vreg^{-1} M, solved via LDLT (Vreg is PD).
  const Matrix theta_T = Vreg.ldlt().solve(acc.M);
  const Matrix theta = theta_T.transpose();  // dx x (dx+du)
  return {theta.leftCols(acc.dx()), theta.rightCols(acc.du())};
}

double chi2_quantile(int dof, double delta) {
  if (dof < 1) throw std::invalid_argument("chi2_quantile: dof must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("chi2_quantile: delta must be in (0, 1)");
  }
  const double a = 0.5 * dof;
  const double target = 1.0 - delta;  // CDF value at the quantile
  auto cdf = [&](double x) { return boost::math::gamma_p(a, 0.5 * x); };
  double lo = 0.0, hi = std::max(1.0, static_cast<double>(dof));
  while (cdf(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-10 * hi) break;
  }
  return 0.5 * (lo + hi);
}

EllipsoidRegion credibility_region(const GramianAccumulator& acc,
                                   const NoiseModel& noise, double delta) {
  const int k = acc.dx() + acc.du();
  EllipsoidRegion region;
  auto [A_hat, B_hat] = rls_estimate(acc);
  region.A_hat = A_hat;
  region.B_hat = B_hat;
  region.delta = delta;
  region.c_delta = chi2_quantile(acc.dx() * k, delta);
  region.D = (acc.V + acc.lambda * Matrix::Identity(k, k)) /
             (region.c_delta * noise.sigma_w_sq);
  return region;
}

bool region_contains(const EllipsoidRegion& region, const LinearSystem& sys,
                     double tol) {
  if (sys.dx() != region.dx() || sys.du() != region.du()) {
    throw std::invalid_argument("region_contains: dimension mismatch");
  }
  const int dx = region.dx(), du = region.du();
  Matrix diff(dx, dx + du);  // (A B) - (A_hat B_hat)
  diff << sys.A - region.A_hat, sys.B - region.B_hat;
  const Matrix Delta = diff.transpose();
  const double m =
      max_eigenvalue_sym(symmetrize(Delta.transpose() * region.D * Delta));
  return m <= 1.0 + tol;
}

EllipsoidRegion ball_region_from(const EllipsoidRegion& region) {
  EllipsoidRegion ball = region;
  const double dmin = min_eigenvalue_sym(region.D);
  if (dmin <= 0.0) {
    throw std::invalid_argument("ball_region_from: D must be positive definite");
  }
  ball.D = dmin * Matrix::Identity(region.D.rows(), region.D.cols());
  return ball;
}

double lambda_heuristic(double C, int dx, int du, double sigma_w_sq) {
  if (C <= 0.0) throw std::invalid_argument("lambda_heuristic: C must be > 0");
  const double n = static_cast<double>(dx) * (dx + du);
  return 2.0 * sigma_w_sq * boost::math::tgamma(0.5 * n + 1.0) / (C * C);
}

Matrix inverse_sqrt_psd(const Matrix& D) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(D));
  Vector ev = es.eigenvalues().cwiseMax(1e-12);
  return es.eigenvectors() * ev.cwiseInverse().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

namespace {

std::vector<LinearSystem> sample_members(const EllipsoidRegion& region,
                                         int count, GaussianSampler& rng,
                                         bool interior) {
  if (count < 1) {
    throw std::invalid_argument("sample_members: count must be >= 1");
  }
  const int dx = region.dx(), k = dx + region.du();
  const Matrix Dinv_half = inverse_sqrt_psd(region.D);
  std::vector<LinearSystem> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    // Haar-random partial isometry: every singular value is exactly 1, so
    // samples sit on the membership shell in all directions at once.
    Matrix G = rng.normal_matrix(k, dx);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix W = qr.householderQ() * Matrix::Identity(k, dx);
    const Matrix R = qr.matrixQR().topRows(dx).triangularView<Eigen::Upper>();
    for (int j = 0; j < dx; ++j) {
      if (R(j, j) < 0.0) W.col(j) = -W.col(j);
    }
    if (interior) W *= rng.uniform01();
    const Matrix Delta = Dinv_half * W;
    const Matrix AB_shift = Delta.transpose();  // dx x k
    LinearSystem sys;
    sys.A = region.A_hat + AB_shift.leftCols(dx);
    sys.B = region.B_hat + AB_shift.rightCols(region.du());
    out.push_back(std::move(sys));
  }
  return out;
}

}  // namespace

std::vector<LinearSystem> sample_boundary(const EllipsoidRegion& region,
                                          int count, GaussianSampler& rng) {
  return sample_members(region, count, rng, /*interior=*/false);
}

std::vector<LinearSystem> sample_interior(const EllipsoidRegion& region,
                                          int count, GaussianSampler& rng) {
  return sample_members(region, count, rng, /*interior=*/true);
}

}  // namespace xlqr
