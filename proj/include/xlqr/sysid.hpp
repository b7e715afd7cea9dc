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

#ifndef XLQR_SYSID_HPP
#define XLQR_SYSID_HPP

#include <utility>
#include <vector>

#include "xlqr/rng.hpp"
#include "xlqr/sim.hpp"

namespace xlqr {

/// Running sums for regularized least squares over transitions
/// (x, u) -> x_next with z = (x^T u^T)^T.
struct GramianAccumulator {
  Matrix V;        // sum of z z^T, (dx+du) x (dx+du)
  Matrix M;        // sum of z x_next^T, (dx+du) x dx
  double lambda;   // ridge weight, > 0
  long n_samples = 0;

  GramianAccumulator(int dx, int du, double lambda_in)
      : V(Matrix::Zero(dx + du, dx + du)),
        M(Matrix::Zero(dx + du, dx)),
        lambda(lambda_in) {}

  int dx() const { return static_cast<int>(M.cols()); }
  int du() const { return static_cast<int>(M.rows() - M.cols()); }
};

/// Ellipsoidal credibility region: (A,B) is a member iff
/// max-eig(Delta^T D Delta) <= 1 with Delta^T = (A B) - (A_hat B_hat).
struct EllipsoidRegion {
  Matrix A_hat;
  Matrix B_hat;
  Matrix D;  // (dx+du) x (dx+du), positive definite
  double delta = 0.0;
  double c_delta = 0.0;

  int dx() const { return static_cast<int>(A_hat.rows()); }
  int du() const { return static_cast<int>(B_hat.cols()); }
  LinearSystem center() const { return LinearSystem{A_hat, B_hat}; }
};

/// Adds one transition to the running sums.
void absorb(GramianAccumulator& acc, const Vector& x, const Vector& u,
            const Vector& x_next);

/// Absorbs every transition of a trajectory.
void absorb_trajectory(GramianAccumulator& acc, const Trajectory& traj);

/// MAP / ridge estimate (A_hat B_hat) = M^T (V + lambda I)^{-1}.
std::pair<Matrix, Matrix> rls_estimate(const GramianAccumulator& acc);

/// c such that P(Z > c) = delta for Z ~ chi-square with `dof` degrees of
/// freedom. Bisection on the regularized incomplete gamma function,
/// 1e-10 relative.
double chi2_quantile(int dof, double delta);

/// Posterior credibility region: estimates from rls_estimate and
/// D = (V + lambda I) / (c_delta sigma_w^2), dof = dx (dx + du).
EllipsoidRegion credibility_region(const GramianAccumulator& acc,
                                   const NoiseModel& noise, double delta);

/// Membership with tolerance: max-eig(Delta^T D Delta) <= 1 + tol.
bool region_contains(const EllipsoidRegion& region, const LinearSystem& sys,
                     double tol = 1e-9);

/// Circumscribed spectral-norm ball: same center, D' = lambda_min(D) I.
EllipsoidRegion ball_region_from(const EllipsoidRegion& region);

/// lambda = 2 sigma_w^2 Gamma(n/2 + 1) / C^2 with n = dx (dx + du).
/// Gamma via the Lanczos-series implementation in boost::math::tgamma.
double lambda_heuristic(double C, int dx, int du, double sigma_w_sq);

/// Systems on the region boundary: (A B) = (A_hat B_hat) + Delta^T with
/// Delta = D^{-1/2} W and W Gaussian, normalized to unit spectral norm.
std::vector<LinearSystem> sample_boundary(const EllipsoidRegion& region,
                                          int count, GaussianSampler& rng);

/// Like sample_boundary but the membership value is scaled by a uniform
/// factor in (0, 1), yielding strict-interior systems.
std::vector<LinearSystem> sample_interior(const EllipsoidRegion& region,
                                          int count, GaussianSampler& rng);

/// Symmetric inverse square root with eigenvalue floor 1e-12.
Matrix inverse_sqrt_psd(const Matrix& D);

}  // namespace xlqr

#endif  // XLQR_SYSID_HPP
