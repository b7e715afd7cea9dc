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

#ifndef XLQR_LIN_CORE_HPP
#define XLQR_LIN_CORE_HPP

#include <Eigen/Dense>

namespace xlqr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Discrete-time linear system x_{t+1} = A x_t + B u_t + w_t.
struct LinearSystem {
  Matrix A;
  Matrix B;

  int dx() const { return static_cast<int>(A.rows()); }
  int du() const { return static_cast<int>(B.cols()); }
};

/// Largest eigenvalue magnitude of a square matrix.
double spectral_radius(const Matrix& M);

/// Peak gain of the resolvent (zI - M)^{-1} over the unit circle,
/// evaluated on a uniform angular grid that always contains z = 1.
/// Throws std::invalid_argument if M is not Schur stable or not square.
double hinf_resolvent_norm(const Matrix& M, int grid_points = 2048);

/// Smallest eigenvalue of a symmetric matrix. Rejects inputs whose
/// asymmetry exceeds 1e-9 * (1 + max |entry|).
double min_eigenvalue_sym(const Matrix& M);

/// Largest eigenvalue of a symmetric matrix, same symmetry contract.
double max_eigenvalue_sym(const Matrix& M);

/// True when rho(A + B K) < 1 - margin.
bool is_stabilizing(const Matrix& K, const LinearSystem& sys,
                    double margin = 1e-9);

/// (M + M^T) / 2.
Matrix symmetrize(const Matrix& M);

}  // namespace xlqr

#endif  // XLQR_LIN_CORE_HPP
