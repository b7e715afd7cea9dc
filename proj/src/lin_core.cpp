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

#include "xlqr/lin_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace xlqr {

double spectral_radius(const Matrix& M) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument("spectral_radius: matrix must be square");
  }
  if (M.rows() == 0) {
    return 0.0;
  }
  Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hinf_resolvent_norm(const Matrix& M, int grid_points) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument("hinf_resolvent_norm: matrix must be square");
  }
  if (grid_points < 1) {
    throw std::invalid_argument("hinf_resolvent_norm: grid_points must be >= 1");
  }
  if (spectral_radius(M) >= 1.0) {
    throw std::invalid_argument(
        "hinf_resolvent_norm: resolvent is unbounded on the unit circle "
        "for a matrix with spectral radius >= 1");
  }
  const int n = static_cast<int>(M.rows());
  const Eigen::MatrixXcd Mc = M.cast<std::complex<double>>();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  double peak = 0.0;
  for (int k = 0; k < grid_points; ++k) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(k) / grid_points;
    const std::complex<double> z(std::cos(theta), std::sin(theta));
    // sigma_max((zI - M)^{-1}) = 1 / sigma_min(zI - M)
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(z * I - Mc);
    const double smin = svd.singularValues().minCoeff();
    peak = std::max(peak, 1.0 / smin);
  }
  return peak;
}

namespace {

void check_symmetry(const Matrix& M, const char* who) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw std::invalid_argument(std::string(who) +
                                ": matrix is not symmetric within tolerance");
  }
}

}  // namespace

double min_eigenvalue_sym(const Matrix& M) {
  check_symmetry(M, "min_eigenvalue_sym");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue_sym(const Matrix& M) {
  check_symmetry(M, "max_eigenvalue_sym");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool is_stabilizing(const Matrix& K, const LinearSystem& sys, double margin) {
  if (K.rows() != sys.du() || K.cols() != sys.dx()) {
    throw std::invalid_argument("is_stabilizing: K has wrong dimensions");
  }
  return spectral_radius(sys.A + sys.B * K) < 1.0 - margin;
}

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

}  // namespace xlqr
