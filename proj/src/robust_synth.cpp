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

#include "xlqr/robust_synth.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "xlqr/json_io.hpp"
#include "xlqr/rng.hpp"

namespace xlqr {

namespace {

// Margin used to realize the strict inequalities (X > 0, t in the open unit
// interval) as closed constraints.
constexpr double kMu = 1e-6;

// Fixed seed for the mandatory post-solve member check, so synthesis is
// deterministic.
constexpr std::uint64_t kVerifySeed = 0x9c0ffee5u;
constexpr int kVerifyBoundary = 128;
constexpr int kVerifyInterior = 32;

void check_region(const EllipsoidRegion& region) {
  const int k = region.dx() + region.du();
  if (region.A_hat.rows() != region.A_hat.cols() ||
      region.B_hat.rows() != region.A_hat.rows()) {
    throw std::invalid_argument("robust_synth: malformed region center");
  }
  if (region.D.rows() != k || region.D.cols() != k) {
    throw std::invalid_argument("robust_synth: D must be (dx+du) square");
  }
  if (min_eigenvalue_sym(region.D) <= 0.0) {
    throw std::invalid_argument("robust_synth: D must be positive definite");
  }
}

// Samples boundary and interior members plus the center and counts systems
// the gain fails to stabilize.
bool verify_stabilizes_region(const EllipsoidRegion& region, const Matrix& K,
                              int* checked, int* violations) {
  GaussianSampler rng(kVerifySeed);
  std::vector<LinearSystem> members = sample_boundary(region, kVerifyBoundary, rng);
  std::vector<LinearSystem> inner = sample_interior(region, kVerifyInterior, rng);
  members.insert(members.end(), inner.begin(), inner.end());
  members.push_back(region.center());
  int bad = 0;
  for (const LinearSystem& sys : members) {
    if (!is_stabilizing(K, sys, 0.0)) ++bad;
  }
  *checked = static_cast<int>(members.size());
  *violations = bad;
  return bad == 0;
}

// Checks ||A + B K||_2 <= t on boundary members and the center.
bool verify_norm_bound(const EllipsoidRegion& region, const Matrix& K,
                       double t, int* checked, int* violations) {
  GaussianSampler rng(kVerifySeed);
  std::vector<LinearSystem> members = sample_boundary(region, kVerifyBoundary, rng);
  members.push_back(region.center());
  const double tol = 1e-6 * std::max(1.0, t);
  int bad = 0;
  for (const LinearSystem& sys : members) {
    if (spectral_norm(sys.A + sys.B * K) > t + tol) ++bad;
  }
  *checked = static_cast<int>(members.size());
  *violations = bad;
  return bad == 0;
}

// Shared assembly and extraction for the feasibility form and its
// relaxation; they differ only in the domain of t and the objective.
SynthesisCertificate solve_sls_form(const EllipsoidRegion& region,
                                    bool relaxed, const SolveOptions& opts) {
  check_region(region);
  const int dx = region.dx();
  const int du = region.du();
  const int k = dx + du;
  const Matrix I_dx = Matrix::Identity(dx, dx);
  const Matrix I_du = Matrix::Identity(du, du);

  LmiProblem prob;
  VarRef X = prob.add_symmetric("X", dx);
  VarRef S = prob.add_rectangular("S", du, dx);
  VarRef t = relaxed ? prob.add_scalar("t", 0.0)
                     : prob.add_scalar("t", kMu, 1.0 - kMu);

  int blk = prob.add_block(2 * dx + k);
  prob.add_term(blk, X, I_dx, I_dx, 0, 0);
  prob.add_constant(blk, -I_dx, 0, 0);
  prob.add_term(blk, X, region.A_hat, I_dx, 0, dx);
  prob.add_term(blk, S, region.B_hat, I_dx, 0, dx);
  prob.add_term(blk, X, I_dx, I_dx, dx, dx);
  prob.add_term(blk, X, I_dx, I_dx, dx, 2 * dx);
  prob.add_term(blk, S, I_dx, I_du, dx, 2 * dx + dx, true);
  prob.add_scalar_term(blk, t, region.D, 2 * dx, 2 * dx);

  int floor_blk = prob.add_block(dx);
  prob.add_term(floor_blk, X, I_dx, I_dx);
  prob.add_constant(floor_blk, -kMu * I_dx);

  if (relaxed) prob.add_objective(t, 1.0);

  LmiSolution sol = prob.solve(opts);

  SynthesisCertificate cert;
  cert.method = relaxed ? "relaxed_sls" : "robust_sls";
  cert.region = region;
  cert.status = sol.status;
  cert.marginal = sol.marginal;
  cert.objective = sol.objective;
  cert.note = sol.note;
  if (relaxed && sol.status == SolveStatus::Infeasible) {
    cert.status = SolveStatus::NumericalFailure;
    cert.note = "relaxation reported infeasible";
    return cert;
  }
  if (sol.status != SolveStatus::Optimal) return cert;

  cert.X = sol.value("X");
  cert.S = sol.value("S");
  cert.t = sol.scalar("t");
  Eigen::LDLT<Matrix> ldlt(cert.X);
  if (ldlt.info() != Eigen::Success) {
    cert.status = SolveStatus::NumericalFailure;
    cert.note = "gain recovery: factorization of X failed";
    return cert;
  }
  cert.K = ldlt.solve(cert.S.transpose()).transpose();

  EllipsoidRegion covered = region;
  if (relaxed && cert.t >= 1.0) covered.D = (cert.t * region.D).eval();
  if (!verify_stabilizes_region(covered, cert.K, &cert.members_checked,
                                &cert.member_violations)) {
    cert.status = SolveStatus::NumericalFailure;
    cert.note = "member stabilization check failed";
    return cert;
  }
  cert.certified = !relaxed || cert.t < 1.0;
  return cert;
}

// K fixed => constant blocks; K free => rectangular variable.
SynthesisCertificate solve_norm_form(const EllipsoidRegion& region,
                                     const Matrix* K_fixed,
                                     const SolveOptions& opts) {
  check_region(region);
  const int dx = region.dx();
  const int du = region.du();
  const int k = dx + du;
  const Matrix I_dx = Matrix::Identity(dx, dx);
  const Matrix I_du = Matrix::Identity(du, du);

  LmiProblem prob;
  VarRef t = prob.add_scalar("t", 0.0);
  VarRef lam = prob.add_scalar("lambda", 0.0);
  VarRef K;
  if (K_fixed == nullptr) K = prob.add_rectangular("K", du, dx);

  int blk = prob.add_block(2 * dx + k);
  prob.add_scalar_term(blk, t, I_dx, 0, 0);
  if (K_fixed == nullptr) {
    prob.add_constant(blk, region.A_hat, dx, 0);
    prob.add_term(blk, K, region.B_hat, I_dx, dx, 0);
    prob.add_constant(blk, I_dx, 2 * dx, 0);
    prob.add_term(blk, K, I_du, I_dx, 2 * dx + dx, 0);
  } else {
    prob.add_constant(blk, region.A_hat + region.B_hat * *K_fixed, dx, 0);
    prob.add_constant(blk, I_dx, 2 * dx, 0);
    prob.add_constant(blk, *K_fixed, 2 * dx + dx, 0);
  }
  prob.add_scalar_term(blk, t, I_dx, dx, dx);
  prob.add_scalar_term(blk, lam, -I_dx, dx, dx);
  prob.add_scalar_term(blk, lam, region.D, 2 * dx, 2 * dx);
  prob.add_objective(t, 1.0);

  LmiSolution sol = prob.solve(opts);

  SynthesisCertificate cert;
  cert.method = "minmax";
  cert.region = region;
  cert.status = sol.status;
  cert.marginal = sol.marginal;
  cert.objective = sol.objective;
  cert.note = sol.note;
  if (sol.status == SolveStatus::Infeasible) {
    // Large t and lambda always admit a solution; blame numerics.
    cert.status = SolveStatus::NumericalFailure;
    cert.note = "norm-bound program reported infeasible";
    return cert;
  }
  if (sol.status != SolveStatus::Optimal) return cert;

  cert.t = sol.scalar("t");
  cert.K = (K_fixed == nullptr) ? sol.value("K") : *K_fixed;
  if (!verify_norm_bound(region, cert.K, cert.t, &cert.members_checked,
                         &cert.member_violations)) {
    cert.status = SolveStatus::NumericalFailure;
    cert.note = "member norm-bound check failed";
    return cert;
  }
  cert.certified = true;
  return cert;
}

}  // namespace

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

SynthesisCertificate robust_sls(const EllipsoidRegion& region,
                                const SolveOptions& opts) {
  return solve_sls_form(region, false, opts);
}

SynthesisCertificate relaxed_sls(const EllipsoidRegion& region,
                                 const SolveOptions& opts) {
  return solve_sls_form(region, true, opts);
}

SynthesisCertificate robust_lqr(const EllipsoidRegion& region,
                                const CostModel& cost, double sigma_w_sq,
                                const SolveOptions& opts) {
  check_region(region);
  const int dx = region.dx();
  const int du = region.du();
  const int k = dx + du;
  if (cost.Q.rows() != dx || cost.Q.cols() != dx || cost.R.rows() != du ||
      cost.R.cols() != du) {
    throw std::invalid_argument("robust_lqr: cost dimensions mismatch");
  }
  if (min_eigenvalue_sym(cost.Q) <= 0.0 || min_eigenvalue_sym(cost.R) <= 0.0) {
    throw std::invalid_argument("robust_lqr: Q and R must be positive definite");
  }
  if (sigma_w_sq <= 0.0) {
    throw std::invalid_argument("robust_lqr: sigma_w_sq must be positive");
  }
  const Matrix I_dx = Matrix::Identity(dx, dx);
  const Matrix I_k = Matrix::Identity(k, k);
  Matrix AB(dx, k);
  AB << region.A_hat, region.B_hat;
  Matrix Ex = Matrix::Zero(dx, k);
  Ex.leftCols(dx) = I_dx;

  // Substitute ts = dmax * t so the solver sees O(1) coefficients and an
  // O(1) optimum even when D carries a large scale.
  const double dmax = max_eigenvalue_sym(region.D);
  const Matrix D0 = region.D / dmax;

  LmiProblem prob;
  VarRef Sg = prob.add_symmetric("Sigma", k);
  VarRef t = prob.add_scalar("t", 0.0);

  int blk = prob.add_block(dx + k);
  prob.add_term(blk, Sg, Ex, Ex.transpose(), 0, 0);
  prob.add_term(blk, Sg, -AB, AB.transpose(), 0, 0);
  prob.add_scalar_term(blk, t, -(1.0 / dmax) * I_dx, 0, 0);
  prob.add_constant(blk, -sigma_w_sq * I_dx, 0, 0);
  prob.add_term(blk, Sg, AB, I_k, 0, dx);
  prob.add_scalar_term(blk, t, D0, dx, dx);
  prob.add_term(blk, Sg, -I_k, I_k, dx, dx);

  int psd_blk = prob.add_block(k);
  prob.add_term(psd_blk, Sg, I_k, I_k);

  Matrix W = Matrix::Zero(k, k);
  W.topLeftCorner(dx, dx) = cost.Q;
  W.bottomRightCorner(du, du) = cost.R;
  prob.add_objective(Sg, W);

  LmiSolution sol = prob.solve(opts);

  SynthesisCertificate cert;
  cert.method = "robust_lqr";
  cert.region = region;
  cert.status = sol.status;
  cert.marginal = sol.marginal;
  cert.objective = sol.objective;
  cert.note = sol.note;
  if (sol.status != SolveStatus::Optimal) return cert;

  cert.Sigma = sol.value("Sigma");
  cert.t = sol.scalar("t") / dmax;
  Matrix Sxx = cert.Sigma.topLeftCorner(dx, dx);
  Matrix Sxu = cert.Sigma.topRightCorner(dx, du);
  Eigen::LDLT<Matrix> ldlt(Sxx);
  if (ldlt.info() != Eigen::Success) {
    cert.status = SolveStatus::NumericalFailure;
    cert.note = "gain recovery: factorization of Sigma_xx failed";
    return cert;
  }
  cert.K = ldlt.solve(Sxu).transpose();

  if (!verify_stabilizes_region(region, cert.K, &cert.members_checked,
                                &cert.member_violations)) {
    cert.status = SolveStatus::NumericalFailure;
    cert.note = "member stabilization check failed";
    return cert;
  }
  cert.certified = true;
  return cert;
}

SynthesisCertificate minmax_controller(const EllipsoidRegion& region,
                                       const SolveOptions& opts) {
  return solve_norm_form(region, nullptr, opts);
}

double bound_controller_norm(const EllipsoidRegion& region, const Matrix& K,
                             const SolveOptions& opts) {
  if (K.rows() != region.du() || K.cols() != region.dx()) {
    throw std::invalid_argument("bound_controller_norm: K dimensions mismatch");
  }
  SynthesisCertificate cert = solve_norm_form(region, &K, opts);
  if (cert.status != SolveStatus::Optimal) {
    throw std::runtime_error("bound_controller_norm: " +
                             std::string(to_string(cert.status)) +
                             (cert.note.empty() ? "" : " (" + cert.note + ")"));
  }
  return cert.t;
}

double lqr_lmi_min_eig(const EllipsoidRegion& region, const Matrix& Sigma,
                       double t, double sigma_w_sq) {
  const int dx = region.dx();
  const int k = dx + region.du();
  Matrix AB(dx, k);
  AB << region.A_hat, region.B_hat;
  Matrix M = Matrix::Zero(dx + k, dx + k);
  M.topLeftCorner(dx, dx) = Sigma.topLeftCorner(dx, dx) -
                            AB * Sigma * AB.transpose() -
                            (t + sigma_w_sq) * Matrix::Identity(dx, dx);
  M.topRightCorner(dx, k) = AB * Sigma;
  M.bottomLeftCorner(k, dx) = Sigma * AB.transpose();
  M.bottomRightCorner(k, k) = t * region.D - Sigma;
  return min_eigenvalue_sym(symmetrize(M));
}

double sls_u_lmi_min_eig(const EllipsoidRegion& region, const Matrix& U,
                         double s) {
  const int dx = region.dx();
  const int k = dx + region.du();
  Matrix AB(dx, k);
  AB << region.A_hat, region.B_hat;
  Matrix M = Matrix::Zero(dx + k, dx + k);
  M.topLeftCorner(dx, dx) = U.topLeftCorner(dx, dx) -
                            AB * U * AB.transpose() -
                            Matrix::Identity(dx, dx);
  M.topRightCorner(dx, k) = AB * U;
  M.bottomLeftCorner(k, dx) = U * AB.transpose();
  M.bottomRightCorner(k, k) = s * region.D - U;
  return min_eigenvalue_sym(symmetrize(M));
}

SynthesisCertificate sls_to_lqr_solution(const SynthesisCertificate& cert,
                                         double sigma_w_sq) {
  if (cert.X.size() == 0 || cert.S.size() == 0) {
    throw std::invalid_argument(
        "sls_to_lqr_solution: certificate lacks feasibility-form variables");
  }
  const double s = cert.t;
  if (s < 0.0 || s >= 1.0) {
    throw std::invalid_argument("sls_to_lqr_solution: requires s in [0, 1)");
  }
  if (sigma_w_sq <= 0.0) {
    throw std::invalid_argument("sls_to_lqr_solution: sigma_w_sq must be positive");
  }
  const int dx = static_cast<int>(cert.X.rows());
  const int du = static_cast<int>(cert.S.rows());
  Matrix IK(dx + du, dx);
  IK << Matrix::Identity(dx, dx), cert.K;
  Matrix U = IK * cert.X * IK.transpose();
  const double scale = sigma_w_sq / (1.0 - s);

  SynthesisCertificate out = cert;
  out.method = "robust_lqr";
  out.X = Matrix();
  out.S = Matrix();
  out.Sigma = symmetrize(scale * U);
  out.t = s * scale;
  out.objective = 0.0;
  out.note = "converted from " + cert.method;

  const double eig = lqr_lmi_min_eig(cert.region, out.Sigma, out.t, sigma_w_sq);
  Matrix check = out.Sigma;  // scale reference for the tolerance
  const double span = std::max(1.0, check.cwiseAbs().maxCoeff());
  if (eig < -1e-6 * span) {
    throw std::runtime_error("sls_to_lqr_solution: transformed pair fails the cost-form block");
  }
  return out;
}

std::pair<Matrix, double> lqr_to_sls_solution(const Matrix& Sigma, double t,
                                              double sigma_w_sq) {
  if (t < 0.0) {
    throw std::invalid_argument("lqr_to_sls_solution: requires t >= 0");
  }
  if (sigma_w_sq <= 0.0) {
    throw std::invalid_argument("lqr_to_sls_solution: sigma_w_sq must be positive");
  }
  const double denom = t + sigma_w_sq;
  return {Sigma / denom, t / denom};
}

StrongStability strong_stability(const SynthesisCertificate& cert,
                                 double sigma_w_sq) {
  if (cert.Sigma.size() == 0) {
    throw std::invalid_argument("strong_stability: certificate lacks Sigma");
  }
  if (sigma_w_sq <= 0.0) {
    throw std::invalid_argument("strong_stability: sigma_w_sq must be positive");
  }
  const int dx = cert.region.dx();
  Matrix Sxx = symmetrize(cert.Sigma.topLeftCorner(dx, dx));
  Eigen::SelfAdjointEigenSolver<Matrix> es(Sxx);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("strong_stability: eigendecomposition failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 1e-12 * std::max(1.0, hi)) {
    throw std::runtime_error("strong_stability: Sigma_xx is singular");
  }

  StrongStability out;
  out.kappa = std::sqrt(cert.Sigma.trace() / sigma_w_sq);
  out.gamma = 1.0 / (2.0 * out.kappa * out.kappa);
  out.H = es.operatorSqrt();
  Matrix Hinv = es.operatorInverseSqrt();
  Matrix Acl = cert.region.A_hat + cert.region.B_hat * cert.K;
  out.L = Hinv * Acl * out.H;

  const double recon = (out.H * out.L * Hinv - Acl).norm();
  if (recon > 1e-6 * (1.0 + Acl.norm())) {
    throw std::runtime_error("strong_stability: similarity reconstruction failed");
  }
  return out;
}

FeasibilityDiagnostic feasibility_diagnostic(const LinearSystem& sys,
                                             const Matrix& K,
                                             const EllipsoidRegion& region) {
  if (K.rows() != sys.du() || K.cols() != sys.dx()) {
    throw std::invalid_argument("feasibility_diagnostic: K dimensions mismatch");
  }
  Matrix Acl = sys.A + sys.B * K;
  if (spectral_radius(Acl) >= 1.0) {
    throw std::invalid_argument("feasibility_diagnostic: K does not stabilize the system");
  }
  FeasibilityDiagnostic out;
  const double hinf = hinf_resolvent_norm(Acl);
  const double base = (1.0 + std::sqrt(2.0)) * (1.0 + spectral_norm(K)) * hinf;
  out.lhs = base * base;
  out.rhs = min_eigenvalue_sym(region.D);
  out.predicted_feasible = out.lhs <= out.rhs;
  return out;
}

nlohmann::json certificate_to_json(const SynthesisCertificate& cert) {
  nlohmann::json j;
  j["method"] = cert.method;
  j["status"] = to_string(cert.status);
  j["certified"] = cert.certified;
  j["marginal"] = cert.marginal;
  j["objective"] = cert.objective;
  j["t"] = cert.t;
  j["members_checked"] = cert.members_checked;
  j["member_violations"] = cert.member_violations;
  if (!cert.note.empty()) j["note"] = cert.note;
  if (cert.K.size() > 0) j["K"] = matrix_to_json(cert.K);
  if (cert.X.size() > 0) j["X"] = matrix_to_json(cert.X);
  if (cert.S.size() > 0) j["S"] = matrix_to_json(cert.S);
  if (cert.Sigma.size() > 0) j["Sigma"] = matrix_to_json(cert.Sigma);
  return j;
}

}  // namespace xlqr
