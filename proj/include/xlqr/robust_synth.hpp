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

#ifndef XLQR_ROBUST_SYNTH_HPP
#define XLQR_ROBUST_SYNTH_HPP

#include <nlohmann/json.hpp>

#include <string>
#include <utility>

#include "xlqr/lin_core.hpp"
#include "xlqr/sdp_bridge.hpp"
#include "xlqr/sim.hpp"
#include "xlqr/sysid.hpp"

namespace xlqr {

/// Outcome of one robust synthesis over an ellipsoidal region. The gain K is
/// trustworthy only when `certified` is true: the solver succeeded and the
/// mandatory post-solve check over sampled region members passed. For the
/// norm-minimizing method the guarantee checked is the norm bound t rather
/// than stabilization. Raw solver variables are kept so certificates can be
/// transformed and audited: X, S, t for the feasibility form (K = S X^{-1}),
/// Sigma, t for the cost form (K = Sigma_ux Sigma_xx^{-1}).
struct SynthesisCertificate {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::string method;  // robust_sls | robust_lqr | relaxed_sls | minmax
  bool certified = false;
  bool marginal = true;
  Matrix K;
  Matrix X;
  Matrix S;
  Matrix Sigma;
  double t = 0.0;
  double objective = 0.0;
  EllipsoidRegion region;
  int members_checked = 0;
  int member_violations = 0;
  std::string note;
};

/// Strong-stability parameters extracted from a cost-form certificate:
/// kappa >= 1, gamma in (0, 1], and the similarity A_hat + B_hat K =
/// H L H^{-1} with ||L||_2 <= 1 - gamma and ||H|| ||H^{-1}|| <= kappa.
struct StrongStability {
  double kappa = 0.0;
  double gamma = 0.0;
  Matrix H;
  Matrix L;
};

/// Both sides of the sufficient feasibility test
/// ((1+sqrt(2)) (1+||K||_2) sup_{|z|=1} ||(zI-A-BK)^{-1}||)^2 <= lambda_min(D).
/// One-sided: predicted_feasible=true implies the feasibility synthesis
/// succeeds; false implies nothing.
struct FeasibilityDiagnostic {
  double lhs = 0.0;
  double rhs = 0.0;
  bool predicted_feasible = false;
};

/// Feasibility synthesis: a single semidefinite block in (X, S, t) whose
/// solvability certifies that K = S X^{-1} stabilizes every member of the
/// region. Infeasible is a valid outcome (region too large).
SynthesisCertificate robust_sls(const EllipsoidRegion& region,
                                const SolveOptions& opts = {});

/// Cost-form synthesis: minimizes Tr(diag(Q,R) Sigma) subject to the joint
/// covariance block in (Sigma, t); the objective upper-bounds the worst-case
/// infinite-horizon cost over the region. K = Sigma_ux Sigma_xx^{-1}.
SynthesisCertificate robust_lqr(const EllipsoidRegion& region,
                                const CostModel& cost, double sigma_w_sq,
                                const SolveOptions& opts = {});

/// Relaxation of robust_sls with t free above 0 and minimized. Always
/// solvable; certified iff t < 1. A value t >= 1 still certifies the region
/// shrunken to shape matrix t D, and the member check runs against that.
SynthesisCertificate relaxed_sls(const EllipsoidRegion& region,
                                 const SolveOptions& opts = {});

/// Minimizes the worst closed-loop spectral norm over the region: returns K
/// and t with ||A + B K||_2 <= t for every member (A, B).
SynthesisCertificate minmax_controller(const EllipsoidRegion& region,
                                       const SolveOptions& opts = {});

/// Same program with K fixed: the certified bound on max ||A + B K'||_2 over
/// the region. Throws on solver failure.
double bound_controller_norm(const EllipsoidRegion& region, const Matrix& K,
                             const SolveOptions& opts = {});

/// Maps a feasibility-form certificate (X, S, s = t in (0,1)) to the
/// cost-form variables Sigma = sigma_w^2/(1-s) [I;K] X [I;K]^T and
/// t = s sigma_w^2/(1-s), verifying the cost-form block inequality on the
/// certificate's region. Throws when s >= 1 or the check fails.
SynthesisCertificate sls_to_lqr_solution(const SynthesisCertificate& cert,
                                         double sigma_w_sq);

/// Reverse map: U = Sigma/(t + sigma_w^2), s = t/(t + sigma_w^2) in [0, 1).
std::pair<Matrix, double> lqr_to_sls_solution(const Matrix& Sigma, double t,
                                              double sigma_w_sq);

/// Extracts (kappa, gamma, H, L) from a cost-form certificate:
/// kappa = sqrt(Tr(Sigma)/sigma_w^2), gamma = 1/(2 kappa^2),
/// H = Sigma_xx^{1/2}, L = H^{-1}(A_hat + B_hat K) H. Throws when Sigma_xx
/// is singular beyond tolerance or the similarity fails to reconstruct.
StrongStability strong_stability(const SynthesisCertificate& cert,
                                 double sigma_w_sq);

/// Evaluates the sufficient feasibility test for a gain K that stabilizes
/// sys (throws otherwise).
FeasibilityDiagnostic feasibility_diagnostic(const LinearSystem& sys,
                                             const Matrix& K,
                                             const EllipsoidRegion& region);

/// Smallest eigenvalue of the assembled cost-form block at (Sigma, t);
/// nonnegative up to tolerance means the pair is feasible for the region.
double lqr_lmi_min_eig(const EllipsoidRegion& region, const Matrix& Sigma,
                       double t, double sigma_w_sq);

/// Smallest eigenvalue of the normalized-form block at (U, s) used by the
/// equivalence maps.
double sls_u_lmi_min_eig(const EllipsoidRegion& region, const Matrix& U,
                         double s);

/// Largest singular value.
double spectral_norm(const Matrix& M);

nlohmann::json certificate_to_json(const SynthesisCertificate& cert);

}  // namespace xlqr

#endif  // XLQR_ROBUST_SYNTH_HPP
