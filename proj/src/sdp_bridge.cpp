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

// Interior-point solver for linear matrix inequalities.
//
// Problems are lowered to the conic standard form
//     minimize c^T x   s.t.   G x + s = h,  s in K,
// where K is a product of dense positive-semidefinite cones in svec
// coordinates, and solved with a homogeneous self-dual embedding:
// Nesterov-Todd scaling, Mehrotra predictor-corrector, and the reduced
// n-by-n Schur-complement KKT system. The embedding produces either an
// optimal point or a Farkas-type infeasibility certificate; when neither
// reaches tolerance the solve reports a numerical failure.

#include "xlqr/sdp_bridge.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "xlqr/json_io.hpp"

namespace xlqr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

Vector svec(const Matrix& M) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n) throw std::invalid_argument("svec: matrix must be square");
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("svec: matrix is not symmetric");
  }
  Vector v(n * (n + 1) / 2);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    v(k++) = M(j, j);
    for (int i = j + 1; i < n; ++i) v(k++) = kSqrt2 * 0.5 * (M(i, j) + M(j, i));
  }
  return v;
}

Matrix smat(const Vector& v) {
  const long L = v.size();
  const long n = static_cast<long>((std::sqrt(8.0 * L + 1.0) - 1.0) / 2.0 + 0.5);
  if (n * (n + 1) / 2 != L) {
    throw std::invalid_argument("smat: invalid svec length");
  }
  Matrix M(n, n);
  long k = 0;
  for (long j = 0; j < n; ++j) {
    M(j, j) = v(k++);
    for (long i = j + 1; i < n; ++i) {
      M(i, j) = M(j, i) = v(k++) / kSqrt2;
    }
  }
  return M;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    default: return "numerical-failure";
  }
}

const Matrix& LmiSolution::value(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) {
    throw std::out_of_range("LmiSolution: no variable named " + name);
  }
  return it->second;
}

double LmiSolution::scalar(const std::string& name) const {
  const Matrix& m = value(name);
  if (m.size() != 1) {
    throw std::invalid_argument("LmiSolution: " + name + " is not a scalar");
  }
  return m(0, 0);
}

// ---------------------------------------------------------------------------
// Problem construction

const LmiProblem::VarInfo& LmiProblem::check_var(VarRef v) const {
  if (v.id < 0 || v.id >= static_cast<int>(vars_.size())) {
    throw std::invalid_argument("LmiProblem: variable reference is invalid");
  }
  return vars_[v.id];
}

VarRef LmiProblem::add_scalar(const std::string& name, double lower,
                              double upper) {
  VarInfo info{name, VarKind::Scalar, 1, 1, total_size_, 1, lower, upper};
  vars_.push_back(info);
  total_size_ += 1;
  objective_.conservativeResize(total_size_);
  objective_(total_size_ - 1) = 0.0;
  return VarRef{static_cast<int>(vars_.size()) - 1};
}

VarRef LmiProblem::add_symmetric(const std::string& name, int dim) {
  if (dim < 1) throw std::invalid_argument("add_symmetric: dim must be >= 1");
  const int size = dim * (dim + 1) / 2;
  VarInfo info{name, VarKind::Symmetric, dim, dim, total_size_, size, -kInf,
               kInf};
  vars_.push_back(info);
  total_size_ += size;
  objective_.conservativeResize(total_size_);
  objective_.tail(size).setZero();
  return VarRef{static_cast<int>(vars_.size()) - 1};
}

VarRef LmiProblem::add_rectangular(const std::string& name, int rows,
                                   int cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("add_rectangular: dims must be >= 1");
  }
  VarInfo info{name,        VarKind::Rectangular, rows, cols,
               total_size_, rows * cols,          -kInf, kInf};
  vars_.push_back(info);
  total_size_ += rows * cols;
  objective_.conservativeResize(total_size_);
  objective_.tail(rows * cols).setZero();
  return VarRef{static_cast<int>(vars_.size()) - 1};
}

int LmiProblem::add_block(int dim) {
  if (dim < 1) throw std::invalid_argument("add_block: dim must be >= 1");
  block_dims_.push_back(dim);
  return static_cast<int>(block_dims_.size()) - 1;
}

void LmiProblem::check_block_span(int block, int row, int col, int r,
                                  int c) const {
  if (block < 0 || block >= static_cast<int>(block_dims_.size())) {
    throw std::invalid_argument("LmiProblem: bad block id");
  }
  const int n = block_dims_[block];
  if (row < 0 || col < 0 || row + r > n || col + c > n) {
    throw std::invalid_argument("LmiProblem: placement exceeds block bounds");
  }
  if (row == col) {
    if (r != c) {
      throw std::invalid_argument(
          "LmiProblem: diagonal placement must be square");
    }
  } else {
    // mirrored copy occupies [col, col+c) x [row, row+r); forbid overlap
    const bool overlap = (row < col + c) && (col < row + r);
    if (overlap) {
      throw std::invalid_argument(
          "LmiProblem: off-diagonal placement overlaps its mirror");
    }
  }
}

void LmiProblem::add_constant(int block, const Matrix& C, int row, int col) {
  check_block_span(block, row, col, static_cast<int>(C.rows()),
                   static_cast<int>(C.cols()));
  consts_.push_back({block, C, row, col});
}

void LmiProblem::add_term(int block, VarRef v, const Matrix& left,
                          const Matrix& right, int row, int col,
                          bool transpose_var) {
  const VarInfo& info = check_var(v);
  const int vr = transpose_var ? info.cols : info.rows;
  const int vc = transpose_var ? info.rows : info.cols;
  if (left.cols() != vr || right.rows() != vc) {
    throw std::invalid_argument("add_term: factor dimensions do not match " +
                                info.name);
  }
  check_block_span(block, row, col, static_cast<int>(left.rows()),
                   static_cast<int>(right.cols()));
  terms_.push_back({block, v.id, left, right, row, col, transpose_var});
}

void LmiProblem::add_scalar_term(int block, VarRef v, const Matrix& C, int row,
                                 int col) {
  const VarInfo& info = check_var(v);
  if (info.kind != VarKind::Scalar) {
    throw std::invalid_argument("add_scalar_term: " + info.name +
                                " is not scalar");
  }
  check_block_span(block, row, col, static_cast<int>(C.rows()),
                   static_cast<int>(C.cols()));
  terms_.push_back({block, v.id, C, Matrix::Identity(C.cols(), C.cols()), row,
                    col, false});
}

void LmiProblem::add_objective(VarRef v, const Matrix& W) {
  const VarInfo& info = check_var(v);
  switch (info.kind) {
    case VarKind::Scalar:
      if (W.size() != 1) {
        throw std::invalid_argument("add_objective: scalar weight expected");
      }
      objective_(info.offset) += W(0, 0);
      break;
    case VarKind::Symmetric:
      if (W.rows() != info.rows || W.cols() != info.cols) {
        throw std::invalid_argument("add_objective: weight shape mismatch");
      }
      objective_.segment(info.offset, info.size) += svec(symmetrize(W));
      break;
    case VarKind::Rectangular: {
      if (W.rows() != info.rows || W.cols() != info.cols) {
        throw std::invalid_argument("add_objective: weight shape mismatch");
      }
      Eigen::Map<const Vector> w(W.data(), W.size());
      objective_.segment(info.offset, info.size) += w;
      break;
    }
  }
}

void LmiProblem::add_objective(VarRef v, double w) {
  Matrix W(1, 1);
  W << w;
  add_objective(v, W);
}

// ---------------------------------------------------------------------------
// Evaluation at a named assignment (used for solver-independent rechecks)

namespace {

// Adds T at (row, col); mirrors off-diagonal placements, symmetrizes
// diagonal ones.
void place(Matrix& M, const Matrix& T, int row, int col) {
  const int r = static_cast<int>(T.rows()), c = static_cast<int>(T.cols());
  if (row == col) {
    M.block(row, col, r, c) += 0.5 * (T + T.transpose());
  } else {
    M.block(row, col, r, c) += T;
    M.block(col, row, c, r) += T.transpose();
  }
}

}  // namespace

Matrix LmiProblem::eval_block(
    int block, const std::map<std::string, Matrix>& values) const {
  if (block < 0 || block >= static_cast<int>(block_dims_.size())) {
    throw std::invalid_argument("eval_block: bad block id");
  }
  Matrix M = Matrix::Zero(block_dims_[block], block_dims_[block]);
  for (const auto& ct : consts_) {
    if (ct.block == block) place(M, ct.C, ct.row, ct.col);
  }
  for (const auto& t : terms_) {
    if (t.block != block) continue;
    const VarInfo& info = vars_[t.var];
    auto it = values.find(info.name);
    if (it == values.end()) {
      throw std::invalid_argument("eval_block: missing value for " + info.name);
    }
    if (info.kind == VarKind::Scalar) {
      place(M, it->second(0, 0) * (t.left * t.right), t.row, t.col);
    } else {
      const Matrix V = t.transpose_var ? it->second.transpose() : it->second;
      place(M, t.left * V * t.right, t.row, t.col);
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// Conic assembly

namespace {

struct ConeProgram {
  std::vector<int> dims;  // side length per PSD block
  std::vector<int> offs;  // svec row offset per block
  Matrix G;
  Vector h, c;
  int m = 0, n = 0, deg = 0;
};

Vector svec_unchecked(const Matrix& M) {
  const int n = static_cast<int>(M.rows());
  Vector v(n * (n + 1) / 2);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    v(k++) = M(j, j);
    for (int i = j + 1; i < n; ++i) v(k++) = kSqrt2 * 0.5 * (M(i, j) + M(j, i));
  }
  return v;
}

}  // namespace

struct LmiAssembler {
  // Bound blocks for scalar variables are appended after user blocks.
  static ConeProgram build(const LmiProblem& p) {
    ConeProgram cp;
    cp.n = p.total_size_;
    cp.dims = p.block_dims_;
    struct Bound {
      int var_offset;
      double value;
      bool is_lower;
    };
    std::vector<Bound> bounds;
    for (const auto& v : p.vars_) {
      if (v.kind != LmiProblem::VarKind::Scalar) continue;
      if (std::isfinite(v.lower)) bounds.push_back({v.offset, v.lower, true});
      if (std::isfinite(v.upper)) bounds.push_back({v.offset, v.upper, false});
    }
    cp.dims.insert(cp.dims.end(), bounds.size(), 1);

    cp.offs.resize(cp.dims.size());
    int m = 0, deg = 0;
    for (size_t b = 0; b < cp.dims.size(); ++b) {
      cp.offs[b] = m;
      m += cp.dims[b] * (cp.dims[b] + 1) / 2;
      deg += cp.dims[b];
    }
    cp.m = m;
    cp.deg = deg;
    cp.G = Matrix::Zero(m, cp.n);
    cp.h = Vector::Zero(m);
    cp.c = p.objective_;

    // Constants -> h
    std::vector<Matrix> consts;
    for (int b = 0; b < static_cast<int>(p.block_dims_.size()); ++b) {
      consts.push_back(Matrix::Zero(p.block_dims_[b], p.block_dims_[b]));
    }
    for (const auto& ct : p.consts_) place(consts[ct.block], ct.C, ct.row, ct.col);
    for (int b = 0; b < static_cast<int>(p.block_dims_.size()); ++b) {
      cp.h.segment(cp.offs[b], consts[b].rows() * (consts[b].rows() + 1) / 2) =
          svec_unchecked(consts[b]);
    }

    // Terms -> G (block value = h - G x, so coefficients enter negated)
    for (const auto& t : p.terms_) {
      const auto& info = p.vars_[t.var];
      const int nb = p.block_dims_[t.block];
      const int off = cp.offs[t.block];
      const int sd = nb * (nb + 1) / 2;
      Matrix T = Matrix::Zero(nb, nb);
      auto emit = [&](int coord, const Matrix& contrib) {
        T.setZero();
        place(T, contrib, t.row, t.col);
        cp.G.col(info.offset + coord).segment(off, sd) -= svec_unchecked(T);
      };
      if (info.kind == LmiProblem::VarKind::Scalar) {
        emit(0, t.left * t.right);
      } else if (info.kind == LmiProblem::VarKind::Symmetric) {
        int coord = 0;
        for (int j = 0; j < info.cols; ++j) {
          emit(coord++, t.left.col(j) * t.right.row(j));
          for (int i = j + 1; i < info.rows; ++i) {
            emit(coord++, (t.left.col(i) * t.right.row(j) +
                           t.left.col(j) * t.right.row(i)) /
                              kSqrt2);
          }
        }
      } else {  // rectangular, column-major coordinates
        int coord = 0;
        for (int j = 0; j < info.cols; ++j) {
          for (int i = 0; i < info.rows; ++i) {
            const int li = t.transpose_var ? j : i;
            const int rj = t.transpose_var ? i : j;
            emit(coord++, t.left.col(li) * t.right.row(rj));
          }
        }
      }
    }

    // Scalar bounds: x - lb >= 0 and ub - x >= 0 as 1x1 blocks.
    int bblock = static_cast<int>(p.block_dims_.size());
    for (const auto& bd : bounds) {
      const int off = cp.offs[bblock++];
      if (bd.is_lower) {
        cp.h(off) = -bd.value;
        cp.G(off, bd.var_offset) = -1.0;
      } else {
        cp.h(off) = bd.value;
        cp.G(off, bd.var_offset) = 1.0;
      }
    }
    return cp;
  }
};

namespace {

// ---------------------------------------------------------------------------
// Homogeneous self-dual interior-point core

struct BlockScaling {
  Matrix R, Rti;   // NT scaling factor and its inverse transpose
  Vector lambda;   // scaled-point eigenvalues
};

struct Snapshot {
  bool set = false;
  double quality = kInf;
  Vector x, s, z;
  double pcost = 0.0, dcost = 0.0, gap = kInf;
};

struct IpmOutcome {
  Snapshot best_opt;   // x, s, z are tau-normalized
  Snapshot best_pinf;  // z normalized so h^T z = -1
  Snapshot best_dinf;  // x normalized so c^T x = -1
  int iterations = 0;
  std::string note;
};

class HsdSolver {
 public:
  HsdSolver(const ConeProgram& cp, const SolveOptions& opts)
      : P(cp), O(opts) {}

  IpmOutcome run() {
    const int n = P.n, m = P.m;
    const int nb = static_cast<int>(P.dims.size());
    Vector e = Vector::Zero(m);
    for (int b = 0; b < nb; ++b) {
      e.segment(P.offs[b], sdim(b)) =
          svec_unchecked(Matrix::Identity(P.dims[b], P.dims[b]));
    }
    Vector x = Vector::Zero(n), s = e, z = e;
    double tau = 1.0, kappa = 1.0;
    const double resx0 = std::max(1.0, P.c.norm());
    const double resz0 = std::max(1.0, P.h.norm());

    IpmOutcome out;
    double prev_best = kInf;
    double prev_mu = kInf;
    int no_progress = 0;

    for (int iter = 0; iter < O.max_iter; ++iter) {
      out.iterations = iter;
      // --- metrics at the current point
      const double cx = P.c.dot(x), hz = P.h.dot(z);
      const double gap_total = s.dot(z) + tau * kappa;
      const double mu = gap_total / (P.deg + 1);
      const double pcost = cx / tau, dcost = -hz / tau;
      const double agap = s.dot(z) / (tau * tau);
      double relgap = kInf;
      if (pcost < 0.0)
        relgap = agap / (-pcost);
      else if (dcost > 0.0)
        relgap = agap / dcost;
      const double pres = (P.G * (x / tau) + s / tau - P.h).norm() / resz0;
      const double dres = (P.G.transpose() * (z / tau) + P.c).norm() / resx0;
      const bool gap_ok = agap <= O.abs_gap_tol || relgap <= O.rel_gap_tol;
      const double q_opt = std::max(pres, dres);
      if (O.verbose) {
        std::printf(
            "it %3d pcost %+.6e dcost %+.6e agap %.2e relgap %.2e "
            "pres %.2e dres %.2e tau %.2e kappa %.2e mu %.2e\n",
            iter, pcost, dcost, agap, relgap, pres, dres, tau, kappa, mu);
      }
      if (gap_ok && q_opt < out.best_opt.quality) {
        out.best_opt.set = true;
        out.best_opt.quality = q_opt;
        out.best_opt.x = x / tau;
        out.best_opt.s = s / tau;
        out.best_opt.z = z / tau;
        out.best_opt.pcost = pcost;
        out.best_opt.dcost = dcost;
        out.best_opt.gap = agap;
      }
      if (hz < 0.0) {
        const double q = (P.G.transpose() * z).norm() / (-hz) / resx0;
        if (q < out.best_pinf.quality) {
          out.best_pinf.set = true;
          out.best_pinf.quality = q;
          out.best_pinf.z = z / (-hz);
        }
      }
      if (cx < 0.0) {
        const double q = (P.G * x + s).norm() / (-cx) / resz0;
        if (q < out.best_dinf.quality) {
          out.best_dinf.set = true;
          out.best_dinf.quality = q;
          out.best_dinf.x = x / (-cx);
          out.best_dinf.s = s / (-cx);
        }
      }
      // --- early exit once a certificate is polished well below tolerance
      const double target = 0.01 * O.feas_tol;
      if (out.best_opt.quality <= target || out.best_pinf.quality <= target ||
          out.best_dinf.quality <= target) {
        break;
      }
      // Progress is either a better certificate or a shrinking barrier
      // parameter; only when both stagnate is the iteration stuck.
      const double cur_best =
          std::min({out.best_opt.quality, out.best_pinf.quality,
                    out.best_dinf.quality});
      const bool cert_progress = cur_best <= 0.5 * prev_best;
      const bool mu_progress = mu <= 0.5 * prev_mu;
      if (cert_progress) prev_best = cur_best;
      if (mu_progress) prev_mu = mu;
      if (cert_progress || mu_progress) {
        no_progress = 0;
      } else if (++no_progress >= 8) {
        out.note = "stalled";
        break;
      }

      // --- NT scaling
      std::vector<BlockScaling> W(nb);
      bool breakdown = false;
      for (int b = 0; b < nb && !breakdown; ++b) {
        breakdown = !compute_scaling(seg(s, b), seg(z, b), W[b]);
      }
      if (breakdown) {
        out.note = "scaling breakdown (iterate left the cone)";
        break;
      }

      // --- reduced KKT factorization: M = Ghat^T Ghat, Ghat = W^{-T} G
      Matrix Ghat(m, n);
      for (int k = 0; k < n; ++k) Ghat.col(k) = apply_wmt(W, P.G.col(k));
      Matrix M = Ghat.transpose() * Ghat;
      Eigen::LDLT<Matrix> ldlt(M);
      if (ldlt.info() != Eigen::Success) {
        M.diagonal().array() += 1e-12 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
        ldlt.compute(M);
        if (ldlt.info() != Eigen::Success) {
          out.note = "KKT factorization failed";
          break;
        }
      }
      auto solve2 = [&](const Vector& bx, const Vector& bz, Vector& ux,
                        Vector& uz) {
        const Vector v = apply_wmt(W, bz);
        ux = ldlt.solve(bx + Ghat.transpose() * v);
        uz = apply_winv(W, Vector(Ghat * ux - v));
        // one refinement round on the 2x2 saddle system
        const Vector r1 = bx - P.G.transpose() * uz;
        const Vector r2 = bz - P.G * ux + apply_wtw(W, uz);
        const Vector v2 = apply_wmt(W, r2);
        const Vector ex = ldlt.solve(r1 + Ghat.transpose() * v2);
        ux += ex;
        uz += apply_winv(W, Vector(Ghat * ex - v2));
      };

      Vector x1(n), z1(m);
      solve2(-P.c, P.h, x1, z1);
      const double den = P.c.dot(x1) + P.h.dot(z1) - kappa / tau;
      if (!std::isfinite(den) || std::abs(den) < 1e-300) {
        out.note = "degenerate tau step";
        break;
      }

      // residuals used by both passes
      const Vector rx = P.G.transpose() * z + P.c * tau;
      const Vector rz = P.G * x + s - P.h * tau;
      const double rt = cx + hz + kappa;

      // scaled point and products
      Vector lam_sv(m), lam2_sv(m);
      for (int b = 0; b < nb; ++b) {
        const auto& lam = W[b].lambda;
        Matrix L = lam.asDiagonal();
        lam_sv.segment(P.offs[b], sdim(b)) = svec_unchecked(L);
        Matrix L2 = lam.cwiseProduct(lam).asDiagonal();
        lam2_sv.segment(P.offs[b], sdim(b)) = svec_unchecked(L2);
      }

      auto direction = [&](double eta, const Vector& ds_rhs, double dkappa_rhs,
                           Vector& dx, Vector& ds, Vector& dz, double& dtau,
                           double& dkappa) {
        // ds_rhs is the scaled complementarity target; solve
        // Lambda o u = ds_rhs per block, then eliminate ds.
        Vector u(m);
        for (int b = 0; b < nb; ++b) {
          u.segment(P.offs[b], sdim(b)) =
              lyap_solve(W[b].lambda, seg(ds_rhs, b), P.dims[b]);
        }
        const Vector bx = -(1.0 - eta) * rx;
        const Vector bz = -(1.0 - eta) * rz - apply_wt(W, u);
        Vector dx0(n), dz0(m);
        solve2(bx, bz, dx0, dz0);
        const double btau = -(1.0 - eta) * rt;
        dtau = (btau - P.c.dot(dx0) - P.h.dot(dz0) - dkappa_rhs / tau) / den;
        dx = dx0 + dtau * x1;
        dz = dz0 + dtau * z1;
        // ds = W^T(u - W dz)
        ds = apply_wt(W, Vector(u - apply_w(W, dz)));
        dkappa = (dkappa_rhs - kappa * dtau) / tau;
      };

      // --- affine (predictor) pass
      Vector dxa(n), dsa(m), dza(m);
      double dtaua, dkappaa;
      direction(0.0, Vector(-lam2_sv), -tau * kappa, dxa, dsa, dza, dtaua,
                dkappaa);
      const double alpha_aff = std::min(
          1.0, step_to_boundary(W, dsa, dza, tau, kappa, dtaua, dkappaa));

      // Mehrotra parameters from the scaled affine products
      const Vector dz_bar_a = apply_w(W, dza);
      Vector ds_bar_a = -lam_sv - dz_bar_a;
      const double dsdz = ds_bar_a.dot(dz_bar_a) + dtaua * dkappaa;
      double sigma = 1.0 - alpha_aff +
                     dsdz / gap_total * alpha_aff * alpha_aff;
      sigma = std::pow(std::min(1.0, std::max(0.0, sigma)), 3.0);

      // --- combined (corrector) pass
      Vector ds_rhs = -lam2_sv + sigma * mu * e;
      for (int b = 0; b < nb; ++b) {
        const Matrix Ds = smat_seg(ds_bar_a, b);
        const Matrix Dz = smat_seg(dz_bar_a, b);
        const Matrix C = 0.5 * (Ds * Dz + Dz * Ds);
        ds_rhs.segment(P.offs[b], sdim(b)) -= svec_unchecked(C);
      }
      const double dk_rhs = -tau * kappa + sigma * mu - dtaua * dkappaa;
      Vector dx(n), ds(m), dz(m);
      double dtau, dkappa;
      direction(sigma, ds_rhs, dk_rhs, dx, ds, dz, dtau, dkappa);

      double alpha = step_to_boundary(W, ds, dz, tau, kappa, dtau, dkappa);
      alpha = std::min(1.0, 0.99 * alpha);
      if (!std::isfinite(alpha) || alpha < 1e-10) {
        out.note = "step length collapsed";
        break;
      }
      x += alpha * dx;
      s += alpha * ds;
      z += alpha * dz;
      tau += alpha * dtau;
      kappa += alpha * dkappa;
      if (tau < 1e-300 || !std::isfinite(tau)) {
        out.note = "tau collapsed";
        break;
      }
    }
    return out;
  }

 private:
  const ConeProgram& P;
  const SolveOptions& O;

  int sdim(int b) const { return P.dims[b] * (P.dims[b] + 1) / 2; }
  Vector seg(const Vector& v, int b) const {
    return v.segment(P.offs[b], sdim(b));
  }
  Matrix smat_seg(const Vector& v, int b) const {
    return smat(Vector(v.segment(P.offs[b], sdim(b))));
  }

  // NT scaling of one block: R, R^{-T}, lambda with S = R Lam R^T and
  // Z = R^{-T} Lam R^{-1}; computed from Cholesky factors and the SVD of
  // L_z^T L_s.
  static bool compute_scaling(const Vector& s_sv, const Vector& z_sv,
                              BlockScaling& out) {
    const Matrix S = smat(s_sv);
    const Matrix Z = smat(z_sv);
    Eigen::LLT<Matrix> ls(S), lz(Z);
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
      return false;
    }
    const Matrix Ls = ls.matrixL();
    const Matrix Lz = lz.matrixL();
    Eigen::JacobiSVD<Matrix> svd(Lz.transpose() * Ls,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector lam = svd.singularValues();
    if (lam.minCoeff() <= 0.0) return false;
    const Vector il = lam.cwiseSqrt().cwiseInverse();
    out.R = Ls * svd.matrixV() * il.asDiagonal();
    out.Rti = Lz * svd.matrixU() * il.asDiagonal();
    out.lambda = lam;
    return true;
  }

  // Lambda o U = rhs with Lambda = diag(lam): U_ij = 2 rhs_ij / (lam_i+lam_j).
  static Vector lyap_solve(const Vector& lam, const Vector& rhs_sv, int d) {
    Matrix R = smat(Vector(rhs_sv));
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) R(i, j) = 2.0 * R(i, j) / (lam(i) + lam(j));
    return svec_unchecked(R);
  }

  Vector apply_congruence(const std::vector<BlockScaling>& W, const Vector& v,
                          bool left_transposed, bool use_rti) const {
    Vector out(P.m);
    for (size_t b = 0; b < W.size(); ++b) {
      const Matrix& F = use_rti ? W[b].Rti : W[b].R;
      const Matrix V = smat_seg(v, static_cast<int>(b));
      const Matrix T = left_transposed ? Matrix(F.transpose() * V * F)
                                       : Matrix(F * V * F.transpose());
      out.segment(P.offs[b], sdim(static_cast<int>(b))) = svec_unchecked(T);
    }
    return out;
  }

  // W u   = svec(R^T U R)
  Vector apply_w(const std::vector<BlockScaling>& W, const Vector& v) const {
    return apply_congruence(W, v, true, false);
  }
  // W^T u = svec(R U R^T)
  Vector apply_wt(const std::vector<BlockScaling>& W, const Vector& v) const {
    return apply_congruence(W, v, false, false);
  }
  // W^{-T} u = svec(Rti^T U Rti)
  Vector apply_wmt(const std::vector<BlockScaling>& W, const Vector& v) const {
    return apply_congruence(W, v, true, true);
  }
  // W^{-1} u = svec(Rti U Rti^T)
  Vector apply_winv(const std::vector<BlockScaling>& W, const Vector& v) const {
    return apply_congruence(W, v, false, true);
  }
  Vector apply_wtw(const std::vector<BlockScaling>& W, const Vector& v) const {
    return apply_wt(W, apply_w(W, v));
  }

  // Largest alpha keeping s + alpha ds and z + alpha dz in the cone and
  // tau, kappa positive, measured in the scaled space where both points
  // equal Lambda.
  double step_to_boundary(const std::vector<BlockScaling>& W, const Vector& ds,
                          const Vector& dz, double tau, double kappa,
                          double dtau, double dkappa) const {
    double alpha = kInf;
    for (size_t b = 0; b < W.size(); ++b) {
      const Vector& lam = W[b].lambda;
      const Vector isl = lam.cwiseSqrt().cwiseInverse();
      const Vector ds_bar = apply_wmt_block(W[b], seg(ds, static_cast<int>(b)));
      const Vector dz_bar = apply_w_block(W[b], seg(dz, static_cast<int>(b)));
      for (const Vector* d : {&ds_bar, &dz_bar}) {
        Matrix Mb = smat(*d);
        Mb = isl.asDiagonal() * Mb * isl.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(Mb),
                                                 Eigen::EigenvaluesOnly);
        const double mn = es.eigenvalues().minCoeff();
        if (mn < 0.0) alpha = std::min(alpha, -1.0 / mn);
      }
    }
    if (dtau < 0.0) alpha = std::min(alpha, -tau / dtau);
    if (dkappa < 0.0) alpha = std::min(alpha, -kappa / dkappa);
    return alpha;
  }

  Vector apply_w_block(const BlockScaling& Wb, const Vector& v) const {
    return svec_unchecked(Wb.R.transpose() * smat(v) * Wb.R);
  }
  Vector apply_wmt_block(const BlockScaling& Wb, const Vector& v) const {
    return svec_unchecked(Wb.Rti.transpose() * smat(v) * Wb.Rti);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// solve(): assemble, equilibrate, run the embedding, classify, re-verify

LmiSolution LmiProblem::solve(const SolveOptions& opts) const {
  const auto t0 = std::chrono::steady_clock::now();
  if (total_size_ == 0) {
    throw std::invalid_argument("LmiProblem::solve: no variables declared");
  }
  ConeProgram cp = LmiAssembler::build(*this);

  // Block row scaling (scalar congruence per block) then column equilibration.
  Vector row_scale = Vector::Ones(cp.m);
  for (size_t b = 0; b < cp.dims.size(); ++b) {
    const int off = cp.offs[b], sd = cp.dims[b] * (cp.dims[b] + 1) / 2;
    const double hmax = cp.h.segment(off, sd).cwiseAbs().maxCoeff();
    const double beta = 1.0 / std::max(1.0, hmax);
    row_scale.segment(off, sd).setConstant(beta);
  }
  cp.G = row_scale.asDiagonal() * cp.G;
  cp.h = row_scale.asDiagonal() * cp.h;
  Vector col_scale = Vector::Ones(cp.n);
  for (int k = 0; k < cp.n; ++k) {
    double s = cp.G.col(k).cwiseAbs().maxCoeff();
    s = std::min(std::max(s, 1e-10), 1e10);
    if (s <= 0.0) s = 1.0;
    col_scale(k) = s;
  }
  cp.G = cp.G * col_scale.cwiseInverse().asDiagonal();
  Vector c_orig = cp.c;
  cp.c = cp.c.cwiseQuotient(col_scale);

  HsdSolver ipm(cp, opts);
  IpmOutcome oc = ipm.run();

  LmiSolution sol;
  sol.iterations = oc.iterations;
  sol.note = oc.note;
  sol.opt_quality = oc.best_opt.quality;
  sol.inf_quality = oc.best_pinf.quality;
  sol.marginal = !(sol.opt_quality <= 0.1 * opts.feas_tol ||
                   sol.inf_quality <= 0.1 * opts.feas_tol);

  const bool ok_opt = oc.best_opt.set && oc.best_opt.quality <= opts.feas_tol;
  const bool ok_pinf =
      oc.best_pinf.set && oc.best_pinf.quality <= opts.feas_tol;
  const bool ok_dinf =
      oc.best_dinf.set && oc.best_dinf.quality <= opts.feas_tol;

  if (ok_opt && (!ok_pinf || oc.best_opt.quality <= oc.best_pinf.quality)) {
    sol.status = SolveStatus::Optimal;
    sol.duality_gap = oc.best_opt.gap;
    // Un-scale the primal point and extract named values.
    const Vector x = oc.best_opt.x.cwiseQuotient(col_scale);
    sol.objective = c_orig.dot(x);
    const Vector z_orig = row_scale.asDiagonal() * oc.best_opt.z;
    sol.dual_objective = -(cp.h.cwiseQuotient(row_scale)).dot(z_orig);
    for (const auto& v : vars_) {
      const Vector coords = x.segment(v.offset, v.size);
      Matrix val;
      if (v.kind == VarKind::Scalar) {
        val = Matrix(1, 1);
        val(0, 0) = coords(0);
      } else if (v.kind == VarKind::Symmetric) {
        val = smat(coords);
      } else {
        val = Eigen::Map<const Matrix>(coords.data(), v.rows, v.cols);
      }
      sol.values[v.name] = val;
    }
    // Solver-independent recheck of every block at the returned assignment.
    double worst = 0.0;
    bool recheck_ok = true;
    for (int b = 0; b < num_blocks(); ++b) {
      const Matrix Mb = eval_block(b, sol.values);
      const double mn = min_eigenvalue_sym(Mb);
      const double scale = std::max(1.0, Mb.cwiseAbs().maxCoeff());
      worst = std::max(worst, std::max(0.0, -mn));
      if (mn < -opts.feas_tol * scale) recheck_ok = false;
    }
    for (const auto& v : vars_) {
      if (v.kind != VarKind::Scalar) continue;
      const double xv = sol.values[v.name](0, 0);
      if (xv < v.lower - opts.feas_tol * std::max(1.0, std::abs(v.lower)) ||
          xv > v.upper + opts.feas_tol * std::max(1.0, std::abs(v.upper))) {
        recheck_ok = false;
      }
    }
    sol.max_primal_residual = worst;
    if (!recheck_ok) {
      sol.status = SolveStatus::NumericalFailure;
      sol.note = "independent block recheck failed";
      sol.marginal = true;
    }
  } else if (ok_pinf) {
    sol.status = SolveStatus::Infeasible;
    sol.objective = kInf;
    sol.dual_objective = kInf;
  } else if (ok_dinf) {
    sol.status = SolveStatus::NumericalFailure;
    sol.note = "certified unbounded (dual infeasible): " + sol.note;
  } else {
    sol.status = SolveStatus::NumericalFailure;
    if (sol.note.empty()) sol.note = "no certificate reached tolerance";
  }
  sol.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return sol;
}

// ---------------------------------------------------------------------------
// Debug dump

nlohmann::json LmiProblem::to_json() const {
  nlohmann::json j;
  j["variables"] = nlohmann::json::array();
  for (const auto& v : vars_) {
    nlohmann::json jv;
    jv["name"] = v.name;
    jv["kind"] = v.kind == VarKind::Scalar      ? "scalar"
                 : v.kind == VarKind::Symmetric ? "symmetric"
                                                : "rectangular";
    jv["rows"] = v.rows;
    jv["cols"] = v.cols;
    if (std::isfinite(v.lower)) jv["lower"] = v.lower;
    if (std::isfinite(v.upper)) jv["upper"] = v.upper;
    j["variables"].push_back(jv);
  }
  j["objective"] = nlohmann::json::array();
  for (int k = 0; k < total_size_; ++k) j["objective"].push_back(objective_(k));
  j["blocks"] = nlohmann::json::array();
  for (int b = 0; b < num_blocks(); ++b) {
    nlohmann::json jb;
    jb["dim"] = block_dims_[b];
    jb["constants"] = nlohmann::json::array();
    for (const auto& ct : consts_) {
      if (ct.block != b) continue;
      jb["constants"].push_back({{"C", matrix_to_json(ct.C)},
                                 {"row", ct.row},
                                 {"col", ct.col}});
    }
    jb["terms"] = nlohmann::json::array();
    for (const auto& t : terms_) {
      if (t.block != b) continue;
      jb["terms"].push_back({{"var", vars_[t.var].name},
                             {"left", matrix_to_json(t.left)},
                             {"right", matrix_to_json(t.right)},
                             {"row", t.row},
                             {"col", t.col},
                             {"transpose_var", t.transpose_var}});
    }
    j["blocks"].push_back(jb);
  }
  return j;
}

LmiProblem LmiProblem::from_json(const nlohmann::json& j) {
  LmiProblem p;
  std::map<std::string, VarRef> refs;
  for (const auto& jv : j.at("variables")) {
    const std::string kind = jv.at("kind");
    const std::string name = jv.at("name");
    if (kind == "scalar") {
      const double lo = jv.contains("lower") ? jv["lower"].get<double>() : -kInf;
      const double hi = jv.contains("upper") ? jv["upper"].get<double>() : kInf;
      refs[name] = p.add_scalar(name, lo, hi);
    } else if (kind == "symmetric") {
      refs[name] = p.add_symmetric(name, jv.at("rows").get<int>());
    } else {
      refs[name] = p.add_rectangular(name, jv.at("rows").get<int>(),
                                     jv.at("cols").get<int>());
    }
  }
  const auto& jo = j.at("objective");
  for (int k = 0; k < static_cast<int>(jo.size()); ++k) {
    p.objective_(k) = jo[k].get<double>();
  }
  for (const auto& jb : j.at("blocks")) {
    const int b = p.add_block(jb.at("dim").get<int>());
    for (const auto& jc : jb.at("constants")) {
      p.add_constant(b, matrix_from_json(jc.at("C")), jc.at("row").get<int>(),
                     jc.at("col").get<int>());
    }
    for (const auto& jt : jb.at("terms")) {
      p.terms_.push_back({b, refs.at(jt.at("var").get<std::string>()).id,
                          matrix_from_json(jt.at("left")),
                          matrix_from_json(jt.at("right")),
                          jt.at("row").get<int>(), jt.at("col").get<int>(),
                          jt.at("transpose_var").get<bool>()});
    }
  }
  return p;
}

}  // namespace xlqr
