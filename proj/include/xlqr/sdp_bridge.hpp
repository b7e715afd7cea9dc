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

#ifndef XLQR_SDP_BRIDGE_HPP
#define XLQR_SDP_BRIDGE_HPP

#include <limits>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xlqr/lin_core.hpp"

namespace xlqr {

/// Scaled lower-triangular vectorization: column-major lower triangle with
/// off-diagonal entries times sqrt(2), so <svec(X), svec(Y)> = Tr(XY).
Vector svec(const Matrix& M);

/// Inverse of svec.
Matrix smat(const Vector& v);

enum class SolveStatus { Optimal, Infeasible, NumericalFailure };

const char* to_string(SolveStatus s);

struct SolveOptions {
  double feas_tol = 1e-7;
  double abs_gap_tol = 1e-7;
  double rel_gap_tol = 1e-8;
  int max_iter = 100;
  bool verbose = false;
};

/// Result of solving one LmiProblem. When status is Optimal every LMI block
/// evaluated at `values` has min eigenvalue >= -feas_tol (re-checked here,
/// independently of the interior-point iteration). A decision is `marginal`
/// when neither the optimality nor the infeasibility certificate got below
/// 0.1 x feas_tol; interior-point methods cannot decide exactly on the
/// feasibility boundary.
struct LmiSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  bool marginal = true;
  double objective = 0.0;
  double dual_objective = 0.0;
  double opt_quality = std::numeric_limits<double>::infinity();
  double inf_quality = std::numeric_limits<double>::infinity();
  double duality_gap = std::numeric_limits<double>::infinity();
  double max_primal_residual = 0.0;
  double solve_seconds = 0.0;
  int iterations = 0;
  std::string note;
  std::map<std::string, Matrix> values;

  const Matrix& value(const std::string& name) const;
  double scalar(const std::string& name) const;
};

struct VarRef {
  int id = -1;
};

/// Linear-matrix-inequality problem: named scalar / symmetric / rectangular
/// decision variables, a linear objective, and affine symmetric blocks
/// constrained to be positive semidefinite.
///
/// Placement convention: a term contributed at block offset (row, col) with
/// row != col is mirrored (its transpose lands at (col, row)); a term placed
/// on the diagonal is symmetrized. Callers therefore describe one triangle
/// only.
class LmiProblem {
 public:
  VarRef add_scalar(const std::string& name,
                    double lower = -std::numeric_limits<double>::infinity(),
                    double upper = std::numeric_limits<double>::infinity());
  VarRef add_symmetric(const std::string& name, int dim);
  VarRef add_rectangular(const std::string& name, int rows, int cols);

  /// New PSD block of the given side length; returns its id.
  int add_block(int dim);

  /// Adds constant C at (row, col) inside the block.
  void add_constant(int block, const Matrix& C, int row = 0, int col = 0);

  /// Adds left * V * right (V^T when transpose_var) for a matrix variable.
  void add_term(int block, VarRef v, const Matrix& left, const Matrix& right,
                int row = 0, int col = 0, bool transpose_var = false);

  /// Adds x * C for a scalar variable x.
  void add_scalar_term(int block, VarRef v, const Matrix& C, int row = 0,
                       int col = 0);

  /// Objective += <W, V> (for scalars W is 1x1). Minimization throughout.
  void add_objective(VarRef v, const Matrix& W);
  void add_objective(VarRef v, double w);

  LmiSolution solve(const SolveOptions& opts = {}) const;

  /// Evaluates one block's affine expression at a full variable assignment.
  Matrix eval_block(int block, const std::map<std::string, Matrix>& values) const;

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_blocks() const { return static_cast<int>(block_dims_.size()); }
  int block_dim(int block) const { return block_dims_.at(block); }

  /// Dense debug dump (variables, objective, blocks) for offline reproduction.
  nlohmann::json to_json() const;
  static LmiProblem from_json(const nlohmann::json& j);

 private:
  enum class VarKind { Scalar, Symmetric, Rectangular };
  struct VarInfo {
    std::string name;
    VarKind kind;
    int rows, cols;
    int offset, size;  // position in the stacked coordinate vector
    double lower, upper;
  };
  struct Term {
    int block, var;
    Matrix left, right;
    int row, col;
    bool transpose_var;
  };
  struct ConstTerm {
    int block;
    Matrix C;
    int row, col;
  };

  const VarInfo& check_var(VarRef v) const;
  void check_block_span(int block, int row, int col, int r, int c) const;

  std::vector<VarInfo> vars_;
  std::vector<int> block_dims_;
  std::vector<Term> terms_;
  std::vector<ConstTerm> consts_;
  Vector objective_;  // grows with variables
  int total_size_ = 0;

  friend struct LmiAssembler;
};

}  // namespace xlqr

#endif  // XLQR_SDP_BRIDGE_HPP
