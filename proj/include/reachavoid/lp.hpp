// Copyright 2026 The reachavoid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "reachavoid/linops.hpp"

namespace reachavoid {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(LpStatus status);

/// maximize objective·v  s.t.  constraints·v <= rhs,  lower <= v <= upper.
/// Bounds may be infinite.
struct LpProblem {
  Vector objective;
  Matrix constraints;
  Vector rhs;
  Vector lower;
  Vector upper;

  Eigen::Index num_variables() const { return objective.size(); }

  /// Throws std::invalid_argument if shapes disagree, data is not finite, or
  /// some lower bound exceeds its upper bound.
  void validate() const;
};

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  int max_iterations = 200000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int stall_threshold = 50;
  int refactor_interval = 64;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  // Optimal point; a feasible point when unbounded; empty when infeasible.
  Vector point;
  int iterations = 0;
};

/// Raised when the simplex cannot reach a verdict within its iteration cap.
class LpNumericalError : public std::runtime_error {
 public:
  LpNumericalError(const std::string& what, int iterations)
      : std::runtime_error(what + " after " + std::to_string(iterations) +
                           " iterations"),
        iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

/// Revised primal simplex applied to the dual of an LpProblem.
///
/// Finite variable bounds are folded into the row set, so the dual has one
/// equality per primal variable and one nonnegative multiplier per row. The
/// dual basis is therefore square in the number of primal variables, which
/// keeps iterations cheap when rows vastly outnumber columns (the big-M
/// programs built here). Changing bounds only changes dual costs, so the last
/// basis stays dual-feasible and re-solves start from it.
class LpSolver {
 public:
  explicit LpSolver(LpProblem problem, LpOptions options = {});

  LpSolution solve();

  /// Re-solves with new bounds. A bound that was finite in the base problem
  /// must stay finite and an infinite one must stay infinite.
  LpSolution solve(const Vector& lower, const Vector& upper);

  const LpProblem& problem() const { return problem_; }
  long long total_iterations() const { return total_iterations_; }

 private:
  enum class PhaseResult { kOptimal, kUnbounded };

  void cold_start();
  void refactor();
  PhaseResult run_phase(bool phase_one, int& iterations);
  double phase_one_objective() const;
  void set_bound_costs(const Vector& lower, const Vector& upper);
  LpSolution resolve_dual_infeasible(int iterations);

  LpProblem problem_;
  LpOptions options_;
  Eigen::Index n_ = 0;         // primal variables == dual equality rows
  Eigen::Index m_struct_ = 0;  // structural primal rows
  Matrix rows_;                // structural rows then bound rows
  Vector costs_;               // right-hand sides == dual costs
  Vector row_norms_;
  std::vector<Eigen::Index> upper_row_;
  std::vector<Eigen::Index> lower_row_;
  Vector art_sign_;

  std::vector<Eigen::Index> basis_;  // >= rows_.rows() marks an artificial
  Matrix binv_;
  Vector xb_;
  bool has_basis_ = false;
  bool dual_infeasible_ = false;
  int since_refactor_ = 0;
  std::unique_ptr<LpSolver> feasibility_;
  long long total_iterations_ = 0;
};

}  // namespace reachavoid
