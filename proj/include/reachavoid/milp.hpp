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

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "reachavoid/lp.hpp"
#include "reachavoid/partition.hpp"
#include "reachavoid/scenarios.hpp"
#include "reachavoid/sets.hpp"
#include "reachavoid/system.hpp"

namespace reachavoid {

/// maximize sum_i weights_i z_i over inputs U in the box and binaries z,
/// where block i asks input_map U <= block_rhs.row(i) and z_i = 0 relaxes
/// each of its rows by big_m(i, l).
///
/// The rows actually handed to the LP are tightened by `tightening` so that
/// a solution accepted within the LP feasibility tolerance still satisfies
/// the untightened rows exactly.
struct MilpProblem {
  Matrix input_map;   // L x (N nu): F G_u
  Matrix block_rhs;   // blocks x L
  Matrix big_m;       // blocks x L, valid for the tightened rows
  Vector tightening;  // L
  Vector weights;     // blocks
  InputBox box;
  // When positive, weights(i) * denominator is a whole number for every i,
  // so objective values are counts over the denominator.
  std::int64_t denominator = 0;

  Eigen::Index num_blocks() const { return block_rhs.rows(); }
  Eigen::Index num_rows() const { return input_map.rows(); }
  Eigen::Index num_inputs() const { return input_map.cols(); }

  /// Throws std::invalid_argument on inconsistent shapes, an unbounded box,
  /// negative weights or a big-M too small to relax some row.
  void validate() const;

  /// Objective of a 0/1 vector, rounded to a whole count over the
  /// denominator when one is set.
  double value_of(const std::vector<int>& z) const;

  /// Blocks whose untightened rows hold at U (no tolerance).
  std::vector<int> satisfied_blocks(const Vector& inputs) const;
};

struct MilpOptions {
  double gap_tol = 1e-6;
  std::int64_t node_limit = 1'000'000;
  LpOptions lp;
};

struct SolveResult {
  double p_value = 0.0;
  Vector inputs;
  std::vector<int> z;
  std::int64_t nodes = 0;
  std::int64_t lp_calls = 0;
  std::int64_t lp_iterations = 0;
  double wall_time = 0.0;
  bool optimal = false;
  // Certified upper bound on the optimum.
  double bound = 1.0;
};

/// Closed-form big-M: for each block and row, the largest violation of rhs
/// over the box plus margin (never below margin).
Matrix compute_big_m(const Matrix& input_map, const Matrix& rhs,
                     const InputBox& box, double margin = 1.0);

/// Same rule phrased on the trajectory: rows F_l (G_x x0 + G_u U + p_i) <= h_l
/// for every row p_i of points.
Matrix compute_big_m(const StackedSystem& stacked,
                     const TrajectoryConstraint& constraint, const Vector& x0,
                     const Matrix& points, const InputBox& box,
                     double margin = 1.0);

/// Default tightening for the LP rows: a few feasibility tolerances scaled by
/// the row's input sensitivity.
Vector default_tightening(const Matrix& input_map, double feas_tol);

/// One block per predicted disturbance, weights 1/K.
MilpProblem build_full(const StackedSystem& stacked,
                       const TrajectoryConstraint& constraint,
                       const Vector& x0, const PredictionSet& predictions,
                       const InputBox& box, double margin = 1.0,
                       double feas_tol = LpOptions{}.feas_tol);

/// One block per seed, rows tightened by the cell buffers, weights alpha/K.
MilpProblem build_partitioned(const StackedSystem& stacked,
                              const TrajectoryConstraint& constraint,
                              const Vector& x0, const PartitionModel& model,
                              const InputBox& box, double margin = 1.0,
                              double feas_tol = LpOptions{}.feas_tol);

/// Best-bound branch and bound over z. Deterministic: nodes with equal bounds
/// are taken in creation order, branching picks the most fractional binary
/// (lowest index on ties) and the z = 1 child is created first. The returned
/// z marks every block whose rows hold at the returned inputs.
SolveResult solve_milp(const MilpProblem& problem,
                       const MilpOptions& options = {});

/// Writes the problem in CPLEX LP text format (variables u*, z*).
void write_lp_format(std::ostream& out, const MilpProblem& problem);

}  // namespace reachavoid
