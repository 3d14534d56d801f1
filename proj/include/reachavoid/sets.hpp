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

#include <optional>

#include "reachavoid/linops.hpp"

namespace reachavoid {

/// { x : f x <= h }
struct Polytope {
  Matrix f;
  Vector h;

  Eigen::Index dim() const { return f.cols(); }
  Eigen::Index num_rows() const { return f.rows(); }

  /// Throws std::invalid_argument on shape mismatch, non-finite data or an
  /// all-zero row in f.
  void validate() const;

  /// Axis-aligned box lo <= x <= hi as a polytope (upper rows then lower).
  static Polytope box(const Vector& lo, const Vector& hi);
};

/// Exact membership: f x <= h componentwise, no tolerance.
bool contains(const Polytope& p, const Vector& x);

/// Safe set for steps 0..N-1, target set at step N.
struct ReachAvoidSpec {
  Polytope safe;
  Polytope target;
  int horizon = 0;

  void validate() const;
};

/// Per-coordinate bounds on the stacked input U (length N nu).
struct InputBox {
  Vector lower;
  Vector upper;

  /// Repeats the per-step bounds across the horizon.
  static InputBox repeat(const Vector& lo, const Vector& hi, int horizon);

  Eigen::Index size() const { return lower.size(); }
  bool bounded() const { return lower.allFinite() && upper.allFinite(); }
  bool contains(const Vector& u) const;
  Vector center() const { return 0.5 * (lower + upper); }
  Vector halfwidth() const { return 0.5 * (upper - lower); }
  void validate() const;
};

/// Trajectory-level constraint F X <= h over X = [x_1; ...; x_N]:
/// block-diagonal with the safe rows on steps 1..N-1 and the target rows on
/// step N.
struct TrajectoryConstraint {
  Matrix f;  // L x (N nx), L = (N-1) l_S + l_T
  Vector h;

  Eigen::Index num_rows() const { return f.rows(); }
  bool satisfied_by(const Vector& trajectory) const;
};

TrajectoryConstraint build_trajectory_constraint(const ReachAvoidSpec& spec);

}  // namespace reachavoid
