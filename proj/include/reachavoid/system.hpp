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

#include "reachavoid/linops.hpp"

namespace reachavoid {

/// x_{t+1} = A x_t + B u_t + w_t
struct LtiSystem {
  Matrix a;
  Matrix b;

  Eigen::Index state_dim() const { return a.rows(); }
  Eigen::Index input_dim() const { return b.cols(); }

  /// Throws std::invalid_argument unless A is square, B has A's row count and
  /// all entries are finite.
  void validate() const;
};

/// Horizon-level map X = G_x x0 + G_u U + G_w W with X = [x_1; ...; x_N],
/// U = [u_0; ...; u_{N-1}] and W = [w_0; ...; w_{N-1}].
struct StackedSystem {
  Matrix gx;  // (N nx) x nx
  Matrix gu;  // (N nx) x (N nu)
  Matrix gw;  // (N nx) x (N nx)
  int horizon = 0;

  Eigen::Index state_dim() const { return gx.cols(); }
  Eigen::Index input_dim() const { return horizon > 0 ? gu.cols() / horizon : 0; }

  Vector apply(const Vector& x0, const Vector& inputs,
               const Vector& disturbance) const;
};

StackedSystem stack(const LtiSystem& system, int horizon);

/// Step-by-step recursion; returns [x_1; ...; x_N]. The horizon is implied by
/// the input length.
Vector propagate(const LtiSystem& system, const Vector& x0,
                 const Vector& inputs, const Vector& disturbance);

}  // namespace reachavoid
