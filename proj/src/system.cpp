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

#include "reachavoid/system.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace reachavoid {

void LtiSystem::validate() const {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("LtiSystem: A must be square and nonempty");
  }
  if (b.rows() != a.rows()) {
    throw std::invalid_argument("LtiSystem: B must have as many rows as A");
  }
  require_finite(a, "LtiSystem A");
  require_finite(b, "LtiSystem B");
}

StackedSystem stack(const LtiSystem& system, int horizon) {
  system.validate();
  if (horizon < 1) {
    throw std::invalid_argument("stack: horizon must be >= 1");
  }
  const Eigen::Index nx = system.state_dim();
  const Eigen::Index nu = system.input_dim();
  const Eigen::Index n = horizon;

  // powers[k] = A^k
  std::vector<Matrix> powers(static_cast<std::size_t>(horizon + 1));
  powers[0] = Matrix::Identity(nx, nx);
  for (int k = 1; k <= horizon; ++k) powers[k] = system.a * powers[k - 1];

  StackedSystem out;
  out.horizon = horizon;
  out.gx = Matrix::Zero(n * nx, nx);
  out.gu = Matrix::Zero(n * nx, n * nu);
  out.gw = Matrix::Zero(n * nx, n * nx);
  for (Eigen::Index t = 1; t <= n; ++t) {
    const Eigen::Index row = (t - 1) * nx;
    out.gx.block(row, 0, nx, nx) = powers[t];
    for (Eigen::Index s = 0; s < t; ++s) {
      const Matrix& p = powers[t - s - 1];
      out.gu.block(row, s * nu, nx, nu) = p * system.b;
      out.gw.block(row, s * nx, nx, nx) = p;
    }
  }
  return out;
}

Vector StackedSystem::apply(const Vector& x0, const Vector& inputs,
                            const Vector& disturbance) const {
  if (x0.size() != gx.cols() || inputs.size() != gu.cols() ||
      disturbance.size() != gw.cols()) {
    throw std::invalid_argument("StackedSystem::apply: dimension mismatch");
  }
  return gx * x0 + gu * inputs + gw * disturbance;
}

Vector propagate(const LtiSystem& system, const Vector& x0,
                 const Vector& inputs, const Vector& disturbance) {
  system.validate();
  const Eigen::Index nx = system.state_dim();
  const Eigen::Index nu = system.input_dim();
  if (x0.size() != nx || nu == 0 || inputs.size() % nu != 0) {
    throw std::invalid_argument("propagate: dimension mismatch");
  }
  const Eigen::Index n = inputs.size() / nu;
  if (disturbance.size() != n * nx) {
    throw std::invalid_argument("propagate: disturbance length != N * nx");
  }
  Vector out(n * nx);
  Vector x = x0;
  for (Eigen::Index t = 0; t < n; ++t) {
    x = system.a * x + system.b * inputs.segment(t * nu, nu) +
        disturbance.segment(t * nx, nx);
    out.segment(t * nx, nx) = x;
  }
  return out;
}

}  // namespace reachavoid
