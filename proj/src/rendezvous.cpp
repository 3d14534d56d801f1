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

#include "reachavoid/rendezvous.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace reachavoid {

double CwhConfig::mean_motion() const {
  const double r = earth_radius + altitude;
  return std::sqrt(gravitational_parameter / (r * r * r));
}

void CwhConfig::validate() const {
  if (!(mass > 0.0) || !(sampling_period > 0.0) || horizon < 1 ||
      !(gravitational_parameter > 0.0) || !(earth_radius + altitude > 0.0)) {
    throw std::invalid_argument("CwhConfig: nonpositive physical parameter");
  }
  if (noise_variance.size() != 4 || x0.size() != 4 || input_lower.size() != 2 ||
      input_upper.size() != 2) {
    throw std::invalid_argument("CwhConfig: wrong vector length");
  }
  if ((noise_variance.array() < 0.0).any()) {
    throw std::invalid_argument("CwhConfig: negative noise variance");
  }
}

LtiSystem cwh_continuous(const CwhConfig& cfg) {
  cfg.validate();
  const double w = cfg.mean_motion();
  Matrix a = Matrix::Zero(4, 4);
  a(0, 2) = 1.0;
  a(1, 3) = 1.0;
  a(2, 0) = 3.0 * w * w;
  a(2, 3) = 2.0 * w;
  a(3, 2) = -2.0 * w;
  Matrix b = Matrix::Zero(4, 2);
  b(2, 0) = 1.0 / cfg.mass;
  b(3, 1) = 1.0 / cfg.mass;
  return {a, b};
}

LtiSystem build_cwh_system(const CwhConfig& cfg) {
  const LtiSystem c = cwh_continuous(cfg);
  Matrix aug = Matrix::Zero(6, 6);
  aug.topLeftCorner(4, 4) = c.a;
  aug.topRightCorner(4, 2) = c.b;
  const Matrix e = (aug * cfg.sampling_period).exp();
  return {e.topLeftCorner(4, 4), e.topRightCorner(4, 2)};
}

ReachAvoidSpec build_rendezvous_spec(int horizon) {
  ReachAvoidSpec spec;
  spec.horizon = horizon;
  spec.target = Polytope::box(
      (Vector(4) << -0.1, -0.1, -0.01, -0.01).finished(),
      (Vector(4) << 0.1, 0.0, 0.01, 0.01).finished());
  spec.safe.f = matrix_from_rows({{1, 1, 0, 0},
                                  {-1, 1, 0, 0},
                                  {0, -1, 0, 0},
                                  {0, 0, 1, 0},
                                  {0, 0, -1, 0},
                                  {0, 0, 0, 1},
                                  {0, 0, 0, -1}});
  spec.safe.h = vector_from({0, 0, 1, 0.05, 0.05, 0.05, 0.05});
  spec.validate();
  return spec;
}

NoiseModel rendezvous_noise(const CwhConfig& cfg) {
  return NoiseModel::gaussian_diag(Vector::Zero(4), cfg.noise_variance);
}

InputBox rendezvous_input_box(const CwhConfig& cfg) {
  return InputBox::repeat(cfg.input_lower, cfg.input_upper, cfg.horizon);
}

}  // namespace reachavoid
