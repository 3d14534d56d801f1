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
#include <string>

#include "reachavoid/linops.hpp"

namespace reachavoid {

enum class NoiseKind { kGaussianDiag, kGaussianFull, kTable };

std::string to_string(NoiseKind kind);

/// Distribution of one disturbance w_t.
struct NoiseModel {
  NoiseKind kind = NoiseKind::kGaussianDiag;
  Vector mean;
  Matrix covariance;  // Gaussian kinds
  Matrix table;       // kTable: one empirical draw per row, resampled uniformly

  static NoiseModel gaussian_diag(const Vector& mean, const Vector& variance);
  static NoiseModel gaussian(const Vector& mean, const Matrix& covariance);
  static NoiseModel empirical(const Matrix& samples);

  Eigen::Index dim() const;

  /// Throws std::invalid_argument when the covariance is not symmetric
  /// positive semidefinite or shapes disagree.
  void validate() const;
};

/// K concatenated disturbances, one per row: [w_0, ..., w_{N-1}].
struct ScenarioSet {
  Matrix w;  // K x (N nx)
  std::uint64_t seed = 0;
  int horizon = 0;

  Eigen::Index count() const { return w.rows(); }
};

/// Row i is the image of scenario i under the prediction map.
struct PredictionSet {
  Matrix phi;  // K x (N nx)
};

struct HoeffdingQuery {
  double delta = 0.0;  // violation parameter, in (0, 1]
  double beta = 0.0;   // risk of failure, in (0, 1]
};

/// ceil(-ln(beta) / (2 delta^2)), floored at 1.
std::int64_t required_scenarios(const HoeffdingQuery& query);

/// Draws K scenarios. Scenario i uses its own stream derived from (seed, i),
/// so the first rows do not change when K grows.
ScenarioSet sample(const NoiseModel& noise, int horizon, int count,
                   std::uint64_t seed);

/// phi_i = G_w W_i.
PredictionSet predict(const ScenarioSet& scenarios, const Matrix& gw);

}  // namespace reachavoid
