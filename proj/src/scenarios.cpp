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
#include "reachavoid/scenarios.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "reachavoid/random.hpp"

namespace reachavoid {

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kGaussianDiag:
      return "gaussian_diag";
    case NoiseKind::kGaussianFull:
      return "gaussian";
    case NoiseKind::kTable:
      return "table";
  }
  return "unknown";
}

NoiseModel NoiseModel::gaussian_diag(const Vector& mean,
                                     const Vector& variance) {
  NoiseModel m;
  m.kind = NoiseKind::kGaussianDiag;
  m.mean = mean;
  m.covariance = variance.asDiagonal();
  m.validate();
  return m;
}

NoiseModel NoiseModel::gaussian(const Vector& mean, const Matrix& covariance) {
  NoiseModel m;
  m.kind = NoiseKind::kGaussianFull;
  m.mean = mean;
  m.covariance = covariance;
  m.validate();
  return m;
}

NoiseModel NoiseModel::empirical(const Matrix& samples) {
  NoiseModel m;
  m.kind = NoiseKind::kTable;
  m.table = samples;
  m.mean = samples.colwise().mean().transpose();
  m.validate();
  return m;
}

Eigen::Index NoiseModel::dim() const {
  return kind == NoiseKind::kTable ? table.cols() : mean.size();
}

void NoiseModel::validate() const {
  if (kind == NoiseKind::kTable) {
    if (table.rows() == 0 || table.cols() == 0) {
      throw std::invalid_argument("NoiseModel: empty sample table");
    }
    require_finite(table, "NoiseModel table");
    return;
  }
  const Eigen::Index n = mean.size();
  if (n == 0 || covariance.rows() != n || covariance.cols() != n) {
    throw std::invalid_argument("NoiseModel: covariance shape mismatch");
  }
  require_finite(mean, "NoiseModel mean");
  require_finite(covariance, "NoiseModel covariance");
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * scale) {
    throw std::invalid_argument("NoiseModel: covariance is not symmetric");
  }
  if (kind == NoiseKind::kGaussianDiag) {
    const Matrix off = covariance - Matrix(covariance.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() != 0.0) {
      throw std::invalid_argument("NoiseModel: diagonal kind has off-diagonal");
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance,
                                            Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw std::invalid_argument(
        "NoiseModel: covariance is not positive semidefinite");
  }
}

std::int64_t required_scenarios(const HoeffdingQuery& query) {
  if (!(query.delta > 0.0 && query.delta <= 1.0)) {
    throw std::invalid_argument("required_scenarios: delta must be in (0, 1]");
  }
  if (!(query.beta > 0.0 && query.beta <= 1.0)) {
    throw std::invalid_argument("required_scenarios: beta must be in (0, 1]");
  }
  const double bound =
      -std::log(query.beta) / (2.0 * query.delta * query.delta);
  if (bound > static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    throw std::invalid_argument("required_scenarios: bound overflows");
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(bound)));
}

namespace {

// L with L L^T = covariance; eigen fallback for singular covariances.
Matrix covariance_factor(const NoiseModel& noise) {
  if (noise.kind == NoiseKind::kGaussianDiag) {
    return noise.covariance.diagonal().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  Eigen::LLT<Matrix> llt(noise.covariance);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(noise.covariance);
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

}  // namespace

ScenarioSet sample(const NoiseModel& noise, int horizon, int count,
                   std::uint64_t seed) {
  noise.validate();
  if (horizon < 1 || count < 1) {
    throw std::invalid_argument("sample: horizon and count must be >= 1");
  }
  const Eigen::Index nx = noise.dim();
  ScenarioSet out;
  out.seed = seed;
  out.horizon = horizon;
  out.w.resize(count, horizon * nx);

  Matrix factor;
  if (noise.kind != NoiseKind::kTable) factor = covariance_factor(noise);
  Vector z(nx);
  for (int i = 0; i < count; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    for (int t = 0; t < horizon; ++t) {
      auto block = out.w.row(i).segment(t * nx, nx);
      if (noise.kind == NoiseKind::kTable) {
        const auto pick = static_cast<Eigen::Index>(
            rng.below(static_cast<std::uint64_t>(noise.table.rows())));
        block = noise.table.row(pick);
      } else {
        for (Eigen::Index j = 0; j < nx; ++j) z(j) = rng.normal();
        block = (noise.mean + factor * z).transpose();
      }
    }
  }
  return out;
}

PredictionSet predict(const ScenarioSet& scenarios, const Matrix& gw) {
  if (gw.cols() != scenarios.w.cols()) {
    throw std::invalid_argument("predict: G_w columns != scenario length");
  }
  return PredictionSet{scenarios.w * gw.transpose()};
}

}  // namespace reachavoid
