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
#include <vector>

#include "reachavoid/linops.hpp"

namespace reachavoid {

/// Voronoi partition of a point set: seeds, cell membership, per-cell counts
/// (importance rates) and per-cell constraint buffers.
struct PartitionModel {
  Matrix seeds;                 // khat x d
  std::vector<int> assignment;  // cell of each point
  std::vector<int> alpha;       // |cell j|
  Matrix buffers;               // khat x L; empty until compute_buffers
  double wss = 0.0;
  int iterations = 0;
  bool converged = true;

  Eigen::Index khat() const { return seeds.rows(); }

  /// Throws std::invalid_argument unless the counts match the assignment,
  /// sum to num_points and no cell is empty.
  void validate(Eigen::Index num_points) const;
};

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 100;
  std::uint64_t seed = 0;
};

/// Lloyd iterations from k-means++ starts; the lowest-WSS restart wins (ties
/// to the earlier restart). Points are rows. Cells that empty out are reseeded
/// with the point farthest from its current seed.
PartitionModel kmeans(const Matrix& points, int khat,
                      const KMeansOptions& options = {});

struct CellAssignment {
  std::vector<int> cell;
  std::vector<int> alpha;
};

/// Nearest seed in the Euclidean norm, ties to the lowest seed index.
CellAssignment assign(const Matrix& points, const Matrix& seeds);

/// Within-cluster sum of squares of the model's assignment and seeds.
double wss(const Matrix& points, const PartitionModel& model);

/// buffers(j, l) = max over points p in cell j of F_l (p - seed_j).
Matrix compute_buffers(const Matrix& points, const PartitionModel& model,
                       const Matrix& f);

struct WssCurve {
  std::vector<int> khat;
  std::vector<double> wss;
  std::vector<double> seconds;
};

/// One best-of-restarts k-means run per grid value. The grid must be strictly
/// increasing.
WssCurve wss_curve(const Matrix& points, const std::vector<int>& grid,
                   const KMeansOptions& options = {});

/// Grid value whose normalised (khat, wss) point lies farthest below the
/// chord joining the first and last points. A straight curve yields the first
/// interior value. Needs at least three points.
int knee(const WssCurve& curve);

}  // namespace reachavoid
