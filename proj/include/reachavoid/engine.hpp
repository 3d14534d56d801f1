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
#include <optional>
#include <string>
#include <vector>

#include "reachavoid/milp.hpp"
#include "reachavoid/partition.hpp"
#include "reachavoid/scenarios.hpp"
#include "reachavoid/sets.hpp"
#include "reachavoid/system.hpp"

namespace reachavoid {

enum class KhatPolicyKind { kFixed, kKnee, kBudget };

std::string to_string(KhatPolicyKind kind);

/// How the number of cells is chosen offline.
struct KhatPolicy {
  KhatPolicyKind kind = KhatPolicyKind::kFixed;
  int khat = 0;                // kFixed
  double budget_seconds = 0;  // kBudget
  std::vector<int> grid;       // kKnee / kBudget; empty means 1..min(100, K)

  static KhatPolicy fixed(int khat);
  static KhatPolicy knee(std::vector<int> grid = {});
  static KhatPolicy budget(double seconds, std::vector<int> grid = {});
};

struct PrepareOptions {
  int scenarios = 0;
  std::uint64_t seed = 0;
  KhatPolicy policy;
  KMeansOptions kmeans;  // its seed is derived from `seed` when left at 0
  double big_m_margin = 1.0;
  // kBudget: initial state used to time the calibration solves.
  std::optional<Vector> calibration_x0;
  MilpOptions calibration_milp;
  // When set, the initial state is x0 + e with e drawn from this model and the
  // prediction for scenario i becomes G_x e_i + G_w W_i.
  std::optional<NoiseModel> initial_noise;
};

/// Everything the online phase needs; none of it depends on x0.
struct OfflineArtifact {
  LtiSystem system;
  ReachAvoidSpec spec;
  InputBox box;
  NoiseModel noise;
  StackedSystem stacked;
  TrajectoryConstraint constraint;
  ScenarioSet scenarios;
  Matrix initial_offsets;  // K x nx, empty unless the initial state is noisy
  PredictionSet predictions;
  PartitionModel partition;
  KhatPolicyKind policy = KhatPolicyKind::kFixed;
  WssCurve curve;  // filled by the knee and budget policies
  double big_m_margin = 1.0;
  double prepare_seconds = 0.0;

  int khat() const { return static_cast<int>(partition.khat()); }
  int scenario_count() const { return static_cast<int>(predictions.phi.rows()); }

  /// 64-bit FNV-1a digest of the predictions and the partition, in hex.
  std::string fingerprint() const;
};

OfflineArtifact offline_prepare(const LtiSystem& system,
                                const ReachAvoidSpec& spec,
                                const InputBox& box, const NoiseModel& noise,
                                const PrepareOptions& options);

/// Rebuilds a partition for a different cell count on the same predictions.
OfflineArtifact repartition(const OfflineArtifact& artifact, int khat,
                            const KMeansOptions& options);

struct PolicyEvaluation {
  double p_hat = 0.0;
  std::vector<int> success;  // per original scenario
};

/// Fraction of the K scenarios whose trajectories satisfy every row exactly.
PolicyEvaluation evaluate_policy(const OfflineArtifact& artifact,
                                 const Vector& x0, const Vector& inputs);

struct VerificationReport {
  Vector x0;
  double p_hat = 0.0;
  double p_khat_star = 0.0;
  Vector inputs;
  std::vector<int> success;
  bool initial_state_safe = true;
  bool optimal = true;
  double bound = 0.0;
  std::int64_t nodes = 0;
  std::int64_t lp_calls = 0;
  double online_seconds = 0.0;
  int khat = 0;
  int scenarios = 0;
};

/// Solves the partitioned program at x0 and evaluates its input on all
/// scenarios. An unsafe x0 yields zeros without a solve.
VerificationReport verify(const OfflineArtifact& artifact, const Vector& x0,
                          const MilpOptions& options = {});

/// Evaluation-only report for a given input sequence.
VerificationReport evaluate_report(const OfflineArtifact& artifact,
                                   const Vector& x0, const Vector& inputs);

/// Full program with one binary per scenario. Exponential; for small K.
SolveResult solve_full(const OfflineArtifact& artifact, const Vector& x0,
                       const MilpOptions& options = {});

}  // namespace reachavoid
