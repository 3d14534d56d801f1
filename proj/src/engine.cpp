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

#include "reachavoid/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "reachavoid/random.hpp"

namespace reachavoid {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<int> default_grid(int k) {
  std::vector<int> grid;
  for (int g = 1; g <= std::min(100, k); ++g) grid.push_back(g);
  return grid;
}

PartitionModel build_partition(const Matrix& phi, const Matrix& f, int khat,
                               const KMeansOptions& options) {
  PartitionModel model = kmeans(phi, khat, options);
  model.buffers = compute_buffers(phi, model, f);
  return model;
}

class Fnv {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 1099511628211ULL;
    }
  }
  void matrix(const Matrix& m) {
    const std::int64_t shape[2] = {m.rows(), m.cols()};
    bytes(shape, sizeof shape);
    bytes(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
  }
  void ints(const std::vector<int>& v) {
    const std::int64_t n = static_cast<std::int64_t>(v.size());
    bytes(&n, sizeof n);
    bytes(v.data(), sizeof(int) * v.size());
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 1469598103934665603ULL;
};

}  // namespace

std::string to_string(KhatPolicyKind kind) {
  switch (kind) {
    case KhatPolicyKind::kFixed:
      return "fixed";
    case KhatPolicyKind::kKnee:
      return "knee";
    case KhatPolicyKind::kBudget:
      return "budget";
  }
  return "unknown";
}

KhatPolicy KhatPolicy::fixed(int khat) {
  return {KhatPolicyKind::kFixed, khat, 0.0, {}};
}

KhatPolicy KhatPolicy::knee(std::vector<int> grid) {
  return {KhatPolicyKind::kKnee, 0, 0.0, std::move(grid)};
}

KhatPolicy KhatPolicy::budget(double seconds, std::vector<int> grid) {
  return {KhatPolicyKind::kBudget, 0, seconds, std::move(grid)};
}

std::string OfflineArtifact::fingerprint() const {
  Fnv h;
  h.matrix(predictions.phi);
  h.matrix(partition.seeds);
  h.ints(partition.assignment);
  h.ints(partition.alpha);
  h.matrix(partition.buffers);
  h.matrix(constraint.f);
  h.matrix(constraint.h);
  return h.hex();
}

OfflineArtifact offline_prepare(const LtiSystem& system,
                                const ReachAvoidSpec& spec,
                                const InputBox& box, const NoiseModel& noise,
                                const PrepareOptions& options) {
  const auto start = Clock::now();
  system.validate();
  spec.validate();
  box.validate();
  noise.validate();
  if (options.scenarios < 1) {
    throw std::invalid_argument("offline_prepare: scenario count must be >= 1");
  }
  if (spec.safe.dim() != system.state_dim() ||
      noise.dim() != system.state_dim()) {
    throw std::invalid_argument("offline_prepare: set or noise dimension "
                                "differs from the state dimension");
  }
  if (box.size() != system.input_dim() * spec.horizon) {
    throw std::invalid_argument("offline_prepare: input box length != N nu");
  }

  OfflineArtifact art;
  art.system = system;
  art.spec = spec;
  art.box = box;
  art.noise = noise;
  art.stacked = stack(system, spec.horizon);
  art.constraint = build_trajectory_constraint(spec);
  art.scenarios = sample(noise, spec.horizon, options.scenarios, options.seed);
  art.predictions = predict(art.scenarios, art.stacked.gw);
  if (options.initial_noise) {
    options.initial_noise->validate();
    if (options.initial_noise->dim() != system.state_dim()) {
      throw std::invalid_argument("offline_prepare: initial noise dimension");
    }
    art.initial_offsets = sample(*options.initial_noise, 1, options.scenarios,
                                 derive_seed(options.seed, 1))
                              .w;
    art.predictions.phi += art.initial_offsets * art.stacked.gx.transpose();
  }
  art.big_m_margin = options.big_m_margin;
  art.policy = options.policy.kind;

  KMeansOptions km = options.kmeans;
  if (km.seed == 0) km.seed = derive_seed(options.seed, 2);
  const int k = options.scenarios;
  const auto& policy = options.policy;
  std::vector<int> grid = policy.grid.empty() ? default_grid(k) : policy.grid;
  if (policy.kind != KhatPolicyKind::kFixed) {
    if (grid.front() < 1 || grid.back() > k) {
      throw std::invalid_argument("offline_prepare: grid outside [1, K]");
    }
  }

  switch (policy.kind) {
    case KhatPolicyKind::kFixed:
      art.partition = build_partition(art.predictions.phi, art.constraint.f,
                                      policy.khat, km);
      break;
    case KhatPolicyKind::kKnee: {
      art.curve = wss_curve(art.predictions.phi, grid, km);
      art.partition = build_partition(art.predictions.phi, art.constraint.f,
                                      knee(art.curve), km);
      break;
    }
    case KhatPolicyKind::kBudget: {
      if (!options.calibration_x0) {
        throw std::invalid_argument(
            "offline_prepare: budget policy needs a calibration x0");
      }
      if (!(policy.budget_seconds > 0.0)) {
        throw std::invalid_argument("offline_prepare: budget must be > 0");
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && grid[i] <= grid[i - 1]) {
          throw std::invalid_argument("offline_prepare: grid must increase");
        }
      }
      // Cell counts are tried in increasing order; the last one whose
      // calibration solve fits the budget is kept (the first if none fits).
      bool have = false;
      for (int g : grid) {
        const auto t0 = Clock::now();
        PartitionModel model =
            build_partition(art.predictions.phi, art.constraint.f, g, km);
        const auto problem =
            build_partitioned(art.stacked, art.constraint,
                              *options.calibration_x0, model, box,
                              options.big_m_margin,
                              options.calibration_milp.lp.feas_tol);
        const SolveResult r = solve_milp(problem, options.calibration_milp);
        const double spent = seconds_since(t0);
        art.curve.khat.push_back(g);
        art.curve.wss.push_back(model.wss);
        art.curve.seconds.push_back(spent);
        const bool fits = spent <= policy.budget_seconds && r.optimal;
        if (fits || !have) art.partition = std::move(model);
        have = true;
        if (!fits) break;
      }
      break;
    }
  }
  art.partition.validate(k);
  art.prepare_seconds = seconds_since(start);
  return art;
}

OfflineArtifact repartition(const OfflineArtifact& artifact, int khat,
                            const KMeansOptions& options) {
  OfflineArtifact art = artifact;
  art.policy = KhatPolicyKind::kFixed;
  art.curve = {};
  art.partition = build_partition(art.predictions.phi, art.constraint.f, khat,
                                  options);
  return art;
}

PolicyEvaluation evaluate_policy(const OfflineArtifact& artifact,
                                 const Vector& x0, const Vector& inputs) {
  if (x0.size() != artifact.stacked.state_dim()) {
    throw std::invalid_argument("evaluate_policy: x0 has wrong dimension");
  }
  if (inputs.size() != artifact.stacked.gu.cols()) {
    throw std::invalid_argument("evaluate_policy: input length != N nu");
  }
  if (!artifact.box.contains(inputs)) {
    throw std::invalid_argument("evaluate_policy: input outside the box");
  }
  const Vector nominal =
      artifact.stacked.gx * x0 + artifact.stacked.gu * inputs;
  const Matrix& phi = artifact.predictions.phi;
  PolicyEvaluation out;
  out.success.assign(static_cast<std::size_t>(phi.rows()), 0);
  std::int64_t count = 0;
  for (Eigen::Index i = 0; i < phi.rows(); ++i) {
    const Vector x = nominal + phi.row(i).transpose();
    const bool ok = artifact.constraint.satisfied_by(x);
    out.success[i] = ok ? 1 : 0;
    count += ok;
  }
  out.p_hat = static_cast<double>(count) / static_cast<double>(phi.rows());
  return out;
}

VerificationReport verify(const OfflineArtifact& artifact, const Vector& x0,
                          const MilpOptions& options) {
  const auto start = Clock::now();
  if (x0.size() != artifact.stacked.state_dim()) {
    throw std::invalid_argument("verify: x0 has wrong dimension");
  }
  VerificationReport rep;
  rep.x0 = x0;
  rep.khat = artifact.khat();
  rep.scenarios = artifact.scenario_count();
  if (!contains(artifact.spec.safe, x0)) {
    rep.initial_state_safe = false;
    rep.inputs = Vector::Zero(artifact.box.size());
    rep.success.assign(static_cast<std::size_t>(rep.scenarios), 0);
    rep.online_seconds = seconds_since(start);
    return rep;
  }
  const auto problem = build_partitioned(
      artifact.stacked, artifact.constraint, x0, artifact.partition,
      artifact.box, artifact.big_m_margin, options.lp.feas_tol);
  const SolveResult r = solve_milp(problem, options);
  const PolicyEvaluation ev = evaluate_policy(artifact, x0, r.inputs);
  rep.p_khat_star = r.p_value;
  rep.p_hat = ev.p_hat;
  rep.inputs = r.inputs;
  rep.success = ev.success;
  rep.optimal = r.optimal;
  rep.bound = r.bound;
  rep.nodes = r.nodes;
  rep.lp_calls = r.lp_calls;
  rep.online_seconds = seconds_since(start);
  return rep;
}

VerificationReport evaluate_report(const OfflineArtifact& artifact,
                                   const Vector& x0, const Vector& inputs) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.x0 = x0;
  rep.khat = artifact.khat();
  rep.scenarios = artifact.scenario_count();
  rep.inputs = inputs;
  const PolicyEvaluation ev = evaluate_policy(artifact, x0, inputs);
  rep.initial_state_safe = contains(artifact.spec.safe, x0);
  if (rep.initial_state_safe) {
    rep.p_hat = ev.p_hat;
    rep.success = ev.success;
  } else {
    rep.success.assign(ev.success.size(), 0);
  }
  rep.bound = rep.p_hat;
  rep.online_seconds = seconds_since(start);
  return rep;
}

SolveResult solve_full(const OfflineArtifact& artifact, const Vector& x0,
                       const MilpOptions& options) {
  if (x0.size() != artifact.stacked.state_dim()) {
    throw std::invalid_argument("solve_full: x0 has wrong dimension");
  }
  if (!contains(artifact.spec.safe, x0)) {
    SolveResult r;
    r.inputs = Vector::Zero(artifact.box.size());
    r.z.assign(static_cast<std::size_t>(artifact.scenario_count()), 0);
    r.optimal = true;
    r.bound = 0.0;
    return r;
  }
  return solve_milp(build_full(artifact.stacked, artifact.constraint, x0,
                               artifact.predictions, artifact.box,
                               artifact.big_m_margin, options.lp.feas_tol),
                    options);
}

}  // namespace reachavoid
