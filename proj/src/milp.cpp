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

#include "reachavoid/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace reachavoid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntegral = 1e-9;

// Largest and smallest value of row . U over the box.
double support(const Eigen::Ref<const Eigen::RowVectorXd>& row,
               const InputBox& box) {
  return row.dot(box.center()) + row.cwiseAbs().dot(box.halfwidth());
}

double infimum(const Eigen::Ref<const Eigen::RowVectorXd>& row,
               const InputBox& box) {
  return row.dot(box.center()) - row.cwiseAbs().dot(box.halfwidth());
}

void require_bounded(const InputBox& box, const char* who) {
  box.validate();
  if (!box.bounded()) {
    throw std::invalid_argument(std::string(who) + ": input box is unbounded");
  }
}

// h - F (G_x x0 + p_i) for every row p_i of points.
Matrix trajectory_rhs(const StackedSystem& stacked,
                      const TrajectoryConstraint& constraint, const Vector& x0,
                      const Matrix& points) {
  if (x0.size() != stacked.state_dim()) {
    throw std::invalid_argument("MILP build: x0 has wrong dimension");
  }
  if (constraint.f.cols() != stacked.gx.rows() ||
      points.cols() != stacked.gx.rows()) {
    throw std::invalid_argument("MILP build: trajectory dimension mismatch");
  }
  const Vector nominal = constraint.f * (stacked.gx * x0);
  Matrix rhs = -(points * constraint.f.transpose());
  rhs.rowwise() += (constraint.h - nominal).transpose();
  return rhs;
}

MilpProblem assemble(const StackedSystem& stacked,
                     const TrajectoryConstraint& constraint, Matrix rhs,
                     Vector weights, const InputBox& box, double margin,
                     double feas_tol, std::int64_t denominator) {
  require_bounded(box, "MILP build");
  if (box.size() != stacked.gu.cols()) {
    throw std::invalid_argument("MILP build: input box has wrong length");
  }
  MilpProblem p;
  p.input_map = constraint.f * stacked.gu;
  p.block_rhs = std::move(rhs);
  p.tightening = default_tightening(p.input_map, feas_tol);
  p.big_m = compute_big_m(p.input_map,
                          p.block_rhs.rowwise() - p.tightening.transpose(),
                          box, margin);
  p.weights = std::move(weights);
  p.box = box;
  p.denominator = denominator;
  p.validate();
  return p;
}

struct Node {
  double bound;
  std::int64_t id;
  std::vector<signed char> fix;  // -1 free, else the fixed value
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

}  // namespace

void MilpProblem::validate() const {
  const auto blocks = num_blocks();
  const auto rows = num_rows();
  if (block_rhs.cols() != rows || big_m.rows() != blocks ||
      big_m.cols() != rows || tightening.size() != rows ||
      weights.size() != blocks) {
    throw std::invalid_argument("MilpProblem: inconsistent shapes");
  }
  require_bounded(box, "MilpProblem");
  if (box.size() != num_inputs()) {
    throw std::invalid_argument("MilpProblem: box length != input count");
  }
  require_finite(input_map, "MilpProblem input_map");
  require_finite(block_rhs, "MilpProblem block_rhs");
  require_finite(big_m, "MilpProblem big_m");
  require_finite(weights, "MilpProblem weights");
  if ((weights.array() < 0.0).any() || (tightening.array() < 0.0).any() ||
      denominator < 0) {
    throw std::invalid_argument("MilpProblem: negative weight or tightening");
  }
  for (Eigen::Index l = 0; l < rows; ++l) {
    const double top = support(input_map.row(l), box);
    for (Eigen::Index i = 0; i < blocks; ++i) {
      const double need = top - (block_rhs(i, l) - tightening(l));
      if (big_m(i, l) < need - 1e-12 * std::max(1.0, std::abs(need))) {
        throw std::invalid_argument("MilpProblem: big-M too small at block " +
                                    std::to_string(i) + " row " +
                                    std::to_string(l));
      }
    }
  }
}

std::vector<int> MilpProblem::satisfied_blocks(const Vector& inputs) const {
  const Vector y = matvec(input_map, inputs);
  std::vector<int> z(static_cast<std::size_t>(num_blocks()), 0);
  for (Eigen::Index i = 0; i < num_blocks(); ++i) {
    z[i] = ((y.transpose() - block_rhs.row(i)).array() <= 0.0).all() ? 1 : 0;
  }
  return z;
}

double MilpProblem::value_of(const std::vector<int>& z) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < num_blocks(); ++i) {
    if (z[static_cast<std::size_t>(i)]) sum += weights(i);
  }
  if (denominator <= 0) return sum;
  const double d = static_cast<double>(denominator);
  return static_cast<double>(std::llround(sum * d)) / d;
}

Matrix compute_big_m(const Matrix& input_map, const Matrix& rhs,
                     const InputBox& box, double margin) {
  require_bounded(box, "compute_big_m");
  if (input_map.cols() != box.size() || rhs.cols() != input_map.rows()) {
    throw std::invalid_argument("compute_big_m: shape mismatch");
  }
  if (!(margin >= 0.0)) {
    throw std::invalid_argument("compute_big_m: margin must be >= 0");
  }
  Matrix m(rhs.rows(), rhs.cols());
  for (Eigen::Index l = 0; l < rhs.cols(); ++l) {
    const double top = support(input_map.row(l), box);
    for (Eigen::Index i = 0; i < rhs.rows(); ++i) {
      m(i, l) = std::max(0.0, top - rhs(i, l)) + margin;
    }
  }
  return m;
}

Matrix compute_big_m(const StackedSystem& stacked,
                     const TrajectoryConstraint& constraint, const Vector& x0,
                     const Matrix& points, const InputBox& box, double margin) {
  return compute_big_m(constraint.f * stacked.gu,
                       trajectory_rhs(stacked, constraint, x0, points), box,
                       margin);
}

Vector default_tightening(const Matrix& input_map, double feas_tol) {
  return 4.0 * feas_tol *
         (Vector::Ones(input_map.rows()) +
          input_map.cwiseAbs().rowwise().sum());
}

MilpProblem build_full(const StackedSystem& stacked,
                       const TrajectoryConstraint& constraint,
                       const Vector& x0, const PredictionSet& predictions,
                       const InputBox& box, double margin, double feas_tol) {
  const auto k = predictions.phi.rows();
  if (k < 1) throw std::invalid_argument("build_full: no scenarios");
  return assemble(stacked, constraint,
                  trajectory_rhs(stacked, constraint, x0, predictions.phi),
                  Vector::Constant(k, 1.0 / static_cast<double>(k)), box,
                  margin, feas_tol, static_cast<std::int64_t>(k));
}

MilpProblem build_partitioned(const StackedSystem& stacked,
                              const TrajectoryConstraint& constraint,
                              const Vector& x0, const PartitionModel& model,
                              const InputBox& box, double margin,
                              double feas_tol) {
  const auto k = static_cast<Eigen::Index>(model.assignment.size());
  const long long total =
      std::accumulate(model.alpha.begin(), model.alpha.end(), 0LL);
  if (total != k) {
    throw std::invalid_argument("build_partitioned: alpha does not sum to K");
  }
  if (model.buffers.rows() != model.khat() ||
      model.buffers.cols() != constraint.num_rows()) {
    throw std::invalid_argument("build_partitioned: buffers have wrong shape");
  }
  Matrix rhs = trajectory_rhs(stacked, constraint, x0, model.seeds) -
               model.buffers;
  Vector weights(model.khat());
  for (Eigen::Index j = 0; j < model.khat(); ++j) {
    weights(j) = static_cast<double>(model.alpha[j]) / static_cast<double>(k);
  }
  return assemble(stacked, constraint, std::move(rhs), std::move(weights), box,
                  margin, feas_tol, static_cast<std::int64_t>(k));
}

SolveResult solve_milp(const MilpProblem& problem, const MilpOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  problem.validate();
  if (!(options.gap_tol > 0.0) || options.node_limit < 1) {
    throw std::invalid_argument("solve_milp: bad options");
  }
  const auto nu = problem.num_inputs();
  const auto blocks = problem.num_blocks();
  const auto rows = problem.num_rows();
  const InputBox& box = problem.box;

  // Rows that no input in the box can violate are dropped; a block with a row
  // that every input violates can never be satisfied.
  Vector top(rows), bottom(rows);
  for (Eigen::Index l = 0; l < rows; ++l) {
    top(l) = support(problem.input_map.row(l), box);
    bottom(l) = infimum(problem.input_map.row(l), box);
  }
  const Matrix tight =
      problem.block_rhs.rowwise() - problem.tightening.transpose();
  std::vector<signed char> preset(static_cast<std::size_t>(blocks), -1);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> active;
  for (Eigen::Index i = 0; i < blocks; ++i) {
    std::vector<Eigen::Index> mine;
    bool hopeless = false;
    for (Eigen::Index l = 0; l < rows; ++l) {
      if (bottom(l) > tight(i, l)) hopeless = true;
      if (top(l) > tight(i, l)) mine.push_back(l);
    }
    if (hopeless || problem.weights(i) == 0.0) {
      preset[i] = 0;
    } else if (mine.empty()) {
      preset[i] = 1;
    } else {
      for (auto l : mine) active.emplace_back(i, l);
    }
  }

  LpProblem lp;
  lp.objective = Vector::Zero(nu + blocks);
  lp.objective.tail(blocks) = problem.weights;
  lp.constraints = Matrix::Zero(static_cast<Eigen::Index>(active.size()),
                                nu + blocks);
  lp.rhs.resize(lp.constraints.rows());
  for (Eigen::Index r = 0; r < lp.constraints.rows(); ++r) {
    const auto [i, l] = active[r];
    lp.constraints.row(r).head(nu) = problem.input_map.row(l);
    lp.constraints(r, nu + i) = problem.big_m(i, l);
    lp.rhs(r) = tight(i, l) + problem.big_m(i, l);
  }
  lp.lower.resize(nu + blocks);
  lp.upper.resize(nu + blocks);
  lp.lower.head(nu) = box.lower;
  lp.upper.head(nu) = box.upper;
  lp.lower.tail(blocks).setZero();
  lp.upper.tail(blocks).setOnes();
  LpSolver solver(lp, options.lp);

  // Incumbents are scored on rows tightened by half the LP margin, so an LP
  // point with z integral always scores at least its LP value.
  const Matrix half = problem.block_rhs.rowwise() -
                      (0.5 * problem.tightening).transpose();
  auto score = [&](const Vector& u, std::vector<int>* z) {
    const Vector y = problem.input_map * u;
    double value = 0.0;
    for (Eigen::Index i = 0; i < blocks; ++i) {
      const bool ok = ((y.transpose() - half.row(i)).array() <= 0.0).all();
      if (z) (*z)[i] = ok ? 1 : 0;
      if (ok) value += problem.weights(i);
    }
    return value;
  };
  auto clamp = [&](const Vector& u) {
    return u.cwiseMax(box.lower).cwiseMin(box.upper).eval();
  };

  SolveResult result;
  Vector best_u = box.center();
  double incumbent = score(best_u, nullptr);
  const double quantum =
      problem.denominator > 0 ? 1.0 / static_cast<double>(problem.denominator) : 0.0;
  const double step = std::max(quantum - 1e-7, options.gap_tol);
  auto worth = [&](double bound) { return bound >= incumbent + step; };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t next_id = 0;
  open.push({kInf, next_id++, preset});
  Vector lower = lp.lower, upper = lp.upper;
  bool stopped = false;
  while (!open.empty()) {
    if (!worth(open.top().bound)) break;
    if (result.nodes >= options.node_limit) {
      stopped = true;
      break;
    }
    Node node = open.top();
    open.pop();
    ++result.nodes;
    for (Eigen::Index i = 0; i < blocks; ++i) {
      const signed char f = node.fix[i];
      lower(nu + i) = f < 0 ? 0.0 : f;
      upper(nu + i) = f < 0 ? 1.0 : f;
    }
    const LpSolution sol = solver.solve(lower, upper);
    ++result.lp_calls;
    if (sol.status != LpStatus::kOptimal) {
      if (result.nodes == 1) {
        throw std::logic_error("solve_milp: root relaxation " +
                               to_string(sol.status));
      }
      continue;
    }
    const Vector u = clamp(sol.point.head(nu));
    const double value = score(u, nullptr);
    if (value > incumbent) {
      incumbent = value;
      best_u = u;
    }
    if (!worth(sol.value)) continue;

    Eigen::Index pick = -1;
    double frac = kIntegral;
    for (Eigen::Index i = 0; i < blocks; ++i) {
      if (node.fix[i] >= 0) continue;
      const double zi = sol.point(nu + i);
      const double f = std::min(zi, 1.0 - zi);
      if (f > frac) {
        frac = f;
        pick = i;
      }
    }
    if (pick < 0) continue;
    Node one{sol.value, next_id++, node.fix};
    one.fix[pick] = 1;
    node.fix[pick] = 0;
    open.push(std::move(one));
    open.push({sol.value, next_id++, std::move(node.fix)});
  }

  result.inputs = best_u;
  result.z = problem.satisfied_blocks(best_u);
  result.p_value = problem.value_of(result.z);
  result.optimal = !stopped;
  result.bound = result.p_value;
  if (stopped) {
    double open_bound = open.empty() ? 0.0 : open.top().bound;
    if (!std::isfinite(open_bound)) open_bound = problem.weights.sum();
    result.bound = std::max(result.p_value, open_bound);
  }
  result.lp_iterations = solver.total_iterations();
  result.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

void write_lp_format(std::ostream& out, const MilpProblem& problem) {
  problem.validate();
  const auto nu = problem.num_inputs();
  const auto blocks = problem.num_blocks();
  out.precision(17);
  out << "\\ reachavoid big-M program: " << nu << " inputs, " << blocks
      << " binaries\nMaximize\n obj:";
  for (Eigen::Index i = 0; i < blocks; ++i) {
    out << (i ? " + " : " ") << problem.weights(i) << " z" << i;
  }
  out << "\nSubject To\n";
  for (Eigen::Index i = 0; i < blocks; ++i) {
    for (Eigen::Index l = 0; l < problem.num_rows(); ++l) {
      out << " c" << i << "_" << l << ":";
      for (Eigen::Index k = 0; k < nu; ++k) {
        const double a = problem.input_map(l, k);
        if (a != 0.0) out << (a < 0 ? " - " : " + ") << std::abs(a) << " u" << k;
      }
      out << " + " << problem.big_m(i, l) << " z" << i << " <= "
          << problem.block_rhs(i, l) - problem.tightening(l) +
                 problem.big_m(i, l)
          << "\n";
    }
  }
  out << "Bounds\n";
  for (Eigen::Index k = 0; k < nu; ++k) {
    out << " " << problem.box.lower(k) << " <= u" << k
        << " <= " << problem.box.upper(k) << "\n";
  }
  out << "Binary\n";
  for (Eigen::Index i = 0; i < blocks; ++i) out << " z" << i << "\n";
  out << "End\n";
}

}  // namespace reachavoid
