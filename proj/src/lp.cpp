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

#include "reachavoid/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace reachavoid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPhaseOneTol = 1e-10;
constexpr double kDegenerateStep = 1e-12;

}  // namespace

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

void LpProblem::validate() const {
  const auto n = objective.size();
  if (constraints.cols() != n && constraints.rows() > 0) {
    throw std::invalid_argument("LpProblem: constraint columns != variables");
  }
  if (constraints.rows() != rhs.size()) {
    throw std::invalid_argument("LpProblem: constraint rows != rhs length");
  }
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("LpProblem: bound vectors have wrong length");
  }
  require_finite(objective, "LpProblem objective");
  require_finite(constraints, "LpProblem constraints");
  require_finite(rhs, "LpProblem rhs");
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::isnan(lower(k)) || std::isnan(upper(k)) || lower(k) == kInf ||
        upper(k) == -kInf) {
      throw std::invalid_argument("LpProblem: malformed bound on variable " +
                                  std::to_string(k));
    }
    if (lower(k) > upper(k)) {
      throw std::invalid_argument("LpProblem: lower > upper on variable " +
                                  std::to_string(k));
    }
  }
}

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  LpSolver solver(problem, options);
  return solver.solve();
}

LpSolver::LpSolver(LpProblem problem, LpOptions options)
    : problem_(std::move(problem)), options_(options) {
  if (problem_.constraints.rows() == 0) {
    problem_.constraints.resize(0, problem_.objective.size());
  }
  problem_.validate();
  if (options_.feas_tol <= 0 || options_.opt_tol <= 0) {
    throw std::invalid_argument("LpOptions: tolerances must be positive");
  }
  n_ = problem_.num_variables();
  m_struct_ = problem_.constraints.rows();

  upper_row_.assign(static_cast<std::size_t>(n_), -1);
  lower_row_.assign(static_cast<std::size_t>(n_), -1);
  Eigen::Index total = m_struct_;
  for (Eigen::Index k = 0; k < n_; ++k) {
    if (std::isfinite(problem_.upper(k))) upper_row_[k] = total++;
    if (std::isfinite(problem_.lower(k))) lower_row_[k] = total++;
  }
  rows_ = Matrix::Zero(total, n_);
  costs_ = Vector::Zero(total);
  rows_.topRows(m_struct_) = problem_.constraints;
  costs_.head(m_struct_) = problem_.rhs;
  for (Eigen::Index k = 0; k < n_; ++k) {
    if (upper_row_[k] >= 0) rows_(upper_row_[k], k) = 1.0;
    if (lower_row_[k] >= 0) rows_(lower_row_[k], k) = -1.0;
  }
  set_bound_costs(problem_.lower, problem_.upper);
  row_norms_ = rows_.rowwise().norm().cwiseMax(1e-12);

  art_sign_.resize(n_);
  for (Eigen::Index k = 0; k < n_; ++k) {
    art_sign_(k) = problem_.objective(k) >= 0 ? 1.0 : -1.0;
  }
}

void LpSolver::set_bound_costs(const Vector& lower, const Vector& upper) {
  for (Eigen::Index k = 0; k < n_; ++k) {
    if (upper_row_[k] >= 0) costs_(upper_row_[k]) = upper(k);
    if (lower_row_[k] >= 0) costs_(lower_row_[k]) = -lower(k);
  }
}

LpSolution LpSolver::solve() { return solve(problem_.lower, problem_.upper); }

LpSolution LpSolver::solve(const Vector& lower, const Vector& upper) {
  if (lower.size() != n_ || upper.size() != n_) {
    throw std::invalid_argument("LpSolver::solve: bound vectors wrong length");
  }
  for (Eigen::Index k = 0; k < n_; ++k) {
    if (std::isfinite(lower(k)) != (lower_row_[k] >= 0) ||
        std::isfinite(upper(k)) != (upper_row_[k] >= 0)) {
      throw std::invalid_argument(
          "LpSolver::solve: bound finiteness pattern changed on variable " +
          std::to_string(k));
    }
  }
  LpSolution result;
  for (Eigen::Index k = 0; k < n_; ++k) {
    if (lower(k) > upper(k) + options_.feas_tol) return result;
  }
  set_bound_costs(lower, upper);

  if (n_ == 0) {
    if (m_struct_ == 0 || costs_.minCoeff() >= -options_.feas_tol) {
      result.status = LpStatus::kOptimal;
      result.point = Vector(0);
    }
    return result;
  }
  if (dual_infeasible_) return resolve_dual_infeasible(0);

  int iterations = 0;
  if (!has_basis_) {
    cold_start();
    if (problem_.objective.cwiseAbs().maxCoeff() > 0) {
      if (run_phase(true, iterations) == PhaseResult::kUnbounded) {
        throw LpNumericalError("LpSolver: phase one reported unbounded",
                               iterations);
      }
      const double scale = 1.0 + problem_.objective.cwiseAbs().maxCoeff();
      if (phase_one_objective() > 1e-9 * scale) {
        dual_infeasible_ = true;
        total_iterations_ += iterations;
        return resolve_dual_infeasible(iterations);
      }
    }
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (basis_[i] >= rows_.rows()) xb_(i) = 0.0;
    }
    has_basis_ = true;
  }

  const PhaseResult phase = run_phase(false, iterations);
  total_iterations_ += iterations;
  result.iterations = iterations;
  if (phase == PhaseResult::kUnbounded) {
    // Unbounded dual certifies an empty primal feasible set.
    result.status = LpStatus::kInfeasible;
    return result;
  }

  Vector cb(n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    cb(i) = basis_[i] < rows_.rows() ? costs_(basis_[i]) : 0.0;
  }
  result.point = binv_.transpose() * cb;
  result.status = LpStatus::kOptimal;
  result.value = problem_.objective.dot(result.point);
  return result;
}

LpSolution LpSolver::resolve_dual_infeasible(int iterations) {
  // Primal is infeasible or unbounded; a zero objective separates the two.
  if (!feasibility_) {
    LpProblem zero = problem_;
    zero.objective.setZero();
    feasibility_ = std::make_unique<LpSolver>(std::move(zero), options_);
  }
  Vector lower(n_), upper(n_);
  for (Eigen::Index k = 0; k < n_; ++k) {
    lower(k) = lower_row_[k] >= 0 ? -costs_(lower_row_[k]) : -kInf;
    upper(k) = upper_row_[k] >= 0 ? costs_(upper_row_[k]) : kInf;
  }
  LpSolution feasible = feasibility_->solve(lower, upper);
  LpSolution result;
  result.iterations = iterations + feasible.iterations;
  if (feasible.status == LpStatus::kOptimal) {
    result.status = LpStatus::kUnbounded;
    result.value = kInf;
    result.point = std::move(feasible.point);
  }
  return result;
}

void LpSolver::cold_start() {
  basis_.resize(static_cast<std::size_t>(n_));
  for (Eigen::Index i = 0; i < n_; ++i) basis_[i] = rows_.rows() + i;
  binv_ = art_sign_.asDiagonal();
  xb_ = problem_.objective.cwiseAbs();
  since_refactor_ = 0;
}

void LpSolver::refactor() {
  Matrix b(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    const Eigen::Index col = basis_[i];
    if (col < rows_.rows()) {
      b.col(i) = rows_.row(col).transpose();
    } else {
      b.col(i).setZero();
      b(col - rows_.rows(), i) = art_sign_(col - rows_.rows());
    }
  }
  binv_ = b.partialPivLu().inverse();
  if (!binv_.allFinite()) {
    throw LpNumericalError("LpSolver: singular basis on refactor",
                           static_cast<int>(total_iterations_));
  }
  xb_ = binv_ * problem_.objective;
  for (Eigen::Index i = 0; i < n_; ++i) {
    if (xb_(i) < 0) xb_(i) = 0.0;
    if (!has_basis_ || basis_[i] < rows_.rows()) continue;
    xb_(i) = 0.0;
  }
  since_refactor_ = 0;
}

double LpSolver::phase_one_objective() const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < n_; ++i) {
    if (basis_[i] >= rows_.rows()) total += xb_(i);
  }
  return total;
}

LpSolver::PhaseResult LpSolver::run_phase(bool phase_one, int& iterations) {
  const Eigen::Index total = rows_.rows();
  const double price_tol = phase_one ? kPhaseOneTol : options_.feas_tol;
  bool bland = false;
  int stalled = 0;
  Vector cb(n_);
  std::vector<char> is_basic(static_cast<std::size_t>(total), 0);

  while (true) {
    if (iterations >= options_.max_iterations) {
      throw LpNumericalError("LpSolver: iteration limit reached", iterations);
    }
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Eigen::Index col = basis_[i];
      if (col >= total) {
        cb(i) = phase_one ? 1.0 : 0.0;
      } else {
        cb(i) = phase_one ? 0.0 : costs_(col);
      }
    }
    const Vector pi = binv_.transpose() * cb;
    Vector reduced = -(rows_ * pi);
    if (!phase_one) reduced += costs_;

    std::fill(is_basic.begin(), is_basic.end(), 0);
    for (Eigen::Index col : basis_) {
      if (col < total) is_basic[static_cast<std::size_t>(col)] = 1;
    }

    Eigen::Index entering = -1;
    double best = 0.0;
    for (Eigen::Index j = 0; j < total; ++j) {
      if (is_basic[static_cast<std::size_t>(j)] || reduced(j) >= -price_tol) {
        continue;
      }
      if (bland) {
        entering = j;
        break;
      }
      const double score = reduced(j) / row_norms_(j);
      if (score < best) {
        best = score;
        entering = j;
      }
    }
    if (entering < 0) {
      if (since_refactor_ > 0) {
        refactor();
        continue;
      }
      return PhaseResult::kOptimal;
    }

    const Vector d = binv_ * rows_.row(entering).transpose();
    const double piv_tol = 1e-11 + 1e-9 * d.cwiseAbs().maxCoeff();
    Eigen::Index leave = -1;
    double theta = kInf;
    for (Eigen::Index i = 0; i < n_; ++i) {
      double ratio;
      const bool artificial = basis_[i] >= total;
      if (artificial && !phase_one) {
        if (std::abs(d(i)) <= piv_tol) continue;
        ratio = 0.0;
      } else {
        if (d(i) <= piv_tol) continue;
        ratio = std::max(xb_(i), 0.0) / d(i);
      }
      if (leave < 0 || ratio < theta - 1e-12 * (1.0 + theta)) {
        theta = ratio;
        leave = i;
      } else if (ratio <= theta + 1e-12 * (1.0 + theta)) {
        const bool prefer =
            bland ? basis_[i] < basis_[leave]
                  : std::abs(d(i)) > std::abs(d(leave));
        if (prefer) {
          theta = std::min(theta, ratio);
          leave = i;
        }
      }
    }
    if (leave < 0) {
      if (since_refactor_ > 0) {
        refactor();
        continue;
      }
      return PhaseResult::kUnbounded;
    }

    // Pivot: entering column replaces basis_[leave].
    const double pivot = d(leave);
    xb_ -= theta * d;
    xb_(leave) = theta;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (xb_(i) < 0) xb_(i) = 0.0;
    }
    const Eigen::RowVectorXd pivot_row = binv_.row(leave) / pivot;
    binv_.noalias() -= d * pivot_row;
    binv_.row(leave) = pivot_row;
    basis_[leave] = entering;

    ++iterations;
    ++since_refactor_;
    if (theta <= kDegenerateStep) {
      if (++stalled >= options_.stall_threshold) bland = true;
    } else {
      stalled = 0;
      bland = false;
    }
    if (since_refactor_ >= options_.refactor_interval) refactor();
  }
}

}  // namespace reachavoid
