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
#include "reachavoid/sets.hpp"

#include <stdexcept>
#include <cmath>
#include <string>

namespace reachavoid {

void Polytope::validate() const {
  if (f.rows() != h.size()) {
    throw std::invalid_argument("Polytope: f rows != h length");
  }
  require_finite(f, "Polytope f");
  require_finite(h, "Polytope h");
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (f.row(i).cwiseAbs().maxCoeff() == 0.0) {
      throw std::invalid_argument("Polytope: row " + std::to_string(i) +
                                  " of f is all zero");
    }
  }
}

Polytope Polytope::box(const Vector& lo, const Vector& hi) {
  if (lo.size() != hi.size()) {
    throw std::invalid_argument("Polytope::box: bound lengths differ");
  }
  const Eigen::Index n = lo.size();
  Polytope p;
  p.f = Matrix::Zero(2 * n, n);
  p.h = Vector(2 * n);
  p.f.topRows(n) = Matrix::Identity(n, n);
  p.f.bottomRows(n) = -Matrix::Identity(n, n);
  p.h.head(n) = hi;
  p.h.tail(n) = -lo;
  return p;
}

bool contains(const Polytope& p, const Vector& x) {
  if (x.size() != p.dim()) {
    throw std::invalid_argument("contains: point dimension mismatch");
  }
  for (Eigen::Index i = 0; i < p.f.rows(); ++i) {
    if (p.f.row(i).dot(x) > p.h(i)) return false;
  }
  return true;
}

void ReachAvoidSpec::validate() const {
  safe.validate();
  target.validate();
  if (horizon < 1) {
    throw std::invalid_argument("ReachAvoidSpec: horizon must be >= 1");
  }
  if (safe.dim() != target.dim()) {
    throw std::invalid_argument("ReachAvoidSpec: safe/target dims differ");
  }
}

InputBox InputBox::repeat(const Vector& lo, const Vector& hi, int horizon) {
  if (lo.size() != hi.size() || horizon < 1) {
    throw std::invalid_argument("InputBox::repeat: bad arguments");
  }
  InputBox box;
  box.lower = lo.replicate(horizon, 1);
  box.upper = hi.replicate(horizon, 1);
  box.validate();
  return box;
}

bool InputBox::contains(const Vector& u) const {
  if (u.size() != lower.size()) {
    throw std::invalid_argument("InputBox::contains: dimension mismatch");
  }
  return (u.array() >= lower.array()).all() &&
         (u.array() <= upper.array()).all();
}

void InputBox::validate() const {
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("InputBox: bound lengths differ");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower(i)) || std::isnan(upper(i)) || lower(i) > upper(i)) {
      throw std::invalid_argument("InputBox: lower > upper at " +
                                  std::to_string(i));
    }
  }
}

bool TrajectoryConstraint::satisfied_by(const Vector& trajectory) const {
  if (trajectory.size() != f.cols()) {
    throw std::invalid_argument(
        "TrajectoryConstraint: trajectory length mismatch");
  }
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (f.row(i).dot(trajectory) > h(i)) return false;
  }
  return true;
}

TrajectoryConstraint build_trajectory_constraint(const ReachAvoidSpec& spec) {
  spec.validate();
  const Eigen::Index nx = spec.safe.dim();
  const Eigen::Index n = spec.horizon;
  const Eigen::Index ls = spec.safe.num_rows();
  const Eigen::Index lt = spec.target.num_rows();
  TrajectoryConstraint out;
  out.f = Matrix::Zero((n - 1) * ls + lt, n * nx);
  out.h = Vector((n - 1) * ls + lt);
  for (Eigen::Index t = 0; t + 1 < n; ++t) {
    out.f.block(t * ls, t * nx, ls, nx) = spec.safe.f;
    out.h.segment(t * ls, ls) = spec.safe.h;
  }
  out.f.block((n - 1) * ls, (n - 1) * nx, lt, nx) = spec.target.f;
  out.h.tail(lt) = spec.target.h;
  return out;
}

}  // namespace reachavoid
