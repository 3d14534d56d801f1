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
#include "reachavoid/partition.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "reachavoid/random.hpp"

namespace reachavoid {

void PartitionModel::validate(Eigen::Index num_points) const {
  if (static_cast<Eigen::Index>(assignment.size()) != num_points) {
    throw std::invalid_argument("PartitionModel: assignment length mismatch");
  }
  if (static_cast<Eigen::Index>(alpha.size()) != khat()) {
    throw std::invalid_argument("PartitionModel: alpha length != khat");
  }
  std::vector<int> counts(alpha.size(), 0);
  for (int c : assignment) {
    if (c < 0 || c >= khat()) {
      throw std::invalid_argument("PartitionModel: cell index out of range");
    }
    ++counts[static_cast<std::size_t>(c)];
  }
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (counts[j] != alpha[j]) {
      throw std::invalid_argument("PartitionModel: alpha disagrees with "
                                  "assignment at cell " + std::to_string(j));
    }
    if (alpha[j] < 1) {
      throw std::invalid_argument("PartitionModel: empty cell " +
                                  std::to_string(j));
    }
  }
}

namespace {

using ColMatrix = Matrix;  // d x K, one point per column

// Nearest seed for every point; returns the number of changed labels.
// Candidates come from the expanded form |p|^2 - 2 p.s + |s|^2 evaluated as
// one matrix product. When the two smallest expanded values are closer than
// their rounding error the point falls back to an exact scan, so labels and
// distances are the ones an exact scan would produce.
int nearest_seed(const ColMatrix& pts, const ColMatrix& seeds,
                 std::vector<int>& label, Vector& dist) {
  const Eigen::Index k = pts.cols();
  const Eigen::Index m = seeds.cols();
  const Vector pn = pts.colwise().squaredNorm().transpose();
  const Vector sn = seeds.colwise().squaredNorm().transpose();
  const double smax = sn.maxCoeff();
  Matrix cross = seeds.transpose() * pts;  // m x K
  std::vector<int> next(static_cast<std::size_t>(k), 0);
  dist.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    double first = std::numeric_limits<double>::infinity(), second = first;
    Eigen::Index arg = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double d = sn(j) - 2.0 * cross(j, i);
      if (d < first) {
        second = first;
        first = d;
        arg = j;
      } else if (d < second) {
        second = d;
      }
    }
    const double slack = 1e-12 * (pn(i) + smax) * static_cast<double>(pts.rows() + 4);
    if (m > 1 && !(second - first > slack)) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < m; ++j) {
        const double d = (pts.col(i) - seeds.col(j)).squaredNorm();
        if (d < best) {
          best = d;
          arg = j;
        }
      }
    }
    next[i] = static_cast<int>(arg);
    dist(i) = (pts.col(i) - seeds.col(arg)).squaredNorm();
  }
  int changed = 0;
  for (Eigen::Index i = 0; i < k; ++i) changed += next[i] != label[i];
  label.swap(next);
  return changed;
}

ColMatrix plus_plus_init(const ColMatrix& pts, int khat, Rng& rng) {
  const Eigen::Index k = pts.cols();
  ColMatrix seeds(pts.rows(), khat);
  seeds.col(0) = pts.col(static_cast<Eigen::Index>(
      rng.below(static_cast<std::uint64_t>(k))));
  Vector d2 = (pts.colwise() - seeds.col(0)).colwise().squaredNorm();
  for (int j = 1; j < khat; ++j) {
    const double total = d2.sum();
    Eigen::Index pick = k - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        acc += d2(i);
        if (acc > target && d2(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(k)));
    }
    seeds.col(j) = pts.col(pick);
    d2 = d2.cwiseMin((pts.colwise() - seeds.col(j)).colwise().squaredNorm());
  }
  return seeds;
}

struct LloydResult {
  ColMatrix seeds;
  std::vector<int> label;
  double wss = 0.0;
  int iterations = 0;
  bool converged = false;
};

std::vector<int> counts_of(const std::vector<int>& label, int khat) {
  std::vector<int> counts(static_cast<std::size_t>(khat), 0);
  for (int c : label) ++counts[static_cast<std::size_t>(c)];
  return counts;
}

// Moves the farthest-from-seed points (from cells with spare members) into
// empty cells.
void repair_empty(const ColMatrix& pts, ColMatrix& seeds,
                  std::vector<int>& label, Vector& dist) {
  const int khat = static_cast<int>(seeds.cols());
  auto counts = counts_of(label, khat);
  for (int j = 0; j < khat; ++j) {
    if (counts[j] > 0) continue;
    Eigen::Index far = -1;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      if (counts[label[i]] < 2) continue;
      if (far < 0 || dist(i) > dist(far)) far = i;
    }
    if (far < 0) {
      throw std::logic_error("kmeans: cannot repair empty cell");
    }
    --counts[label[far]];
    label[far] = j;
    ++counts[j];
    dist(far) = 0.0;
    seeds.col(j) = pts.col(far);
  }
}

void update_centroids(const ColMatrix& pts, ColMatrix& seeds,
                      const std::vector<int>& label) {
  const auto counts = counts_of(label, static_cast<int>(seeds.cols()));
  seeds.setZero();
  for (Eigen::Index i = 0; i < pts.cols(); ++i) seeds.col(label[i]) += pts.col(i);
  for (Eigen::Index j = 0; j < seeds.cols(); ++j) {
    seeds.col(j) /= static_cast<double>(counts[j]);
  }
}

LloydResult lloyd(const ColMatrix& pts, ColMatrix seeds, int max_iter) {
  LloydResult r;
  r.label.assign(static_cast<std::size_t>(pts.cols()), -1);
  Vector dist;
  nearest_seed(pts, seeds, r.label, dist);
  for (r.iterations = 0; r.iterations < max_iter;) {
    repair_empty(pts, seeds, r.label, dist);
    update_centroids(pts, seeds, r.label);
    ++r.iterations;
    if (nearest_seed(pts, seeds, r.label, dist) == 0) {
      r.converged = true;
      break;
    }
  }
  if (!r.converged) {
    repair_empty(pts, seeds, r.label, dist);
    update_centroids(pts, seeds, r.label);
  }
  r.seeds = std::move(seeds);
  r.wss = 0.0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    r.wss += (pts.col(i) - r.seeds.col(r.label[i])).squaredNorm();
  }
  return r;
}

}  // namespace

PartitionModel kmeans(const Matrix& points, int khat,
                      const KMeansOptions& options) {
  const Eigen::Index k = points.rows();
  if (k == 0) throw std::invalid_argument("kmeans: no points");
  if (khat < 1) throw std::invalid_argument("kmeans: khat must be >= 1");
  if (khat > k) throw std::invalid_argument("kmeans: khat exceeds point count");
  if (options.restarts < 1 || options.max_iter < 1) {
    throw std::invalid_argument("kmeans: restarts and max_iter must be >= 1");
  }
  require_finite(points, "kmeans points");

  PartitionModel model;
  if (khat == k) {
    model.seeds = points;
    model.assignment.resize(static_cast<std::size_t>(k));
    std::iota(model.assignment.begin(), model.assignment.end(), 0);
    model.alpha.assign(static_cast<std::size_t>(k), 1);
    model.wss = 0.0;
    return model;
  }

  // Work on centred data so a common translation of the input changes nothing
  // but the final shift.
  const Vector mean = points.colwise().mean().transpose();
  const ColMatrix pts = (points.rowwise() - mean.transpose()).transpose();

  LloydResult best;
  bool have = false;
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(options.seed, static_cast<std::uint64_t>(r));
    LloydResult run = lloyd(pts, plus_plus_init(pts, khat, rng), options.max_iter);
    if (!have || run.wss < best.wss) {
      best = std::move(run);
      have = true;
    }
  }
  model.seeds = (best.seeds.colwise() + mean).transpose();
  model.assignment = std::move(best.label);
  model.alpha = counts_of(model.assignment, khat);
  model.iterations = best.iterations;
  model.converged = best.converged;
  model.wss = wss(points, model);
  return model;
}

CellAssignment assign(const Matrix& points, const Matrix& seeds) {
  if (seeds.rows() == 0) throw std::invalid_argument("assign: no seeds");
  if (seeds.cols() != points.cols()) {
    throw std::invalid_argument("assign: seed dimension mismatch");
  }
  CellAssignment out;
  out.cell.assign(static_cast<std::size_t>(points.rows()), -1);
  Vector dist;
  nearest_seed(points.transpose(), seeds.transpose(), out.cell, dist);
  out.alpha = counts_of(out.cell, static_cast<int>(seeds.rows()));
  return out;
}

double wss(const Matrix& points, const PartitionModel& model) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - model.seeds.row(model.assignment[i])).squaredNorm();
  }
  return total;
}

Matrix compute_buffers(const Matrix& points, const PartitionModel& model,
                       const Matrix& f) {
  if (f.cols() != points.cols()) {
    throw std::invalid_argument("compute_buffers: F columns != point dim");
  }
  model.validate(points.rows());
  const Matrix fp = points * f.transpose();       // K x L
  const Matrix fs = model.seeds * f.transpose();  // khat x L
  Matrix buffers = Matrix::Constant(model.khat(), f.rows(),
                                    -std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int j = model.assignment[i];
    for (Eigen::Index l = 0; l < f.rows(); ++l) {
      buffers(j, l) = std::max(buffers(j, l), fp(i, l) - fs(j, l));
    }
  }
  return buffers;
}

WssCurve wss_curve(const Matrix& points, const std::vector<int>& grid,
                   const KMeansOptions& options) {
  if (grid.empty()) throw std::invalid_argument("wss_curve: empty grid");
  WssCurve curve;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("wss_curve: grid must be strictly increasing");
    }
    const auto start = std::chrono::steady_clock::now();
    const auto model = kmeans(points, grid[i], options);
    const std::chrono::duration<double> spent =
        std::chrono::steady_clock::now() - start;
    curve.khat.push_back(grid[i]);
    curve.wss.push_back(model.wss);
    curve.seconds.push_back(spent.count());
  }
  return curve;
}

int knee(const WssCurve& curve) {
  const std::size_t n = curve.khat.size();
  if (n < 3 || curve.wss.size() != n) {
    throw std::invalid_argument("knee: need at least three curve points");
  }
  const double x0 = curve.khat.front(), x1 = curve.khat.back();
  double ylo = curve.wss.front(), yhi = curve.wss.front();
  for (double w : curve.wss) {
    ylo = std::min(ylo, w);
    yhi = std::max(yhi, w);
  }
  if (yhi - ylo <= 0.0 || x1 <= x0) return curve.khat[1];
  auto nx = [&](std::size_t i) { return (curve.khat[i] - x0) / (x1 - x0); };
  auto ny = [&](std::size_t i) { return (curve.wss[i] - ylo) / (yhi - ylo); };
  // Chord through the first and last normalised points.
  const double dx = nx(n - 1) - nx(0), dy = ny(n - 1) - ny(0);
  const double len = std::hypot(dx, dy);
  auto below = [&](std::size_t i) {
    return (dx * (ny(0) - ny(i)) - dy * (nx(0) - nx(i))) / len;
  };
  std::size_t best = 1;
  double best_dist = below(1);
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double d = below(i);
    if (d > best_dist + 1e-12) {
      best = i;
      best_dist = d;
    }
  }
  return curve.khat[best];
}

}  // namespace reachavoid
