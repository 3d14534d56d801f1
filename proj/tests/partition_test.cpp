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

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "reachavoid/scenarios.hpp"

namespace reachavoid {
namespace {

Matrix column(std::vector<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
  return m;
}

TEST(KMeans, SingletonCellsWhenKhatEqualsK) {
  std::mt19937_64 rng(1);
  const Matrix pts = oracle::random_matrix(rng, 7, 3);
  const auto m = kmeans(pts, 7);
  EXPECT_EQ(m.seeds, pts);
  EXPECT_EQ(m.wss, 0.0);
  for (int a : m.alpha) EXPECT_EQ(a, 1);
}

TEST(KMeans, OneDimensionalTwoClusters) {
  const Matrix pts = column({0, 0.1, 10, 10.2});
  const double brute = oracle::brute_force_min_wss(pts, 2);
  EXPECT_NEAR(brute, 0.025, 1e-12);
  const auto m = kmeans(pts, 2);
  EXPECT_NEAR(m.wss, brute, 1e-12);
  const double lo = std::min(m.seeds(0, 0), m.seeds(1, 0));
  const double hi = std::max(m.seeds(0, 0), m.seeds(1, 0));
  EXPECT_NEAR(lo, 0.05, 1e-12);
  EXPECT_NEAR(hi, 10.1, 1e-12);
}

TEST(KMeans, SingleClusterIsCentroid) {
  std::mt19937_64 rng(2);
  const Matrix pts = oracle::random_matrix(rng, 30, 4);
  const auto m = kmeans(pts, 1);
  const Eigen::RowVectorXd mean = pts.colwise().mean();
  EXPECT_LE((m.seeds.row(0) - mean).cwiseAbs().maxCoeff(), 1e-12);
  const double total = (pts.rowwise() - mean).squaredNorm();
  EXPECT_NEAR(m.wss, total, 1e-10);
}

TEST(KMeans, MatchesBruteForceOnTinyInputs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 15; ++trial) {
    const Matrix pts = oracle::random_matrix(rng, 7, 2);
    const int khat = 2 + trial % 2;
    const auto m = kmeans(pts, khat, {.restarts = 20, .max_iter = 100, .seed = 5});
    EXPECT_NEAR(m.wss, oracle::brute_force_min_wss(pts, khat), 1e-9);
  }
}

TEST(KMeans, RejectsBadKhat) {
  const Matrix pts = column({1, 2, 3});
  EXPECT_THROW(kmeans(pts, 0), std::invalid_argument);
  EXPECT_THROW(kmeans(pts, 4), std::invalid_argument);
  EXPECT_THROW(kmeans(Matrix(0, 2), 1), std::invalid_argument);
}

TEST(KMeans, OutputInvariants) {
  std::mt19937_64 rng(4);
  const Matrix pts = oracle::random_matrix(rng, 300, 5);
  for (int khat : {2, 7, 25}) {
    const auto m = kmeans(pts, khat, {.restarts = 3, .max_iter = 100, .seed = 9});
    ASSERT_NO_THROW(m.validate(pts.rows()));
    int sum = 0;
    for (int a : m.alpha) sum += a;
    EXPECT_EQ(sum, 300);
    EXPECT_NEAR(m.wss, wss(pts, m), 1e-10);
    if (m.converged) {
      const auto a = assign(pts, m.seeds);
      EXPECT_EQ(a.cell, m.assignment);
      // Seeds are the centroids of their cells.
      Matrix sums = Matrix::Zero(khat, 5);
      for (Eigen::Index i = 0; i < 300; ++i) sums.row(m.assignment[i]) += pts.row(i);
      for (int j = 0; j < khat; ++j) {
        EXPECT_LE((sums.row(j) / m.alpha[j] - m.seeds.row(j)).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(KMeans, DuplicatePointsNeverLeaveEmptyCells) {
  Matrix pts = Matrix::Zero(20, 2);
  pts.bottomRows(3).setOnes();
  const auto m = kmeans(pts, 5, {.restarts = 2, .max_iter = 50, .seed = 1});
  EXPECT_NO_THROW(m.validate(20));
}

TEST(KMeans, DeterministicForSeed) {
  std::mt19937_64 rng(5);
  const Matrix pts = oracle::random_matrix(rng, 200, 3);
  const auto a = kmeans(pts, 6, {.restarts = 4, .max_iter = 100, .seed = 77});
  const auto b = kmeans(pts, 6, {.restarts = 4, .max_iter = 100, .seed = 77});
  EXPECT_EQ(a.seeds, b.seeds);
  EXPECT_EQ(a.assignment, b.assignment);
}

// A common shift of every point shifts the seeds and keeps the labels.
TEST(KMeans, TranslationInvariance) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix pts = oracle::random_matrix(rng, 150, 4);
    const Eigen::RowVectorXd shift = oracle::random_matrix(rng, 1, 4, -50, 50);
    const Matrix moved = pts.rowwise() + shift;
    const KMeansOptions opt{.restarts = 3, .max_iter = 100, .seed = 13};
    const auto a = kmeans(pts, 5, opt);
    const auto b = kmeans(moved, 5, opt);
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_LE(((a.seeds.rowwise() + shift) - b.seeds).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Assign, TieGoesToLowestIndex) {
  const auto a = assign(column({0.5}), column({0, 1}));
  EXPECT_EQ(a.cell[0], 0);
  const auto b = assign(column({0.5}), column({1, 0}));
  EXPECT_EQ(b.cell[0], 0);
}

TEST(Assign, SeedsEqualPointsIsIdentity) {
  std::mt19937_64 rng(7);
  const Matrix pts = oracle::random_matrix(rng, 12, 3);
  const auto a = assign(pts, pts);
  for (int i = 0; i < 12; ++i) EXPECT_EQ(a.cell[i], i);
  for (int c : a.alpha) EXPECT_EQ(c, 1);
  EXPECT_THROW(assign(pts, Matrix(0, 3)), std::invalid_argument);
}

TEST(Assign, MatchesExhaustiveScan) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix pts = oracle::random_matrix(rng, 100, 3);
    const Matrix seeds = oracle::random_matrix(rng, 6, 3);
    const auto a = assign(pts, seeds);
    int total = 0;
    for (int c : a.alpha) total += c;
    EXPECT_EQ(total, 100);
    for (Eigen::Index i = 0; i < 100; ++i) {
      int best = 0;
      double bd = 1e300;
      for (int j = 0; j < 6; ++j) {
        double d = 0;
        for (int c = 0; c < 3; ++c) d += (pts(i, c) - seeds(j, c)) * (pts(i, c) - seeds(j, c));
        if (d < bd) { bd = d; best = j; }
      }
      EXPECT_EQ(a.cell[i], best);
    }
  }
}

TEST(Wss, ClosedForms) {
  PartitionModel single{column({0}), {0, 0}, {2}, {}, 0.0};
  EXPECT_DOUBLE_EQ(wss(column({-1, 1}), single), 2.0);
  PartitionModel singletons{column({-1, 1}), {0, 1}, {1, 1}, {}, 0.0};
  EXPECT_DOUBLE_EQ(wss(column({-1, 1}), singletons), 0.0);
}

TEST(Buffers, ZeroWhenPointsSitOnSeeds) {
  std::mt19937_64 rng(9);
  const Matrix pts = oracle::random_matrix(rng, 5, 3);
  const auto m = kmeans(pts, 5);
  const Matrix f = oracle::random_matrix(rng, 4, 3);
  EXPECT_EQ(compute_buffers(pts, m, f), Matrix::Zero(5, 4));
}

TEST(Buffers, OneDimensionalCell) {
  PartitionModel m{column({1}), {0, 0}, {2}, {}, 0.0};
  const Matrix b = compute_buffers(column({0, 2}), m, Matrix::Ones(1, 1));
  EXPECT_DOUBLE_EQ(b(0, 0), 1.0);
}

TEST(Buffers, MatchesDoubleLoopAndNonnegativeForCentroids) {
  std::mt19937_64 rng(10);
  const Matrix pts = oracle::random_matrix(rng, 200, 4);
  const auto m = kmeans(pts, 8, {.restarts = 2, .max_iter = 100, .seed = 3});
  const Matrix f = oracle::random_matrix(rng, 9, 4);
  const Matrix b = compute_buffers(pts, m, f);
  for (int j = 0; j < 8; ++j) {
    for (int l = 0; l < 9; ++l) {
      double best = -1e300;
      for (Eigen::Index i = 0; i < 200; ++i) {
        if (m.assignment[i] != j) continue;
        best = std::max(best, f.row(l).dot(pts.row(i) - m.seeds.row(j)));
      }
      EXPECT_DOUBLE_EQ(b(j, l), best);
      EXPECT_GE(b(j, l), -1e-12);
    }
  }
}

TEST(Buffers, RejectsEmptyCellAndBadShape) {
  PartitionModel m{column({0, 5}), {0, 0}, {2, 0}, {}, 0.0};
  EXPECT_THROW(compute_buffers(column({0, 1}), m, Matrix::Ones(1, 1)),
               std::invalid_argument);
  PartitionModel ok{column({0}), {0}, {1}, {}, 0.0};
  EXPECT_THROW(compute_buffers(column({0}), ok, Matrix::Ones(1, 2)),
               std::invalid_argument);
}

TEST(WssCurve, EndpointsAndMonotoneTrend) {
  std::mt19937_64 rng(11);
  const Matrix pts = oracle::random_matrix(rng, 60, 3);
  const auto full = wss_curve(pts, {60});
  ASSERT_EQ(full.wss.size(), 1u);
  EXPECT_EQ(full.wss[0], 0.0);
  const auto one = wss_curve(pts, {1});
  EXPECT_NEAR(one.wss[0], (pts.rowwise() - pts.colwise().mean()).squaredNorm(), 1e-10);
  std::vector<int> grid;
  for (int k = 1; k <= 30; ++k) grid.push_back(k);
  const auto curve = wss_curve(pts, grid, {.restarts = 10, .max_iter = 100, .seed = 2});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_LE(curve.wss[i], curve.wss[i - 1] * 1.01) << "khat " << grid[i];
  }
  EXPECT_THROW(wss_curve(pts, {}), std::invalid_argument);
  EXPECT_THROW(wss_curve(pts, {3, 2}), std::invalid_argument);
}

TEST(Knee, HandComputedCurve) {
  const WssCurve c{{1, 2, 3, 4}, {100, 10, 9, 8}, {}};
  EXPECT_EQ(knee(c), 2);
}

TEST(Knee, LinearCurvePicksFirstInterior) {
  const WssCurve c{{1, 2, 3, 4, 5}, {10, 8, 6, 4, 2}, {}};
  EXPECT_EQ(knee(c), 2);
  const WssCurve flat{{2, 4, 6}, {1, 1, 1}, {}};
  EXPECT_EQ(knee(flat), 4);
  EXPECT_THROW(knee(WssCurve{{1, 2}, {2, 1}, {}}), std::invalid_argument);
}

}  // namespace
}  // namespace reachavoid
