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

#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace reachavoid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpProblem make(std::vector<double> c, std::vector<std::vector<double>> a,
               std::vector<double> b, std::vector<double> lo,
               std::vector<double> hi) {
  LpProblem p;
  p.objective = vector_from(c);
  p.constraints = a.empty() ? Matrix(0, p.objective.size())
                            : matrix_from_rows(a);
  p.rhs = vector_from(b);
  p.lower = vector_from(lo);
  p.upper = vector_from(hi);
  return p;
}

double max_violation(const LpProblem& p, const Vector& x) {
  double v = 0.0;
  if (p.constraints.rows() > 0) {
    v = std::max(v, (p.constraints * x - p.rhs).maxCoeff());
  }
  v = std::max(v, (p.lower - x).maxCoeff());
  v = std::max(v, (x - p.upper).maxCoeff());
  return v;
}

TEST(SolveLp, SingleVariableCap) {
  const auto sol = solve_lp(make({1}, {{1}}, {1}, {0}, {10}));
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.value, 1.0, 1e-9);
  EXPECT_NEAR(sol.point(0), 1.0, 1e-9);
}

TEST(SolveLp, SymmetricPair) {
  const auto sol = solve_lp(make({1, 1}, {{1, 1}}, {1}, {0, 0}, {1, 1}));
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.value, 1.0, 1e-9);
}

TEST(SolveLp, InfeasibleRows) {
  const auto p = make({1, 0}, {{1, 0}, {-1, 0}}, {1, -2}, {-kInf, -kInf},
                      {kInf, kInf});
  EXPECT_EQ(solve_lp(p).status, LpStatus::kInfeasible);
}

TEST(SolveLp, InfeasibleBoundsAgainstRow) {
  const auto p = make({1, 1}, {{1, 1}}, {-1}, {0, 0}, {1, 1});
  EXPECT_EQ(solve_lp(p).status, LpStatus::kInfeasible);
}

TEST(SolveLp, Unbounded) {
  const auto p = make({1, 1}, {{1, -1}}, {1}, {0, 0}, {kInf, kInf});
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::kUnbounded);
  EXPECT_LE(max_violation(p, sol.point), 1e-7);
}

TEST(SolveLp, FreeVariableWithoutRowsIsUnbounded) {
  const auto p = make({0, 1}, {}, {}, {0, -kInf}, {1, kInf});
  EXPECT_EQ(solve_lp(p).status, LpStatus::kUnbounded);
}

TEST(SolveLp, ZeroObjectiveFindsFeasiblePoint) {
  const auto p = make({0, 0}, {{1, 1}, {-1, 0}}, {2, -0.5}, {-kInf, 0},
                      {kInf, 3});
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_DOUBLE_EQ(sol.value, 0.0);
  EXPECT_LE(max_violation(p, sol.point), 1e-7);
}

TEST(SolveLp, NegativeLowerBoundsAndMinimisation) {
  // minimize x + 2y  ==  maximize -x - 2y, with x,y in [-3, 4], x + y >= -1.
  const auto p = make({-1, -2}, {{-1, -1}}, {1}, {-3, -3}, {4, 4});
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.value, -(2.0 - 6.0), 1e-9);  // x = 2, y = -3
}

TEST(SolveLp, RejectsMalformedProblems) {
  auto p = make({1}, {{1}}, {1}, {2}, {1});
  EXPECT_THROW(solve_lp(p), std::invalid_argument);
  p = make({1}, {{1}}, {1}, {0}, {1});
  p.rhs = Vector::Zero(2);
  EXPECT_THROW(solve_lp(p), std::invalid_argument);
  p = make({1}, {{std::numeric_limits<double>::quiet_NaN()}}, {1}, {0}, {1});
  EXPECT_THROW(solve_lp(p), std::invalid_argument);
}

TEST(SolveLp, DegenerateCyclingExample) {
  // Beale's classic cycling instance (as a maximisation).
  const auto p = make({0.75, -150, 0.02, -6},
                      {{0.25, -60, -0.04, 9}, {0.5, -90, -0.02, 3}, {0, 0, 1, 0}},
                      {0, 0, 1}, {0, 0, 0, 0}, {kInf, kInf, kInf, kInf});
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.value, 0.05, 1e-9);
}

// Random bounded 6-variable LPs against exhaustive vertex enumeration.
TEST(SolveLp, MatchesVertexEnumeration) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 6, m = 8;
    LpProblem p;
    p.objective = oracle::random_matrix(rng, n, 1);
    p.constraints = oracle::random_matrix(rng, m, n);
    p.rhs = oracle::random_matrix(rng, m, 1, -0.5, 2.0);
    p.lower = Vector::Constant(n, -2.0);
    p.upper = Vector::Constant(n, 2.0);
    if (trial % 7 == 3) p.lower(0) = -kInf;  // still bounded by rows? maybe not
    const auto sol = solve_lp(p);
    if (p.lower(0) == -kInf) {
      // Oracle needs a bounded polytope; only check feasibility here.
      if (sol.status != LpStatus::kInfeasible) {
        EXPECT_LE(max_violation(p, sol.point), 1e-7);
      }
      continue;
    }
    const auto want = oracle::lp_vertex_enumeration(p);
    if (!want) {
      EXPECT_EQ(sol.status, LpStatus::kInfeasible) << "trial " << trial;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(sol.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(sol.value, *want, 1e-8) << "trial " << trial;
    EXPECT_LE(max_violation(p, sol.point), 1e-7);
    ++optimal;
  }
  EXPECT_GT(optimal, 30);
}

TEST(SolveLp, WarmResolveMatchesColdSolve) {
  std::mt19937_64 rng(99);
  const Eigen::Index n = 8, m = 40;
  LpProblem p;
  p.objective = oracle::random_matrix(rng, n, 1);
  p.constraints = oracle::random_matrix(rng, m, n);
  p.rhs = oracle::random_matrix(rng, m, 1, 0.1, 1.0);
  p.lower = Vector::Constant(n, -1.0);
  p.upper = Vector::Constant(n, 1.0);
  LpSolver warm(p);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Vector lo = p.lower, hi = p.upper;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double a = unit(rng) * 2 - 1, b = unit(rng) * 2 - 1;
      lo(k) = std::min(a, b);
      hi(k) = std::max(a, b);
    }
    const auto got = warm.solve(lo, hi);
    LpProblem fresh = p;
    fresh.lower = lo;
    fresh.upper = hi;
    const auto want = solve_lp(fresh);
    ASSERT_EQ(got.status, want.status);
    if (got.status == LpStatus::kOptimal) {
      EXPECT_NEAR(got.value, want.value, 1e-8);
      EXPECT_LE(max_violation(fresh, got.point), 1e-7);
    }
  }
}

TEST(SolveLp, ManyRowsFewColumns) {
  std::mt19937_64 rng(5);
  const Eigen::Index n = 4, m = 2000;
  LpProblem p;
  p.objective = oracle::random_matrix(rng, n, 1);
  p.constraints = oracle::random_matrix(rng, m, n);
  p.rhs = oracle::random_matrix(rng, m, 1, 0.5, 1.5);
  p.lower = Vector::Constant(n, -kInf);
  p.upper = Vector::Constant(n, kInf);
  const auto sol = solve_lp(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_LE(max_violation(p, sol.point), 1e-7);
  // Any feasible perturbation toward the objective must leave the polytope.
  const Vector step = sol.point + 1e-4 * p.objective.normalized();
  EXPECT_GT((p.constraints * step - p.rhs).maxCoeff(), 0.0);
}

}  // namespace
}  // namespace reachavoid
