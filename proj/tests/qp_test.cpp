// Copyright 2026 Priokin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "priokin/qp.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <cstring>
#include <limits>

#include "priokin/errors.hpp"
#include "support/oracles.hpp"
#include "support/test_rng.hpp"

namespace priokin {
namespace {

using testing::TestRng;

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd random_spd(TestRng& rng, int n, double ridge = 0.5) {
  const Eigen::MatrixXd M = rng.matrix(n, n, -1.0, 1.0);
  return M.transpose() * M + ridge * Eigen::MatrixXd::Identity(n, n);
}

TEST(SolveQp, UnconstrainedMatchesDirectSolve) {
  TestRng rng(201);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    const Eigen::MatrixXd H = random_spd(rng, n);
    const Eigen::VectorXd f = rng.vector(n, -2.0, 2.0);
    const QpSolution solution = solve_qp(QpProblem::unconstrained(H, f));
    ASSERT_EQ(solution.status, QpStatus::kOptimal);
    const Eigen::VectorXd expected = H.ldlt().solve(-f);
    EXPECT_LT((solution.x - expected).norm(), 1e-10);
    const double objective =
        0.5 * solution.x.dot(H * solution.x) + f.dot(solution.x);
    EXPECT_NEAR(solution.objective, objective, 1e-12);
  }
}

TEST(SolveQp, SingleInequalityProjectsOntoHalfspace) {
  QpProblem problem = QpProblem::unconstrained(
      Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
  problem.A_in = Eigen::RowVector2d(1.0, 1.0);
  problem.b_in = Eigen::VectorXd::Constant(1, 2.0);
  const QpSolution solution = solve_qp(problem);
  ASSERT_EQ(solution.status, QpStatus::kOptimal);
  EXPECT_LT((solution.x - Eigen::Vector2d(1.0, 1.0)).norm(), 1e-12);
}

TEST(SolveQp, EqualityConstraintsSatisfiedToMachinePrecision) {
  TestRng rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 5;
    const int m = 1 + trial % (n - 1);
    QpProblem problem =
        QpProblem::unconstrained(random_spd(rng, n), rng.vector(n, -1.0, 1.0));
    problem.A_eq = rng.matrix(m, n, -1.0, 1.0);
    problem.b_eq = rng.vector(m, -0.5, 0.5);
    const QpSolution solution = solve_qp(problem);
    ASSERT_EQ(solution.status, QpStatus::kOptimal);
    EXPECT_LT((problem.A_eq * solution.x - problem.b_eq)
                  .lpNorm<Eigen::Infinity>(),
              1e-12)
        << "trial " << trial;

    // KKT: the reduced gradient must vanish in the nullspace of A_eq.
    const Eigen::VectorXd gradient = problem.H * solution.x + problem.f;
    const Eigen::MatrixXd nullspace =
        Eigen::FullPivLU<Eigen::MatrixXd>(problem.A_eq).kernel();
    EXPECT_LT((nullspace.transpose() * gradient).lpNorm<Eigen::Infinity>(),
              1e-9);
  }
}

TEST(SolveQp, DuplicatedEqualityRowsAreAccepted) {
  TestRng rng(203);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    QpProblem problem =
        QpProblem::unconstrained(random_spd(rng, n), rng.vector(n, -1.0, 1.0));
    const Eigen::RowVectorXd row = rng.matrix(1, n, -1.0, 1.0);
    const double rhs = rng.uniform(-0.5, 0.5);
    problem.A_eq.resize(3, n);
    problem.A_eq << row, row, 2.0 * row;
    problem.b_eq.resize(3);
    problem.b_eq << rhs, rhs, 2.0 * rhs;
    const QpSolution solution = solve_qp(problem);
    ASSERT_EQ(solution.status, QpStatus::kOptimal);
    EXPECT_NEAR(row.dot(solution.x), rhs, 1e-12);
  }
}

TEST(SolveQp, InconsistentEqualitiesAreInfeasible) {
  QpProblem problem = QpProblem::unconstrained(
      Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
  problem.A_eq.resize(2, 2);
  problem.A_eq << 1.0, 0.0, 1.0, 0.0;
  problem.b_eq.resize(2);
  problem.b_eq << 0.0, 1.0;
  EXPECT_EQ(solve_qp(problem).status, QpStatus::kPrimalInfeasible);
}

TEST(SolveQp, ContradictoryInequalitiesAreInfeasible) {
  QpProblem problem = QpProblem::unconstrained(
      Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
  problem.A_in.resize(2, 2);
  problem.A_in << 1.0, 0.0, -1.0, 0.0;
  problem.b_in.resize(2);
  problem.b_in << 2.0, -1.0;
  EXPECT_EQ(solve_qp(problem).status, QpStatus::kPrimalInfeasible);
}

TEST(SolveQp, EmptyBoxIsInfeasible) {
  QpProblem problem = QpProblem::unconstrained(
      Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
  problem.lb = Eigen::Vector2d(1.0, 0.0);
  problem.ub = Eigen::Vector2d(0.5, 1.0);
  EXPECT_THROW(solve_qp(problem), InvalidArgumentError);
}

TEST(SolveQp, BoxProblemsMatchProjectedGradientOracle) {
  TestRng rng(204);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;
    QpProblem problem =
        QpProblem::unconstrained(random_spd(rng, n), rng.vector(n, -2.0, 2.0));
    problem.lb = rng.vector(n, -1.0, -0.1);
    problem.ub = rng.vector(n, 0.1, 1.0);
    if (trial % 3 == 0) {
      problem.lb(0) = -kInf;
      problem.ub(n - 1) = kInf;
    }
    const QpSolution solution = solve_qp(problem);
    ASSERT_EQ(solution.status, QpStatus::kOptimal) << "trial " << trial;
    const Eigen::VectorXd reference = testing::projected_gradient_box_qp(
        problem.H, problem.f, problem.lb, problem.ub);
    EXPECT_LT((solution.x - reference).lpNorm<Eigen::Infinity>(), 1e-6)
        << "trial " << trial;
  }
}

TEST(SolveQp, GeneralProblemsMatchEnumerationOracle) {
  TestRng rng(205);
  int infeasible_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    QpProblem problem =
        QpProblem::unconstrained(random_spd(rng, n), rng.vector(n, -1.0, 1.0));
    problem.A_in = rng.matrix(2 + trial % 3, n, -1.0, 1.0);
    problem.b_in = rng.vector(problem.A_in.rows(), -1.0, 1.0);
    problem.lb = Eigen::VectorXd::Constant(n, -1.5);
    problem.ub = Eigen::VectorXd::Constant(n, 1.5);
    const auto reference = testing::enumerated_qp_oracle(problem);
    const QpSolution solution = solve_qp(problem);
    if (!reference.has_value()) {
      ++infeasible_seen;
      EXPECT_EQ(solution.status, QpStatus::kPrimalInfeasible)
          << "trial " << trial;
      continue;
    }
    ASSERT_EQ(solution.status, QpStatus::kOptimal) << "trial " << trial;
    EXPECT_LT((solution.x - *reference).lpNorm<Eigen::Infinity>(), 1e-7)
        << "trial " << trial;
  }
  EXPECT_LT(infeasible_seen, 30);
}

TEST(SolveQp, MixedEqualityInequalityMatchesEnumerationOracle) {
  TestRng rng(206);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3;
    QpProblem problem =
        QpProblem::unconstrained(random_spd(rng, n), rng.vector(n, -1.0, 1.0));
    problem.A_eq = rng.matrix(1, n, -1.0, 1.0);
    problem.b_eq = rng.vector(1, -0.3, 0.3);
    problem.A_in = rng.matrix(2, n, -1.0, 1.0);
    problem.b_in = rng.vector(2, -0.8, 0.2);
    const auto reference = testing::enumerated_qp_oracle(problem);
    const QpSolution solution = solve_qp(problem);
    if (!reference.has_value()) {
      EXPECT_EQ(solution.status, QpStatus::kPrimalInfeasible);
      continue;
    }
    ASSERT_EQ(solution.status, QpStatus::kOptimal) << "trial " << trial;
    EXPECT_LT((solution.x - *reference).lpNorm<Eigen::Infinity>(), 1e-7)
        << "trial " << trial;
    EXPECT_LT((problem.A_eq * solution.x - problem.b_eq)
                  .lpNorm<Eigen::Infinity>(),
              1e-12);
  }
}

TEST(SolveQp, SolutionScalesWithProblemScaling) {
  TestRng rng(207);
  const int n = 4;
  const Eigen::MatrixXd H = random_spd(rng, n);
  const Eigen::VectorXd f = rng.vector(n, -1.0, 1.0);
  QpProblem problem = QpProblem::unconstrained(H, f);
  problem.A_in = rng.matrix(2, n, -1.0, 1.0);
  problem.b_in = rng.vector(2, -0.5, 0.5);
  const QpSolution base = solve_qp(problem);
  ASSERT_EQ(base.status, QpStatus::kOptimal);

  QpProblem scaled = problem;
  scaled.H *= 1e6;
  scaled.f *= 1e6;
  const QpSolution big = solve_qp(scaled);
  ASSERT_EQ(big.status, QpStatus::kOptimal);
  EXPECT_LT((base.x - big.x).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(SolveQp, RepeatedSolvesAreBitwiseIdentical) {
  TestRng rng(208);
  const int n = 5;
  QpProblem problem =
      QpProblem::unconstrained(random_spd(rng, n), rng.vector(n, -1.0, 1.0));
  problem.A_in = rng.matrix(3, n, -1.0, 1.0);
  problem.b_in = rng.vector(3, -0.5, 0.5);
  problem.lb = Eigen::VectorXd::Constant(n, -0.4);
  problem.ub = Eigen::VectorXd::Constant(n, 0.4);
  const QpSolution first = solve_qp(problem);
  ASSERT_EQ(first.status, QpStatus::kOptimal);
  for (int run = 0; run < 5; ++run) {
    const QpSolution again = solve_qp(problem);
    ASSERT_EQ(again.status, QpStatus::kOptimal);
    ASSERT_EQ(again.x.size(), first.x.size());
    EXPECT_EQ(std::memcmp(again.x.data(), first.x.data(),
                          sizeof(double) * first.x.size()),
              0);
  }
}

TEST(SolveQp, IterationCapReportsMaxIterations) {
  TestRng rng(209);
  const int n = 6;
  QpProblem problem =
      QpProblem::unconstrained(random_spd(rng, n), rng.vector(n, -5.0, 5.0));
  problem.lb = Eigen::VectorXd::Constant(n, -0.01);
  problem.ub = Eigen::VectorXd::Constant(n, 0.01);
  QpSettings settings;
  settings.max_iterations = 1;
  const QpSolution solution = solve_qp(problem, settings);
  EXPECT_EQ(solution.status, QpStatus::kMaxIterations);
}

TEST(SolveQp, ValidatesProblemShape) {
  QpProblem problem = QpProblem::unconstrained(
      Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());

  QpProblem asymmetric = problem;
  asymmetric.H(0, 1) = 0.5;
  EXPECT_THROW(solve_qp(asymmetric), InvalidArgumentError);

  QpProblem bad_f = problem;
  bad_f.f(0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve_qp(bad_f), InvalidArgumentError);

  QpProblem bad_dim = problem;
  bad_dim.A_in = Eigen::MatrixXd::Ones(1, 3);
  bad_dim.b_in = Eigen::VectorXd::Zero(1);
  EXPECT_THROW(solve_qp(bad_dim), DimensionError);

  QpProblem bad_rhs = problem;
  bad_rhs.A_in = Eigen::MatrixXd::Ones(2, 2);
  bad_rhs.b_in = Eigen::VectorXd::Zero(1);
  EXPECT_THROW(solve_qp(bad_rhs), DimensionError);

  QpProblem nan_bound = problem;
  nan_bound.lb = Eigen::Vector2d(0.0, std::numeric_limits<double>::quiet_NaN());
  nan_bound.ub = Eigen::Vector2d(1.0, 1.0);
  EXPECT_THROW(solve_qp(nan_bound), InvalidArgumentError);
}

TEST(SolveQp, ActiveBoundsReportedInSolutionAreTight) {
  TestRng rng(210);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3;
    QpProblem problem = QpProblem::unconstrained(
        Eigen::MatrixXd::Identity(n, n), rng.vector(n, 2.0, 5.0));
    problem.lb = Eigen::VectorXd::Constant(n, -1.0);
    problem.ub = Eigen::VectorXd::Constant(n, 1.0);
    const QpSolution solution = solve_qp(problem);
    ASSERT_EQ(solution.status, QpStatus::kOptimal);
    // Unconstrained optimum is -f with every entry below -2, so every
    // variable must sit exactly on its lower bound.
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(solution.x(i), -1.0);
    }
  }
}

}  // namespace
}  // namespace priokin
