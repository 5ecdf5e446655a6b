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

#ifndef PRIOKIN_QP_HPP_
#define PRIOKIN_QP_HPP_

#include <Eigen/Core>

#include <limits>

namespace priokin {

// Convex quadratic program
//
//   minimize    0.5 x' H x + f' x
//   subject to  A_eq x  = b_eq
//               A_in x >= b_in
//               lb <= x <= ub
//
// H must be symmetric positive semidefinite. Empty matrices (zero rows)
// mean "no constraints of that kind"; infinite bound entries mean
// "unbounded on that side".
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd f;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_in;
  Eigen::VectorXd b_in;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;

  // Problem with only the objective set; bounds default to +-inf.
  static QpProblem unconstrained(const Eigen::MatrixXd& H,
                                 const Eigen::VectorXd& f);

  int num_vars() const { return static_cast<int>(H.rows()); }

  // Throws DimensionError / InvalidArgumentError on inconsistent sizes,
  // asymmetric H, non-finite objective data or inverted bounds.
  void validate() const;
};

enum class QpStatus {
  kOptimal,
  kPrimalInfeasible,
  kMaxIterations,
};

struct QpSolution {
  Eigen::VectorXd x;
  QpStatus status = QpStatus::kMaxIterations;
  double objective = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
};

struct QpSettings {
  // Cap on active-set changes before giving up.
  int max_iterations = 4000;
  // Ridge added to H when its Cholesky factorization fails, so that
  // semidefinite objectives from rank-deficient task stacks still solve.
  double regularization = 1e-9;
};

// Solves the program with a dual active-set method (Goldfarb-Idnani).
// Equality constraints are honored to ~1e-12, inequality violations stay
// below 1e-8, and the KKT stationarity residual of returned optima is
// below 1e-6 for problems of moderate conditioning. The solve path is
// fully deterministic: identical inputs give bitwise identical outputs.
QpSolution solve_qp(const QpProblem& problem, const QpSettings& settings = {});

}  // namespace priokin

#endif  // PRIOKIN_QP_HPP_
