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

// Independent reference implementations used to validate the library.
// Each oracle deliberately avoids the code path it checks: forward
// kinematics is recomputed with homogeneous matrices, Jacobians with
// finite differences, and optimization results with unrelated
// algorithms (projected gradient, and a quad-precision active-set
// method for weighted lexicographic reference solutions).

#ifndef PRIOKIN_TESTS_SUPPORT_ORACLES_HPP_
#define PRIOKIN_TESTS_SUPPORT_ORACLES_HPP_

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "priokin/kinematics.hpp"
#include "priokin/qp.hpp"
#include "priokin/tasks.hpp"

namespace priokin::testing {

// Forward kinematics recomputed with 4x4 homogeneous matrices. The
// rotation of each step is built with an explicit Rodrigues formula and
// an explicit quaternion-to-matrix conversion, so only the chain data is
// shared with the library path.
Eigen::Matrix4d pose_matrix_oracle(const KinematicChain& chain,
                                   const Eigen::VectorXd& q,
                                   const std::string& frame);

// Central-difference geometric Jacobian. The angular block differences
// rotation vectors of R(q+h) R(q-h)^T.
Eigen::MatrixXd finite_difference_jacobian(const KinematicChain& chain,
                                           const Eigen::VectorXd& q,
                                           const std::string& frame,
                                           double h = 1e-6);

// Central-difference linearization of a task error in q. Rows match the
// task error; at a converged task (error zero) this equals minus the
// task Jacobian.
Eigen::MatrixXd finite_difference_task_error(const KinematicChain& chain,
                                             const Eigen::VectorXd& q,
                                             const Task& task,
                                             double h = 1e-6);

// Projected-gradient reference for box-constrained QPs. Runs until the
// iterate moves less than `tol` in infinity norm.
Eigen::VectorXd projected_gradient_box_qp(const Eigen::MatrixXd& H,
                                          const Eigen::VectorXd& f,
                                          const Eigen::VectorXd& lb,
                                          const Eigen::VectorXd& ub,
                                          double tol = 1e-12,
                                          int max_iterations = 4000000);

// Exhaustive active-set enumeration for small QPs: solves the KKT
// system for every subset of inequality constraints (box bounds are
// folded in as rows) and returns the feasible, dual-feasible candidate
// with the lowest objective. Returns nullopt when no subset yields a
// feasible point.
std::optional<Eigen::VectorXd> enumerated_qp_oracle(const QpProblem& problem);

struct OracleLevel {
  Eigen::MatrixXd J;
  Eigen::VectorXd b;
};

struct WeightedOracleResult {
  Eigen::VectorXd x;
  std::vector<double> residuals;  // |b_k - J_k x| per level
};

// Reference solution of the weighted-sum relaxation of a lexicographic
// problem over box bounds:
//
//   minimize sum_k w_k |J_k x - b_k|^2 + reg |x|^2   s.t. lb <= x <= ub
//
// solved with a primal active-set method in quad precision, so that
// steeply descending weights (1e12, 1e6, 1) do not drown the low
// priority levels in round-off.
WeightedOracleResult weighted_lexicographic_oracle(
    const std::vector<OracleLevel>& levels, const std::vector<double>& weights,
    const Eigen::VectorXd& lb, const Eigen::VectorXd& ub,
    double regularization = 1e-9);

}  // namespace priokin::testing

#endif  // PRIOKIN_TESTS_SUPPORT_ORACLES_HPP_
