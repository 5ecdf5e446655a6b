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

#include "priokin/ptsc.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "priokin/errors.hpp"

namespace priokin {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

PrioritizedProblem PrioritizedProblem::for_vars(int num_vars) {
  if (num_vars <= 0) {
    throw InvalidArgumentError("number of variables must be positive");
  }
  PrioritizedProblem p;
  p.A_eq.resize(0, num_vars);
  p.b_eq.resize(0);
  p.A_in.resize(0, num_vars);
  p.b_in.resize(0);
  p.lb = Eigen::VectorXd::Constant(num_vars, -kInf);
  p.ub = Eigen::VectorXd::Constant(num_vars, kInf);
  return p;
}

int PrioritizedProblem::num_vars() const {
  if (!levels.empty()) {
    return static_cast<int>(levels.front().J.cols());
  }
  return static_cast<int>(lb.size());
}

void PrioritizedProblem::validate() const {
  if (levels.empty()) {
    throw InvalidArgumentError("prioritized problem has no levels");
  }
  const Eigen::Index n = levels.front().J.cols();
  if (n == 0) {
    throw DimensionError("levels must have at least one variable");
  }
  for (size_t k = 0; k < levels.size(); ++k) {
    const PriorityLevel& level = levels[k];
    const std::string where = "level " + std::to_string(k);
    if (level.J.cols() != n) {
      throw DimensionError(where + ": J has inconsistent variable count");
    }
    if (level.J.rows() != level.b.size()) {
      throw DimensionError(where + ": J rows do not match b");
    }
    if (level.J.rows() == 0) {
      throw DimensionError(where + ": J has no rows");
    }
    if (!level.J.allFinite() || !level.b.allFinite()) {
      throw InvalidArgumentError(where + ": non-finite entries");
    }
    if (level.blend) {
      if (level.blend->J.cols() != n || level.blend->J.rows() == 0 ||
          level.blend->J.rows() != level.blend->b.size()) {
        throw DimensionError(where + ": blend term has inconsistent sizes");
      }
      if (!(level.blend->weight > 0.0) ||
          !std::isfinite(level.blend->weight)) {
        throw InvalidArgumentError(where + ": blend weight must be positive");
      }
      if (!level.blend->J.allFinite() || !level.blend->b.allFinite()) {
        throw InvalidArgumentError(where + ": blend term has non-finite "
                                   "entries");
      }
    }
  }
  if (lb.size() != n || ub.size() != n) {
    throw DimensionError("bounds must have one entry per variable");
  }
  if (A_eq.rows() != b_eq.size() || (A_eq.rows() > 0 && A_eq.cols() != n)) {
    throw DimensionError("A_eq is inconsistent with b_eq or variable count");
  }
  if (A_in.rows() != b_in.size() || (A_in.rows() > 0 && A_in.cols() != n)) {
    throw DimensionError("A_in is inconsistent with b_in or variable count");
  }
}

CascadeSolution solve_ptsc(const PrioritizedProblem& problem,
                           const PtscOptions& options) {
  problem.validate();
  const int n = problem.num_vars();
  const int num_levels = static_cast<int>(problem.levels.size());

  // Equality rows accumulated from solved levels, on top of the shared
  // equality constraints.
  Eigen::Index eq_rows = problem.A_eq.rows();
  for (const PriorityLevel& level : problem.levels) {
    eq_rows += level.J.rows();
  }
  Eigen::MatrixXd A_eq(eq_rows, n);
  Eigen::VectorXd b_eq(eq_rows);
  A_eq.topRows(problem.A_eq.rows()) = problem.A_eq;
  b_eq.head(problem.b_eq.size()) = problem.b_eq;
  Eigen::Index eq_used = problem.A_eq.rows();

  CascadeSolution solution;
  solution.x = Eigen::VectorXd::Zero(n);
  solution.level_residuals.resize(static_cast<size_t>(num_levels), 0.0);

  for (int k = 0; k < num_levels; ++k) {
    const PriorityLevel& level = problem.levels[k];

    QpProblem qp;
    qp.H = level.J.transpose() * level.J;
    qp.f = -(level.J.transpose() * level.b);
    if (level.blend) {
      qp.H.noalias() += level.blend->weight *
                        (level.blend->J.transpose() * level.blend->J);
      qp.f.noalias() -= level.blend->weight *
                        (level.blend->J.transpose() * level.blend->b);
    }
    qp.H.diagonal().array() += options.regularization;
    qp.A_eq = A_eq.topRows(eq_used);
    qp.b_eq = b_eq.head(eq_used);
    qp.A_in = problem.A_in;
    qp.b_in = problem.b_in;
    qp.lb = problem.lb;
    qp.ub = problem.ub;

    if (options.observer) {
      options.observer(k, qp);
    }
    const QpSolution qp_solution = solve_qp(qp, options.qp);
    solution.level_status.push_back(qp_solution.status);
    if (qp_solution.status != QpStatus::kOptimal) {
      break;
    }
    solution.x = qp_solution.x;
    ++solution.levels_solved;

    A_eq.middleRows(eq_used, level.J.rows()) = level.J;
    b_eq.segment(eq_used, level.J.rows()).noalias() =
        level.J * qp_solution.x;
    eq_used += level.J.rows();
  }

  for (int k = 0; k < num_levels; ++k) {
    const PriorityLevel& level = problem.levels[k];
    solution.level_residuals[static_cast<size_t>(k)] =
        (level.b - level.J * solution.x).norm();
  }
  solution.complete = solution.levels_solved == num_levels;
  return solution;
}

VelocityBounds build_velocity_constraints(const KinematicChain& chain,
                                          const Eigen::VectorXd& qd_prev,
                                          double dt) {
  if (qd_prev.size() != chain.dof()) {
    throw DimensionError("qd_prev size does not match chain");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgumentError("dt must be positive and finite");
  }
  if (chain.dof() > 32) {
    throw DimensionError("collapse mask supports at most 32 joints");
  }

  VelocityBounds bounds;
  bounds.lb.resize(chain.dof());
  bounds.ub.resize(chain.dof());
  for (int j = 0; j < chain.dof(); ++j) {
    const JointLimits& lim = chain.joint(j).limits;
    const double acc_lo = qd_prev(j) + lim.acc_lo * dt;
    const double acc_hi = qd_prev(j) + lim.acc_hi * dt;
    double lo = std::max(lim.vel_lo, acc_lo);
    double hi = std::min(lim.vel_hi, acc_hi);
    if (lo > hi) {
      // Disjoint windows: the joint entered this step outside its
      // velocity limits. Acceleration feasibility wins, so the step
      // brakes as hard as allowed toward the velocity window.
      const double pinch = acc_lo > lim.vel_hi ? acc_lo : acc_hi;
      lo = pinch;
      hi = pinch;
      bounds.collapsed |= 1u << j;
      bounds.any_collapsed = true;
    }
    bounds.lb(j) = lo;
    bounds.ub(j) = hi;
  }
  return bounds;
}

InequalityRow build_height_constraint(const KinematicChain& chain,
                                      const Eigen::VectorXd& q,
                                      const std::string& frame, double z_min,
                                      double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgumentError("dt must be positive and finite");
  }
  const FramePose pose = forward_kinematics(chain, q, frame);
  const Eigen::MatrixXd jacobian = geometric_jacobian(chain, q, frame);
  InequalityRow row;
  row.coeffs = jacobian.row(2);
  row.rhs = (z_min - pose.position.z()) / dt;
  return row;
}

PrioritizedProblem spraying_problem(
    const KinematicChain& chain, const JointState& state,
    const Eigen::Vector3d& v_c, const Eigen::Vector2d& omega_c,
    const Eigen::VectorXd& q_desired, const Gains& gains, double dt,
    SprayingMode mode, double blend_weight, const std::string& spray_frame,
    const std::vector<InequalityRow>& extra_inequalities) {
  const int n = chain.dof();
  if (state.q.size() != n || state.qd.size() != n) {
    throw DimensionError("joint state size does not match chain");
  }
  if (q_desired.size() != n) {
    throw DimensionError("q_desired size does not match chain");
  }

  const Eigen::MatrixXd jacobian =
      geometric_jacobian(chain, state.q, spray_frame);
  const Eigen::MatrixXd local_rows =
      local_rotational_rows(chain, state.q, spray_frame);
  const Eigen::VectorXd qd_c =
      joint_velocity_command(state.q, q_desired, gains);

  PrioritizedProblem problem = PrioritizedProblem::for_vars(n);

  PriorityLevel translation;
  translation.J = jacobian.topRows(3);
  translation.b = v_c;

  PriorityLevel pointing;
  pointing.J = local_rows;
  pointing.b = omega_c;

  switch (mode) {
    case SprayingMode::kThreeLevel: {
      PriorityLevel posture;
      posture.J = Eigen::MatrixXd::Identity(n, n);
      posture.b = qd_c;
      problem.levels = {std::move(translation), std::move(pointing),
                        std::move(posture)};
      break;
    }
    case SprayingMode::kTwoLevelBlend: {
      pointing.blend = BlendTerm{Eigen::MatrixXd::Identity(n, n), qd_c,
                                 blend_weight};
      problem.levels = {std::move(translation), std::move(pointing)};
      break;
    }
  }

  const VelocityBounds bounds =
      build_velocity_constraints(chain, state.qd, dt);
  problem.lb = bounds.lb;
  problem.ub = bounds.ub;

  if (!extra_inequalities.empty()) {
    problem.A_in.resize(static_cast<Eigen::Index>(extra_inequalities.size()),
                        n);
    problem.b_in.resize(static_cast<Eigen::Index>(extra_inequalities.size()));
    for (size_t i = 0; i < extra_inequalities.size(); ++i) {
      if (extra_inequalities[i].coeffs.size() != n) {
        throw DimensionError("extra inequality row size does not match "
                             "chain");
      }
      problem.A_in.row(static_cast<Eigen::Index>(i)) =
          extra_inequalities[i].coeffs;
      problem.b_in(static_cast<Eigen::Index>(i)) = extra_inequalities[i].rhs;
    }
  }
  return problem;
}

}  // namespace priokin
