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

#ifndef PRIOKIN_PTSC_HPP_
#define PRIOKIN_PTSC_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "priokin/kinematics.hpp"
#include "priokin/qp.hpp"
#include "priokin/tasks.hpp"

namespace priokin {

// Secondary least-squares term sharing a priority level with weight
// `weight`: the level objective becomes |J x - b|^2 + weight |J2 x - b2|^2.
struct BlendTerm {
  Eigen::MatrixXd J;
  Eigen::VectorXd b;
  double weight = 1e-2;
};

// One priority level of a lexicographic least-squares problem: minimize
// |J x - b|^2 subject to everything decided by higher levels.
struct PriorityLevel {
  Eigen::MatrixXd J;
  Eigen::VectorXd b;
  std::optional<BlendTerm> blend;
};

// Strictly prioritized task-space control problem. Levels are ordered
// from highest priority to lowest; the shared constraints apply to every
// level.
struct PrioritizedProblem {
  std::vector<PriorityLevel> levels;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_in;
  Eigen::VectorXd b_in;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;

  // Problem skeleton with no levels, no linear constraints and free
  // variables.
  static PrioritizedProblem for_vars(int num_vars);

  int num_vars() const;
  void validate() const;
};

struct CascadeSolution {
  Eigen::VectorXd x;
  // |b_k - J_k x| for every level, evaluated at the returned x.
  std::vector<double> level_residuals;
  // QP status of each attempted level in priority order. A non-optimal
  // entry is always last: levels below a failure are not attempted.
  std::vector<QpStatus> level_status;
  // Number of levels solved to optimality.
  int levels_solved = 0;
  // True when every level solved to optimality.
  bool complete = false;
};

struct PtscOptions {
  // Ridge added to every level's quadratic term. Task stacks are usually
  // rank deficient at single levels, so the cascade always regularizes.
  double regularization = 1e-9;
  QpSettings qp;
  // Observer invoked with each level's assembled QP before solving.
  std::function<void(int level, const QpProblem&)> observer;
};

// Solves the lexicographic problem level by level. Each level minimizes
// its own objective subject to the shared constraints and to equality
// constraints J_i x = J_i x_i* for every higher level i, which pins the
// higher objectives to their already-achieved values. Residuals of
// solved levels are therefore preserved exactly when lower levels are
// appended. A non-optimal QP stops the cascade; the solution of the last
// successful level is returned (zeros if the first level already fails).
CascadeSolution solve_ptsc(const PrioritizedProblem& problem,
                           const PtscOptions& options = {});

// Velocity-space bounds for one control step: joint velocity limits
// intersected with the velocities reachable from `qd_prev` within the
// acceleration limits over `dt`. When the two windows are disjoint for a
// joint (entering velocity already outside its limits), the bound
// collapses to the acceleration-feasible endpoint nearer the velocity
// window, so the commanded step is always reachable, and the joint's bit
// is set in `collapsed`.
struct VelocityBounds {
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;
  uint32_t collapsed = 0;
  bool any_collapsed = false;
};

VelocityBounds build_velocity_constraints(const KinematicChain& chain,
                                          const Eigen::VectorXd& qd_prev,
                                          double dt);

// One linear inequality row on the decision variable: coeffs * x >= rhs.
struct InequalityRow {
  Eigen::RowVectorXd coeffs;
  double rhs = 0.0;
};

// One-step linearized floor constraint for a frame: the world-z velocity
// of the frame origin must not drive it below `z_min` within `dt`.
InequalityRow build_height_constraint(const KinematicChain& chain,
                                      const Eigen::VectorXd& q,
                                      const std::string& frame, double z_min,
                                      double dt);

enum class SprayingMode {
  // Translation, then pointing, then posture as three strict levels.
  kThreeLevel,
  // Translation strict, pointing and posture blended in one level.
  kTwoLevelBlend,
};

// Assembles the velocity-domain spraying control problem: follow the
// commanded tool velocity `v_c`, point the approach axis with local
// angular velocity command `omega_c`, and fall back toward posture
// `q_desired`, inside velocity and acceleration limits plus any extra
// inequality rows (e.g. height constraints).
PrioritizedProblem spraying_problem(
    const KinematicChain& chain, const JointState& state,
    const Eigen::Vector3d& v_c, const Eigen::Vector2d& omega_c,
    const Eigen::VectorXd& q_desired, const Gains& gains, double dt,
    SprayingMode mode, double blend_weight, const std::string& spray_frame,
    const std::vector<InequalityRow>& extra_inequalities = {});

}  // namespace priokin

#endif  // PRIOKIN_PTSC_HPP_
