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

#ifndef PRIOKIN_PIK_HPP_
#define PRIOKIN_PIK_HPP_

#include <Eigen/Core>

#include <numbers>
#include <optional>
#include <vector>

#include "priokin/kinematics.hpp"
#include "priokin/ptsc.hpp"
#include "priokin/tasks.hpp"

namespace priokin {

// One entry of a prioritized task stack. Entries are ordered from
// highest priority to lowest; an optional secondary task shares the
// entry's level as a weighted least-squares blend.
struct PrioritizedTask {
  Task task;
  std::optional<Task> blend_task;
  double blend_weight = 1e-2;
};

// Parameters of the prioritized inverse kinematics iteration.
struct PikParams {
  // Enforce joint position limits as hard bounds on each step.
  bool use_limits = true;
  // Success: total task error norm falls below this.
  double error_threshold = 1e-4;
  // Stall: total change of the task errors between iterations falls
  // below this. Infeasible stacks terminate here with the remaining
  // error balanced by priority.
  double gradient_threshold = 1e-3;
  // Per-joint step bound per iteration (radians).
  double step_bound = 10.0 * std::numbers::pi / 180.0;
  // Once the error change falls below polish_gradient_threshold, shrink
  // the step bound to polish_step_bound and keep iterating, which damps
  // the terminal oscillation of conflicting stacks.
  bool polish = true;
  double polish_gradient_threshold = 1e-2;
  double polish_step_bound = 3.0 * std::numbers::pi / 180.0;
  // Error clamps applied to the per-iteration targets.
  double position_clamp = 0.3;
  double orientation_clamp = 30.0 * std::numbers::pi / 180.0;
  int max_iterations = 500;
  // Wall-clock budget in seconds.
  double max_time = 1.0;
};

enum class IkStop {
  kErrorBelowThreshold,
  kGradientStalled,
  kMaxIterations,
  kMaxTime,
  kCascadeFailure,
};

struct IkReport {
  Eigen::VectorXd q;
  // Unclamped error norm of each task at the final configuration.
  std::vector<double> task_errors;
  int iterations = 0;
  IkStop termination = IkStop::kMaxIterations;
  double wall_time = 0.0;  // seconds
  // True when the solver entered the reduced-step polishing phase.
  bool polished = false;
  // True when a cascade solve failed and the iteration aborted.
  bool cascade_failed = false;
};

// Iterative prioritized inverse kinematics: each iteration linearizes
// the task stack at the current configuration, solves the prioritized
// problem for a bounded joint step and applies it. Terminates on small
// total error, on stalled error change (the natural exit for stacks that
// are not simultaneously feasible), or on the iteration/time caps.
// `extra_constraints` rows are applied to every step.
IkReport solve_pik(const KinematicChain& chain,
                   const Eigen::VectorXd& q_initial,
                   const std::vector<PrioritizedTask>& tasks,
                   const PikParams& params = {},
                   const std::vector<InequalityRow>& extra_constraints = {});

}  // namespace priokin

#endif  // PRIOKIN_PIK_HPP_
