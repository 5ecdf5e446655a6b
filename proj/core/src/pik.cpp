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

#include "priokin/pik.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include "priokin/errors.hpp"

namespace priokin {
namespace {

// Step window for one joint: the step bound intersected with the
// distance to the position limits. A configuration outside its limits
// yields a window on the inward side only, so the iteration steers back
// in; if even the full step cannot reach the limit, the window collapses
// to the bound-ward extreme.
void step_window(double bound, double to_lo, double to_hi, double* lo,
                 double* hi) {
  *lo = std::max(-bound, to_lo);
  *hi = std::min(bound, to_hi);
  if (*lo > *hi) {
    const double pinch = to_lo > bound ? bound : -bound;
    *lo = pinch;
    *hi = pinch;
  }
}

}  // namespace

IkReport solve_pik(const KinematicChain& chain,
                   const Eigen::VectorXd& q_initial,
                   const std::vector<PrioritizedTask>& tasks,
                   const PikParams& params,
                   const std::vector<InequalityRow>& extra_constraints) {
  const int n = chain.dof();
  if (q_initial.size() != n) {
    throw DimensionError("q_initial size does not match chain");
  }
  if (!q_initial.allFinite()) {
    throw InvalidStateError("q_initial contains non-finite entries");
  }
  if (tasks.empty()) {
    throw InvalidArgumentError("task stack is empty");
  }

  const ErrorClamps clamps{params.position_clamp, params.orientation_clamp};
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  IkReport report;
  report.q = q_initial;

  std::vector<TaskError> previous;
  std::vector<TaskError> current(tasks.size());
  std::vector<Eigen::MatrixXd> jacobians(tasks.size());

  auto finish = [&](IkStop stop) {
    report.termination = stop;
    report.task_errors.clear();
    for (const PrioritizedTask& entry : tasks) {
      report.task_errors.push_back(
          task_error_and_jacobian(chain, report.q, entry.task).first.raw_norm);
    }
    report.wall_time = elapsed();
    return report;
  };

  while (true) {
    double total_error = 0.0;
    for (size_t i = 0; i < tasks.size(); ++i) {
      auto [error, jacobian] =
          task_error_and_jacobian(chain, report.q, tasks[i].task);
      total_error += error.raw_norm;
      current[i] = std::move(error);
      jacobians[i] = std::move(jacobian);
    }

    if (total_error < params.error_threshold) {
      return finish(IkStop::kErrorBelowThreshold);
    }
    // The error change acts as a gradient estimate; it needs two
    // iterates, so the first iteration never stalls.
    if (!previous.empty()) {
      double total_change = 0.0;
      for (size_t i = 0; i < tasks.size(); ++i) {
        total_change += (current[i].e - previous[i].e).norm();
      }
      if (total_change < params.gradient_threshold) {
        return finish(IkStop::kGradientStalled);
      }
      if (params.polish &&
          total_change < params.polish_gradient_threshold) {
        report.polished = true;
      }
    }
    if (report.iterations >= params.max_iterations) {
      return finish(IkStop::kMaxIterations);
    }
    if (elapsed() > params.max_time) {
      return finish(IkStop::kMaxTime);
    }

    PrioritizedProblem problem = PrioritizedProblem::for_vars(n);
    for (size_t i = 0; i < tasks.size(); ++i) {
      PriorityLevel level;
      const TaskError target =
          clamp_task_error(current[i], tasks[i].task.kind, clamps);
      level.J = jacobians[i];
      level.b = target.e;
      if (tasks[i].blend_task) {
        auto [blend_error, blend_jacobian] = task_error_and_jacobian(
            chain, report.q, *tasks[i].blend_task);
        const TaskError blend_target = clamp_task_error(
            blend_error, tasks[i].blend_task->kind, clamps);
        level.blend =
            BlendTerm{std::move(blend_jacobian), blend_target.e,
                      tasks[i].blend_weight};
      }
      problem.levels.push_back(std::move(level));
    }

    const double bound =
        report.polished ? params.polish_step_bound : params.step_bound;
    for (int j = 0; j < n; ++j) {
      double lo = -bound;
      double hi = bound;
      if (params.use_limits) {
        const JointLimits& lim = chain.joint(j).limits;
        step_window(bound, lim.pos_lo - report.q(j),
                    lim.pos_hi - report.q(j), &lo, &hi);
      }
      problem.lb(j) = lo;
      problem.ub(j) = hi;
    }

    if (!extra_constraints.empty()) {
      problem.A_in.resize(
          static_cast<Eigen::Index>(extra_constraints.size()), n);
      problem.b_in.resize(
          static_cast<Eigen::Index>(extra_constraints.size()));
      for (size_t i = 0; i < extra_constraints.size(); ++i) {
        problem.A_in.row(static_cast<Eigen::Index>(i)) =
            extra_constraints[i].coeffs;
        problem.b_in(static_cast<Eigen::Index>(i)) =
            extra_constraints[i].rhs;
      }
    }

    const CascadeSolution step = solve_ptsc(problem);
    if (!step.complete) {
      report.cascade_failed = true;
      return finish(IkStop::kCascadeFailure);
    }

    report.q += step.x;
    if (!report.q.allFinite()) {
      throw InvalidStateError("joint configuration became non-finite");
    }
    ++report.iterations;
    previous = current;
  }
}

}  // namespace priokin
