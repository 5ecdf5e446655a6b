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

#include "priokin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "json_internal.hpp"
#include "priokin/errors.hpp"

namespace priokin {
namespace {

// Slack below which a velocity sits "on" its bound or a height row
// counts as active.
constexpr double kActiveTol = 1e-7;

// Desired-axis knots and samples shorter than this are rejected.
constexpr double kMinAxisNorm = 1e-6;

void append_number(std::string* line, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  *line += buf;
}

}  // namespace

PiecewiseLinear3::PiecewiseLinear3(
    std::vector<std::pair<double, Eigen::Vector3d>> knots)
    : knots_(std::move(knots)) {
  if (knots_.empty()) {
    throw InvalidArgumentError("profile needs at least one knot");
  }
  for (size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].first > knots_[i - 1].first)) {
      throw InvalidArgumentError("profile knots must be strictly "
                                 "increasing in time");
    }
  }
}

Eigen::Vector3d PiecewiseLinear3::sample(double t) const {
  if (knots_.empty()) {
    throw InvalidStateError("sampling an empty profile");
  }
  if (t <= knots_.front().first) {
    return knots_.front().second;
  }
  if (t >= knots_.back().first) {
    return knots_.back().second;
  }
  auto upper = std::upper_bound(
      knots_.begin(), knots_.end(), t,
      [](double value, const auto& knot) { return value < knot.first; });
  const auto& hi = *upper;
  const auto& lo = *(upper - 1);
  const double s = (t - lo.first) / (hi.first - lo.first);
  return (1.0 - s) * lo.second + s * hi.second;
}

void Scenario::validate() const {
  if (!chain) {
    throw InvalidStateError("scenario has no chain");
  }
  const int n = chain->dof();
  if (q_initial.size() != n) {
    throw InvalidArgumentError("q_initial size does not match chain");
  }
  if (!chain->has_frame(spray_frame)) {
    throw InvalidArgumentError("chain has no frame '" + spray_frame + "'");
  }
  if (mode == ScenarioMode::kContinuous) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw InvalidArgumentError("dt must be positive");
    }
    if (!(duration >= dt)) {
      throw InvalidArgumentError("duration must be at least dt");
    }
    if (velocity_profile.empty()) {
      throw InvalidArgumentError("continuous scenario needs a velocity "
                                 "profile");
    }
    if (desired_axis.empty()) {
      throw InvalidArgumentError("continuous scenario needs a desired "
                                 "axis");
    }
    for (const auto& [t, a] : desired_axis.knots()) {
      if (a.norm() < kMinAxisNorm) {
        throw InvalidArgumentError("desired axis knot is numerically zero");
      }
    }
    if (posture_target.size() != n) {
      throw InvalidArgumentError("posture_target size does not match "
                                 "chain");
    }
    if (height_constraint) {
      for (const std::string& frame : height_constraint->frames) {
        if (!chain->has_frame(frame)) {
          throw InvalidArgumentError("height constraint frame '" + frame +
                                     "' not in chain");
        }
      }
      if (height_constraint->frames.empty()) {
        throw InvalidArgumentError("height constraint lists no frames");
      }
    }
    if (!(cascade.blend_weight > 0.0)) {
      throw InvalidArgumentError("blend weight must be positive");
    }
  } else {
    const bool randomized = random_targets && random_targets->count > 0;
    if (tasks.empty() && !randomized) {
      throw InvalidArgumentError("selective scenario has an empty task "
                                 "stack");
    }
    if (randomized && !chain->has_frame(random_targets->frame)) {
      throw InvalidArgumentError("random target frame '" +
                                 random_targets->frame + "' not in chain");
    }
    for (const Eigen::VectorXd& guess : initial_guesses) {
      if (guess.size() != n) {
        throw InvalidArgumentError("initial guess size does not match "
                                   "chain");
      }
    }
  }
}

std::vector<TraceRow> run_continuous(const Scenario& scenario,
                                     const RunHooks& hooks) {
  scenario.validate();
  if (scenario.mode != ScenarioMode::kContinuous) {
    throw InvalidArgumentError("run_continuous needs a continuous "
                               "scenario");
  }
  const KinematicChain& chain = *scenario.chain;
  const double dt = scenario.dt;
  const int steps =
      static_cast<int>(std::llround(scenario.duration / dt));

  Eigen::VectorXd q = scenario.q_initial;
  Eigen::VectorXd qd_prev = Eigen::VectorXd::Zero(chain.dof());

  std::vector<TraceRow> rows;
  rows.reserve(static_cast<size_t>(steps) + 1);

  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const FramePose pose =
        forward_kinematics(chain, q, scenario.spray_frame);

    const Eigen::Vector3d axis_sample = scenario.desired_axis.sample(t);
    if (axis_sample.norm() < kMinAxisNorm) {
      throw InvalidStateError("desired axis interpolated to zero");
    }
    const Eigen::Vector3d desired_axis = axis_sample.normalized();
    const AxisError axis_error = approach_axis_error(pose, desired_axis);
    const Eigen::Vector2d omega_c =
        angular_velocity_command(axis_error.local, scenario.gains);
    const Eigen::Vector3d v_c = scenario.velocity_profile.sample(t);

    std::vector<InequalityRow> extra;
    if (scenario.height_constraint) {
      for (const std::string& frame : scenario.height_constraint->frames) {
        extra.push_back(build_height_constraint(
            chain, q, frame, scenario.height_constraint->z_min, dt));
      }
    }

    const PrioritizedProblem problem = spraying_problem(
        chain, JointState{q, qd_prev}, v_c, omega_c,
        scenario.posture_target, scenario.gains, dt, scenario.cascade.mode,
        scenario.cascade.blend_weight, scenario.spray_frame, extra);

    PtscOptions options;
    if (hooks.qp_observer) {
      options.observer = [&hooks, k](int level, const QpProblem& qp) {
        hooks.qp_observer(k, level, qp);
      };
    }
    const CascadeSolution cascade = solve_ptsc(problem, options);
    if (!cascade.complete) {
      throw SolverError("cascade failed at step " + std::to_string(k) +
                        " (t=" + std::to_string(t) + ")");
    }
    const Eigen::VectorXd& qd = cascade.x;

    TraceRow row;
    row.t = t;
    row.q = q;
    row.qd = qd;
    row.position = pose.position;
    row.axis = pose.approach_axis();
    row.residuals.x() = cascade.level_residuals[0];
    row.residuals.y() = cascade.level_residuals[1];
    if (scenario.cascade.mode == SprayingMode::kThreeLevel) {
      row.residuals.z() = cascade.level_residuals[2];
    } else {
      const Eigen::VectorXd qd_c = joint_velocity_command(
          q, scenario.posture_target, scenario.gains);
      row.residuals.z() = (qd_c - qd).norm();
    }

    const VelocityBounds bounds =
        build_velocity_constraints(chain, qd_prev, dt);
    for (int j = 0; j < chain.dof(); ++j) {
      const double span = std::max(1.0, std::abs(bounds.ub(j)));
      if (std::abs(qd(j) - bounds.lb(j)) <= kActiveTol * span ||
          std::abs(qd(j) - bounds.ub(j)) <= kActiveTol * span) {
        row.active_bounds |= 1u << j;
      }
    }
    for (const InequalityRow& height_row : extra) {
      const double slack = height_row.coeffs.dot(qd) - height_row.rhs;
      if (slack <= kActiveTol * (1.0 + std::abs(height_row.rhs))) {
        row.height_active = true;
      }
    }
    rows.push_back(std::move(row));

    if (k < steps) {
      q += qd * dt;
      qd_prev = qd;
    }
  }
  return rows;
}

std::vector<IkReport> run_selective(const Scenario& scenario,
                                    uint64_t seed) {
  scenario.validate();
  if (scenario.mode != ScenarioMode::kSelective) {
    throw InvalidArgumentError("run_selective needs a selective scenario");
  }
  const KinematicChain& chain = *scenario.chain;

  std::vector<IkReport> reports;
  if (scenario.random_targets && scenario.random_targets->count > 0) {
    std::mt19937_64 rng(seed);
    // Manual mapping to [0, 1): uniform_real_distribution is not
    // bit-stable across standard library implementations.
    auto uniform = [&rng]() {
      return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    const Eigen::VectorXd lo = chain.position_lower();
    const Eigen::VectorXd hi = chain.position_upper();
    for (int i = 0; i < scenario.random_targets->count; ++i) {
      Eigen::VectorXd q_target(chain.dof());
      for (int j = 0; j < chain.dof(); ++j) {
        q_target(j) = lo(j) + (hi(j) - lo(j)) * uniform();
      }
      const FramePose pose = forward_kinematics(
          chain, q_target, scenario.random_targets->frame);
      PrioritizedTask entry;
      entry.task = Task::frame_pose(scenario.random_targets->frame, pose);
      reports.push_back(solve_pik(chain, scenario.q_initial, {entry},
                                  scenario.pik));
    }
    return reports;
  }

  std::vector<Eigen::VectorXd> guesses = scenario.initial_guesses;
  if (guesses.empty()) {
    guesses.push_back(scenario.q_initial);
  }
  reports.reserve(guesses.size());
  for (const Eigen::VectorXd& guess : guesses) {
    reports.push_back(
        solve_pik(chain, guess, scenario.tasks, scenario.pik));
  }
  return reports;
}

void emit_trace(const std::vector<TraceRow>& rows, TraceFormat format,
                std::ostream& out) {
  if (format == TraceFormat::kJson) {
    emit_trace_json(rows, out);
    return;
  }
  const int dof = rows.empty() ? 0 : static_cast<int>(rows.front().q.size());
  std::string line = "t";
  for (int j = 0; j < dof; ++j) {
    line += ",q" + std::to_string(j);
  }
  for (int j = 0; j < dof; ++j) {
    line += ",qd" + std::to_string(j);
  }
  line += ",px,py,pz,ax,ay,az,res1,res2,res3,bounds,height";
  out << line << '\n';

  for (const TraceRow& row : rows) {
    line.clear();
    append_number(&line, row.t);
    for (int j = 0; j < dof; ++j) {
      line += ',';
      append_number(&line, row.q(j));
    }
    for (int j = 0; j < dof; ++j) {
      line += ',';
      append_number(&line, row.qd(j));
    }
    for (int i = 0; i < 3; ++i) {
      line += ',';
      append_number(&line, row.position(i));
    }
    for (int i = 0; i < 3; ++i) {
      line += ',';
      append_number(&line, row.axis(i));
    }
    for (int i = 0; i < 3; ++i) {
      line += ',';
      append_number(&line, row.residuals(i));
    }
    line += ',' + std::to_string(row.active_bounds);
    line += ',';
    line += row.height_active ? '1' : '0';
    out << line << '\n';
  }
}

}  // namespace priokin
