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

#ifndef PRIOKIN_TASKS_HPP_
#define PRIOKIN_TASKS_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <numbers>
#include <string>
#include <utility>

#include "priokin/kinematics.hpp"

namespace priokin {

enum class TaskKind {
  kFramePose,          // full 6-DOF pose of a frame
  kFramePosition,      // 3-DOF frame origin position
  kFrameOrientation,   // 3-DOF frame orientation
  kFrameApproachAxis,  // 2-DOF direction of the frame z axis
  kJointPosture,       // joint-space posture
};

// One kinematic objective. Only the target fields relevant to `kind` are
// meaningful; use the factory functions, which also validate targets.
struct Task {
  TaskKind kind = TaskKind::kFramePosition;
  std::string frame;
  FramePose pose_target;            // kFramePose (position + rotation),
                                    // kFramePosition (position part),
                                    // kFrameOrientation (rotation part)
  Eigen::Vector3d axis_target = Eigen::Vector3d::UnitZ();  // kFrameApproachAxis
  Eigen::VectorXd posture_target;   // kJointPosture

  static Task frame_pose(std::string frame, const FramePose& target);
  static Task frame_position(std::string frame, const Eigen::Vector3d& target);
  static Task frame_orientation(std::string frame,
                                const Eigen::Quaterniond& target);
  // `axis` must be unit norm; the error leaves rotation about the axis
  // itself unconstrained.
  static Task frame_approach_axis(std::string frame,
                                  const Eigen::Vector3d& axis);
  static Task joint_posture(const Eigen::VectorXd& target);

  // Dimension of the task error vector for a chain with `dof` joints.
  int error_dim(int dof) const;
};

// Task error with bookkeeping for step clamping. `raw_norm` always
// refers to the error magnitude before any clamping.
struct TaskError {
  Eigen::VectorXd e;
  double raw_norm = 0.0;
  bool clamped = false;
};

// Proportional feedback gains.
struct Gains {
  double kp_joint = 1.0;  // joint-space posture feedback
  double kp_omega = 2.0;  // pointing-axis feedback
};

// Per-class error clamp magnitudes. Position-like errors (meters) clamp
// against `position`; rotation-like errors (radians) clamp against
// `orientation`.
struct ErrorClamps {
  double position = 0.3;
  double orientation = 30.0 * std::numbers::pi / 180.0;
};

// Misalignment between a frame's approach (z) axis and a desired
// direction. `angle` is the absolute misalignment; `local` is the
// rotation needed to align, expressed about the frame's own x and y
// axes. The local z component vanishes identically, so correcting the
// error never commands rotation about the approach axis itself.
struct AxisError {
  double angle = 0.0;
  Eigen::Vector2d local = Eigen::Vector2d::Zero();
};

// Computes the axis misalignment of `pose` against `desired_axis` (unit
// norm). For an exactly antiparallel axis the rotation direction is
// degenerate; the convention is to rotate about the frame's local x
// axis, giving a local error of (pi, 0).
AxisError approach_axis_error(const FramePose& pose,
                              const Eigen::Vector3d& desired_axis);

// Proportional angular-velocity command about the frame's local x and y
// axes that reduces an axis misalignment.
Eigen::Vector2d angular_velocity_command(const Eigen::Vector2d& local_error,
                                         const Gains& gains);

// Proportional joint-velocity command toward a desired posture.
Eigen::VectorXd joint_velocity_command(const Eigen::VectorXd& q,
                                       const Eigen::VectorXd& q_desired,
                                       const Gains& gains);

// Task error and its Jacobian at configuration `q`. The Jacobian maps
// joint rates to the instantaneous rate of change of the task value, so
// at a converged error the linearization of the error is -J. Orientation
// errors are rotation vectors of (target * current^-1) in base
// coordinates; approach-axis errors are local as in approach_axis_error.
std::pair<TaskError, Eigen::MatrixXd> task_error_and_jacobian(
    const KinematicChain& chain, const Eigen::VectorXd& q, const Task& task);

// Rescales an over-long error to the clamp magnitude of its class,
// preserving direction. Pose errors clamp their position and rotation
// blocks independently. Idempotent: re-clamping a clamped error returns
// it bit for bit.
TaskError clamp_task_error(const TaskError& error, TaskKind kind,
                           const ErrorClamps& clamps);

}  // namespace priokin

#endif  // PRIOKIN_TASKS_HPP_
