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

#include "priokin/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "priokin/errors.hpp"

namespace priokin {
namespace {

constexpr double kUnitNormTol = 1e-9;

// Cross products below this magnitude are treated as parallel axes.
constexpr double kParallelTol = 1e-12;

// Clamp trigger band: errors within this relative margin of the clamp
// magnitude pass through untouched, which makes clamping exactly
// idempotent despite the rescaling round-off.
constexpr double kClampSlack = 1e-12;

Eigen::Vector3d rotation_vector(const Eigen::Quaterniond& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.angle() * aa.axis();
}

void clamp_block(Eigen::Ref<Eigen::VectorXd> block, double limit,
                 bool* clamped) {
  const double norm = block.norm();
  if (norm > limit * (1.0 + kClampSlack)) {
    block *= limit / norm;
    *clamped = true;
  }
}

}  // namespace

Task Task::frame_pose(std::string frame, const FramePose& target) {
  if (std::abs(target.rotation.norm() - 1.0) > kUnitNormTol) {
    throw InvalidArgumentError("pose target rotation is not normalized");
  }
  Task task;
  task.kind = TaskKind::kFramePose;
  task.frame = std::move(frame);
  task.pose_target = target;
  return task;
}

Task Task::frame_position(std::string frame, const Eigen::Vector3d& target) {
  Task task;
  task.kind = TaskKind::kFramePosition;
  task.frame = std::move(frame);
  task.pose_target.position = target;
  return task;
}

Task Task::frame_orientation(std::string frame,
                             const Eigen::Quaterniond& target) {
  if (std::abs(target.norm() - 1.0) > kUnitNormTol) {
    throw InvalidArgumentError("orientation target is not normalized");
  }
  Task task;
  task.kind = TaskKind::kFrameOrientation;
  task.frame = std::move(frame);
  task.pose_target.rotation = target;
  return task;
}

Task Task::frame_approach_axis(std::string frame,
                               const Eigen::Vector3d& axis) {
  if (std::abs(axis.norm() - 1.0) > kUnitNormTol) {
    throw InvalidArgumentError("approach axis target is not a unit vector");
  }
  Task task;
  task.kind = TaskKind::kFrameApproachAxis;
  task.frame = std::move(frame);
  task.axis_target = axis;
  return task;
}

Task Task::joint_posture(const Eigen::VectorXd& target) {
  if (target.size() == 0) {
    throw InvalidArgumentError("posture target is empty");
  }
  Task task;
  task.kind = TaskKind::kJointPosture;
  task.posture_target = target;
  return task;
}

int Task::error_dim(int dof) const {
  switch (kind) {
    case TaskKind::kFramePose:
      return 6;
    case TaskKind::kFramePosition:
    case TaskKind::kFrameOrientation:
      return 3;
    case TaskKind::kFrameApproachAxis:
      return 2;
    case TaskKind::kJointPosture:
      return dof;
  }
  return 0;
}

AxisError approach_axis_error(const FramePose& pose,
                              const Eigen::Vector3d& desired_axis) {
  if (std::abs(desired_axis.norm() - 1.0) > kUnitNormTol) {
    throw InvalidArgumentError("desired axis is not a unit vector");
  }
  const Eigen::Vector3d axis = pose.approach_axis();
  const double cos_angle =
      std::clamp(axis.dot(desired_axis), -1.0, 1.0);

  AxisError result;
  result.angle = std::acos(cos_angle);

  const Eigen::Vector3d cross = axis.cross(desired_axis);
  const double cross_norm = cross.norm();
  Eigen::Vector3d error_base;
  if (cross_norm > kParallelTol) {
    error_base = result.angle * (cross / cross_norm);
  } else if (cos_angle > 0.0) {
    error_base.setZero();
  } else {
    // Antiparallel: any axis orthogonal to the approach direction aligns
    // it; by convention rotate about the frame's local x axis.
    error_base = std::numbers::pi * (pose.rotation * Eigen::Vector3d::UnitX());
  }
  const Eigen::Vector3d local = pose.rotation.conjugate() * error_base;
  result.local = local.head<2>();
  return result;
}

Eigen::Vector2d angular_velocity_command(const Eigen::Vector2d& local_error,
                                         const Gains& gains) {
  return gains.kp_omega * local_error;
}

Eigen::VectorXd joint_velocity_command(const Eigen::VectorXd& q,
                                       const Eigen::VectorXd& q_desired,
                                       const Gains& gains) {
  if (q.size() != q_desired.size()) {
    throw DimensionError("q and q_desired have different sizes");
  }
  return gains.kp_joint * (q_desired - q);
}

std::pair<TaskError, Eigen::MatrixXd> task_error_and_jacobian(
    const KinematicChain& chain, const Eigen::VectorXd& q, const Task& task) {
  TaskError error;
  Eigen::MatrixXd jacobian;

  switch (task.kind) {
    case TaskKind::kFramePosition: {
      const FramePose pose = forward_kinematics(chain, q, task.frame);
      error.e = task.pose_target.position - pose.position;
      jacobian = geometric_jacobian(chain, q, task.frame).topRows(3);
      break;
    }
    case TaskKind::kFrameOrientation: {
      const FramePose pose = forward_kinematics(chain, q, task.frame);
      error.e = rotation_vector(task.pose_target.rotation *
                                pose.rotation.conjugate());
      jacobian = geometric_jacobian(chain, q, task.frame).bottomRows(3);
      break;
    }
    case TaskKind::kFramePose: {
      const FramePose pose = forward_kinematics(chain, q, task.frame);
      error.e.resize(6);
      error.e.head<3>() = task.pose_target.position - pose.position;
      error.e.tail<3>() = rotation_vector(task.pose_target.rotation *
                                          pose.rotation.conjugate());
      jacobian = geometric_jacobian(chain, q, task.frame);
      break;
    }
    case TaskKind::kFrameApproachAxis: {
      const FramePose pose = forward_kinematics(chain, q, task.frame);
      error.e = approach_axis_error(pose, task.axis_target).local;
      jacobian = local_rotational_rows(chain, q, task.frame);
      break;
    }
    case TaskKind::kJointPosture: {
      if (task.posture_target.size() != chain.dof()) {
        throw DimensionError("posture target size does not match chain");
      }
      error.e = task.posture_target - q;
      jacobian = Eigen::MatrixXd::Identity(chain.dof(), chain.dof());
      break;
    }
  }

  error.raw_norm = error.e.norm();
  error.clamped = false;
  return {std::move(error), std::move(jacobian)};
}

TaskError clamp_task_error(const TaskError& error, TaskKind kind,
                           const ErrorClamps& clamps) {
  TaskError out = error;
  switch (kind) {
    case TaskKind::kFramePosition:
      clamp_block(out.e, clamps.position, &out.clamped);
      break;
    case TaskKind::kFrameOrientation:
    case TaskKind::kFrameApproachAxis:
    case TaskKind::kJointPosture:
      clamp_block(out.e, clamps.orientation, &out.clamped);
      break;
    case TaskKind::kFramePose: {
      if (out.e.size() != 6) {
        throw DimensionError("pose error must have 6 entries");
      }
      clamp_block(out.e.head<3>(), clamps.position, &out.clamped);
      clamp_block(out.e.tail<3>(), clamps.orientation, &out.clamped);
      break;
    }
  }
  return out;
}

}  // namespace priokin
