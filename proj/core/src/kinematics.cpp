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

#include "priokin/kinematics.hpp"

#include <cmath>
#include <utility>

#include "priokin/errors.hpp"

namespace priokin {
namespace {

constexpr double kUnitNormTol = 1e-9;

// World-frame data of one joint after FK up to and including its origin
// and rotation.
struct JointWorld {
  Eigen::Vector3d axis;    // rotation axis in base coordinates
  Eigen::Vector3d origin;  // joint origin in base coordinates
};

void check_joint_vector(const KinematicChain& chain,
                        const Eigen::VectorXd& q, const char* what) {
  if (q.size() != chain.dof()) {
    throw DimensionError(std::string(what) + " has size " +
                         std::to_string(q.size()) + ", chain has " +
                         std::to_string(chain.dof()) + " joints");
  }
}

// Walks the chain up to and including `last_joint`, returning the pose
// of that joint's frame and filling per-joint world data.
FramePose walk_chain(const KinematicChain& chain, const Eigen::VectorXd& q,
                     int last_joint, std::vector<JointWorld>* world) {
  FramePose pose = FramePose::identity();
  if (world != nullptr) {
    world->resize(static_cast<size_t>(last_joint) + 1);
  }
  for (int i = 0; i <= last_joint; ++i) {
    const JointSpec& spec = chain.joint(i);
    pose = pose * spec.origin;
    // The joint rotates about its own axis, so the axis direction in the
    // base frame is unaffected by the joint angle itself.
    const Eigen::Vector3d axis_w = pose.rotation * spec.axis;
    if (world != nullptr) {
      (*world)[static_cast<size_t>(i)] = JointWorld{axis_w, pose.position};
    }
    FramePose joint_motion;
    joint_motion.rotation = Eigen::Quaterniond(
        Eigen::AngleAxisd(q(i), spec.axis));
    pose = pose * joint_motion;
  }
  return pose;
}

}  // namespace

FramePose FramePose::operator*(const FramePose& other) const {
  FramePose out;
  out.rotation = rotation * other.rotation;
  out.position = position + rotation * other.position;
  return out;
}

FramePose FramePose::inverse() const {
  FramePose out;
  out.rotation = rotation.conjugate();
  out.position = -(out.rotation * position);
  return out;
}

Eigen::Vector3d FramePose::transform_point(const Eigen::Vector3d& point) const {
  return position + rotation * point;
}

Eigen::Vector3d FramePose::approach_axis() const {
  return rotation * Eigen::Vector3d::UnitZ();
}

KinematicChain::KinematicChain(std::vector<JointSpec> joints,
                               std::map<std::string, FrameAttachment> frames)
    : joints_(std::move(joints)), frames_(std::move(frames)) {
  if (joints_.empty()) {
    throw InvalidArgumentError("chain must have at least one joint");
  }
  for (size_t i = 0; i < joints_.size(); ++i) {
    const JointSpec& spec = joints_[i];
    const std::string where = "joint " + std::to_string(i);
    if (std::abs(spec.axis.norm() - 1.0) > kUnitNormTol) {
      throw InvalidArgumentError(where + ": axis is not a unit vector");
    }
    if (std::abs(spec.origin.rotation.norm() - 1.0) > kUnitNormTol) {
      throw InvalidArgumentError(where +
                                 ": origin rotation is not normalized");
    }
    const JointLimits& lim = spec.limits;
    if (lim.pos_lo > lim.pos_hi || lim.vel_lo > lim.vel_hi ||
        lim.acc_lo > lim.acc_hi) {
      throw InvalidArgumentError(where + ": limit lower bound above upper");
    }
  }
  for (const auto& [name, attachment] : frames_) {
    if (attachment.parent_joint < 0 || attachment.parent_joint >= dof()) {
      throw InvalidArgumentError("frame '" + name +
                                 "': parent_joint out of range");
    }
    if (std::abs(attachment.offset.rotation.norm() - 1.0) > kUnitNormTol) {
      throw InvalidArgumentError("frame '" + name +
                                 "': offset rotation is not normalized");
    }
  }
}

const JointSpec& KinematicChain::joint(int index) const {
  if (index < 0 || index >= dof()) {
    throw NotFoundError("joint index " + std::to_string(index) +
                        " out of range");
  }
  return joints_[static_cast<size_t>(index)];
}

bool KinematicChain::has_frame(const std::string& name) const {
  return frames_.count(name) != 0;
}

const FrameAttachment& KinematicChain::frame(const std::string& name) const {
  auto it = frames_.find(name);
  if (it == frames_.end()) {
    throw NotFoundError("frame '" + name + "' not found");
  }
  return it->second;
}

namespace {

Eigen::VectorXd gather_limit(const std::vector<JointSpec>& joints,
                             double JointLimits::*field) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(joints.size()));
  for (size_t i = 0; i < joints.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = joints[i].limits.*field;
  }
  return out;
}

}  // namespace

Eigen::VectorXd KinematicChain::position_lower() const {
  return gather_limit(joints_, &JointLimits::pos_lo);
}
Eigen::VectorXd KinematicChain::position_upper() const {
  return gather_limit(joints_, &JointLimits::pos_hi);
}
Eigen::VectorXd KinematicChain::velocity_lower() const {
  return gather_limit(joints_, &JointLimits::vel_lo);
}
Eigen::VectorXd KinematicChain::velocity_upper() const {
  return gather_limit(joints_, &JointLimits::vel_hi);
}
Eigen::VectorXd KinematicChain::acceleration_lower() const {
  return gather_limit(joints_, &JointLimits::acc_lo);
}
Eigen::VectorXd KinematicChain::acceleration_upper() const {
  return gather_limit(joints_, &JointLimits::acc_hi);
}

FramePose forward_kinematics(const KinematicChain& chain,
                             const Eigen::VectorXd& q,
                             const std::string& frame) {
  check_joint_vector(chain, q, "q");
  const FrameAttachment& attachment = chain.frame(frame);
  FramePose pose =
      walk_chain(chain, q, attachment.parent_joint, nullptr) *
      attachment.offset;
  pose.rotation.normalize();
  return pose;
}

Eigen::MatrixXd geometric_jacobian(const KinematicChain& chain,
                                   const Eigen::VectorXd& q,
                                   const std::string& frame) {
  check_joint_vector(chain, q, "q");
  const FrameAttachment& attachment = chain.frame(frame);
  std::vector<JointWorld> world;
  const FramePose pose =
      walk_chain(chain, q, attachment.parent_joint, &world) *
      attachment.offset;

  Eigen::MatrixXd jacobian = Eigen::MatrixXd::Zero(6, chain.dof());
  for (int i = 0; i <= attachment.parent_joint; ++i) {
    const JointWorld& jw = world[static_cast<size_t>(i)];
    jacobian.block<3, 1>(0, i) = jw.axis.cross(pose.position - jw.origin);
    jacobian.block<3, 1>(3, i) = jw.axis;
  }
  return jacobian;
}

Eigen::MatrixXd local_rotational_rows(const KinematicChain& chain,
                                      const Eigen::VectorXd& q,
                                      const std::string& frame) {
  const Eigen::MatrixXd jacobian = geometric_jacobian(chain, q, frame);
  const FramePose pose = forward_kinematics(chain, q, frame);
  const Eigen::Matrix3d rot_t = pose.rotation.toRotationMatrix().transpose();
  return (rot_t * jacobian.bottomRows(3)).topRows(2);
}

}  // namespace priokin
