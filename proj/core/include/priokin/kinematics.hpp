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

#ifndef PRIOKIN_KINEMATICS_HPP_
#define PRIOKIN_KINEMATICS_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <map>
#include <string>
#include <vector>

namespace priokin {

// Rigid transform, also used to express the pose of a frame relative to
// the base. `rotation` maps body coordinates to base coordinates and is
// kept at unit norm.
struct FramePose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();

  static FramePose identity() { return FramePose{}; }

  // Composition: (*this) applied after mapping through `other`.
  FramePose operator*(const FramePose& other) const;

  FramePose inverse() const;

  // Maps a point given in this frame into the parent frame.
  Eigen::Vector3d transform_point(const Eigen::Vector3d& point) const;

  // Unit z axis of the frame expressed in base coordinates. For tool
  // frames this is the approach direction.
  Eigen::Vector3d approach_axis() const;
};

enum class JointKind {
  kRevolute,
};

// Position, velocity and acceleration limits of one joint. Lower bounds
// are stored as signed values (typically negative).
struct JointLimits {
  double pos_lo = 0.0;
  double pos_hi = 0.0;
  double vel_lo = 0.0;
  double vel_hi = 0.0;
  double acc_lo = 0.0;
  double acc_hi = 0.0;
};

// One joint of a serial chain. `origin` places the joint frame relative
// to the previous joint frame; `axis` is the unit rotation axis in the
// joint's own frame.
struct JointSpec {
  JointKind kind = JointKind::kRevolute;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  FramePose origin;
  JointLimits limits;
};

// A named frame rigidly attached to the link that follows `parent_joint`.
struct FrameAttachment {
  int parent_joint = 0;
  FramePose offset;
};

// Joint positions and velocities of a chain.
struct JointState {
  Eigen::VectorXd q;
  Eigen::VectorXd qd;
};

// Fixed-base serial chain of revolute joints with named attached frames.
// Construction validates the model: unit axes, normalized origin
// rotations, ordered limits and in-range frame parents.
class KinematicChain {
 public:
  KinematicChain(std::vector<JointSpec> joints,
                 std::map<std::string, FrameAttachment> frames);

  int dof() const { return static_cast<int>(joints_.size()); }

  const JointSpec& joint(int index) const;
  const std::vector<JointSpec>& joints() const { return joints_; }

  bool has_frame(const std::string& name) const;
  const FrameAttachment& frame(const std::string& name) const;
  const std::map<std::string, FrameAttachment>& frames() const {
    return frames_;
  }

  // Stacked limit vectors, one entry per joint.
  Eigen::VectorXd position_lower() const;
  Eigen::VectorXd position_upper() const;
  Eigen::VectorXd velocity_lower() const;
  Eigen::VectorXd velocity_upper() const;
  Eigen::VectorXd acceleration_lower() const;
  Eigen::VectorXd acceleration_upper() const;

 private:
  std::vector<JointSpec> joints_;
  std::map<std::string, FrameAttachment> frames_;
};

// Pose of `frame` for joint positions `q`.
FramePose forward_kinematics(const KinematicChain& chain,
                             const Eigen::VectorXd& q,
                             const std::string& frame);

// Geometric Jacobian of `frame` in base coordinates: rows 0..2 map joint
// rates to the linear velocity of the frame origin, rows 3..5 to the
// angular velocity of the frame. Joints beyond the frame's parent
// contribute zero columns.
Eigen::MatrixXd geometric_jacobian(const KinematicChain& chain,
                                   const Eigen::VectorXd& q,
                                   const std::string& frame);

// First two rows of the angular Jacobian rotated into `frame`'s own
// coordinates: the rows that map joint rates to angular velocity about
// the frame's local x and y axes. Rotation about the local z (approach)
// axis is deliberately absent, which is what makes pointing tasks leave
// that direction free.
Eigen::MatrixXd local_rotational_rows(const KinematicChain& chain,
                                      const Eigen::VectorXd& q,
                                      const std::string& frame);

// Loads a chain from a JSON file. See data/chains/arm6.json for the
// schema: a "joints" array (axis, origin xyz/rpy, pos/vel/acc limits)
// and a "frames" object (parent_joint, xyz, rpy).
KinematicChain load_chain(const std::string& path);

// Parses a chain from JSON text. `source_name` is used in diagnostics.
KinematicChain parse_chain(const std::string& text,
                           const std::string& source_name);

}  // namespace priokin

#endif  // PRIOKIN_KINEMATICS_HPP_
