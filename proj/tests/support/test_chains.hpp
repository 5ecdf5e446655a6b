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

// Chain builders shared by the test suites.

#ifndef PRIOKIN_TESTS_SUPPORT_TEST_CHAINS_HPP_
#define PRIOKIN_TESTS_SUPPORT_TEST_CHAINS_HPP_

#include <map>
#include <string>
#include <vector>

#include "priokin/kinematics.hpp"
#include "test_rng.hpp"

namespace priokin::testing {

inline JointLimits generous_limits() {
  return JointLimits{-3.0, 3.0, -2.5, 2.5, -40.0, 40.0};
}

inline JointSpec make_joint(const Eigen::Vector3d& axis,
                            const Eigen::Vector3d& origin_xyz,
                            const JointLimits& limits = generous_limits()) {
  JointSpec spec;
  spec.axis = axis;
  spec.origin.position = origin_xyz;
  spec.limits = limits;
  return spec;
}

// Two-joint planar arm in the x-z plane, both joints about +y, link
// lengths 1.0 and 0.7, with a "tip" frame. Closed-form kinematics make
// this the reference fixture for exact checks.
inline KinematicChain make_planar_arm() {
  std::vector<JointSpec> joints;
  joints.push_back(make_joint(Eigen::Vector3d::UnitY(),
                              Eigen::Vector3d::Zero()));
  joints.push_back(make_joint(Eigen::Vector3d::UnitY(),
                              Eigen::Vector3d(1.0, 0.0, 0.0)));
  std::map<std::string, FrameAttachment> frames;
  FrameAttachment tip;
  tip.parent_joint = 1;
  tip.offset.position = Eigen::Vector3d(0.7, 0.0, 0.0);
  frames.emplace("tip", tip);
  return KinematicChain(std::move(joints), std::move(frames));
}

// Six-joint arm matching data/chains/arm6.json: vertical base axis,
// shoulder and elbow pitch, forearm roll and a two-axis wrist, with
// spray, wrist and elbow frames.
inline KinematicChain make_arm6() {
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d y = Eigen::Vector3d::UnitY();
  std::vector<JointSpec> joints;
  joints.push_back(make_joint(z, Eigen::Vector3d(0.0, 0.0, 0.15),
                              JointLimits{-2.9, 2.9, -0.8, 0.8, -10, 10}));
  joints.push_back(make_joint(y, Eigen::Vector3d::Zero(),
                              JointLimits{-2.0, 2.0, -0.8, 0.8, -10, 10}));
  joints.push_back(make_joint(y, Eigen::Vector3d(0.0, 0.0, 0.65),
                              JointLimits{-2.6, 2.6, -0.8, 0.8, -10, 10}));
  joints.push_back(make_joint(z, Eigen::Vector3d(0.0, 0.0, 0.55),
                              JointLimits{-2.9, 2.9, -2.0, 2.0, -14, 14}));
  joints.push_back(make_joint(y, Eigen::Vector3d::Zero(),
                              JointLimits{-2.2, 2.2, -2.0, 2.0, -14, 14}));
  joints.push_back(make_joint(z, Eigen::Vector3d::Zero(),
                              JointLimits{-2.9, 2.9, -2.0, 2.0, -14, 14}));

  std::map<std::string, FrameAttachment> frames;
  FrameAttachment spray;
  spray.parent_joint = 5;
  spray.offset.position = Eigen::Vector3d(0.0, 0.0, 0.18);
  frames.emplace("spray", spray);
  FrameAttachment wrist;
  wrist.parent_joint = 5;
  frames.emplace("wrist", wrist);
  FrameAttachment elbow;
  elbow.parent_joint = 2;
  frames.emplace("elbow", elbow);
  return KinematicChain(std::move(joints), std::move(frames));
}

// Random serial chain with unit axes, bounded origins and a tip frame;
// rotations of the joint origins are random as well.
inline KinematicChain make_random_chain(TestRng& rng, int dof) {
  std::vector<JointSpec> joints;
  for (int i = 0; i < dof; ++i) {
    JointSpec spec;
    spec.axis = rng.unit_vector();
    spec.origin.position =
        Eigen::Vector3d(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                        rng.uniform(0.05, 0.4));
    spec.origin.rotation = rng.unit_quaternion();
    spec.limits = generous_limits();
    joints.push_back(std::move(spec));
  }
  std::map<std::string, FrameAttachment> frames;
  FrameAttachment tip;
  tip.parent_joint = dof - 1;
  tip.offset.position =
      Eigen::Vector3d(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
                      rng.uniform(0.05, 0.2));
  tip.offset.rotation = rng.unit_quaternion();
  frames.emplace("tip", tip);
  // A mid-chain frame exercises the zero columns beyond the parent.
  if (dof >= 2) {
    FrameAttachment mid;
    mid.parent_joint = dof / 2;
    mid.offset.position = Eigen::Vector3d(0.05, -0.02, 0.1);
    frames.emplace("mid", mid);
  }
  return KinematicChain(std::move(joints), std::move(frames));
}

}  // namespace priokin::testing

#endif  // PRIOKIN_TESTS_SUPPORT_TEST_CHAINS_HPP_
