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

#ifndef PRIOKIN_SCENARIO_HPP_
#define PRIOKIN_SCENARIO_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "priokin/kinematics.hpp"
#include "priokin/pik.hpp"
#include "priokin/ptsc.hpp"
#include "priokin/tasks.hpp"

namespace priokin {

enum class ScenarioMode {
  kContinuous,  // closed-loop velocity control along a commanded profile
  kSelective,   // pose-domain inverse kinematics solves
};

enum class TraceFormat {
  kCsv,
  kJson,
};

// Piecewise-linear interpolation of a 3-vector over time. Sampling
// outside the knot range clamps to the nearest knot.
class PiecewiseLinear3 {
 public:
  PiecewiseLinear3() = default;
  explicit PiecewiseLinear3(
      std::vector<std::pair<double, Eigen::Vector3d>> knots);

  bool empty() const { return knots_.empty(); }
  Eigen::Vector3d sample(double t) const;
  const std::vector<std::pair<double, Eigen::Vector3d>>& knots() const {
    return knots_;
  }

 private:
  std::vector<std::pair<double, Eigen::Vector3d>> knots_;
};

// Floor constraint applied to every listed frame.
struct HeightConstraintSpec {
  double z_min = 0.0;
  std::vector<std::string> frames;
};

// Batch of randomized reachable pose targets for selective mode.
struct RandomTargetSpec {
  int count = 0;
  std::string frame = "spray";
};

struct CascadeSpec {
  SprayingMode mode = SprayingMode::kThreeLevel;
  double blend_weight = 1e-2;
};

// A complete experiment description, usually loaded from JSON. See
// data/scenarios/ for examples of both modes.
struct Scenario {
  std::string name;
  ScenarioMode mode = ScenarioMode::kContinuous;
  std::optional<KinematicChain> chain;
  std::string spray_frame = "spray";
  Eigen::VectorXd q_initial;
  Gains gains;

  // Continuous mode.
  double duration = 0.0;
  double dt = 0.01;
  CascadeSpec cascade;
  PiecewiseLinear3 velocity_profile;
  PiecewiseLinear3 desired_axis;  // normalized after interpolation
  Eigen::VectorXd posture_target;  // defaults to q_initial
  std::optional<HeightConstraintSpec> height_constraint;

  // Selective mode.
  std::vector<PrioritizedTask> tasks;
  std::vector<Eigen::VectorXd> initial_guesses;  // defaults to {q_initial}
  PikParams pik;
  std::optional<RandomTargetSpec> random_targets;

  void validate() const;
};

// One control step of a continuous run. `residuals` holds the
// translational, rotational and posture residuals of the step's solve;
// `active_bounds` has bit j set when joint j's velocity sits on its
// bound; `height_active` marks a tight height constraint row.
struct TraceRow {
  double t = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd qd;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::Zero();
  Eigen::Vector3d residuals = Eigen::Vector3d::Zero();
  uint32_t active_bounds = 0;
  bool height_active = false;
};

struct RunHooks {
  // Invoked with every QP the cascade assembles: (step, level, problem).
  std::function<void(int, int, const QpProblem&)> qp_observer;
};

// Runs a continuous scenario and returns one row per control step,
// including a final row at t = duration. Throws SolverError when a
// cascade solve fails mid-run.
std::vector<TraceRow> run_continuous(const Scenario& scenario,
                                     const RunHooks& hooks = {});

// Runs a selective scenario: one inverse kinematics solve per initial
// guess, or per random target when `random_targets` is set (seeded by
// `seed`).
std::vector<IkReport> run_selective(const Scenario& scenario,
                                    uint64_t seed = 0);

// Writes a trace. CSV uses 9 significant digits and is byte-stable for
// identical runs; JSON round-trips exactly through parse_trace_json.
void emit_trace(const std::vector<TraceRow>& rows, TraceFormat format,
                std::ostream& out);

std::vector<TraceRow> parse_trace_json(const std::string& text);

// Writes inverse kinematics reports as JSON.
void emit_reports(const std::vector<IkReport>& reports, std::ostream& out);

// Writes one QP as a JSON file; debugging aid behind the CLI's
// --debug-qp flag.
void write_qp_debug(const QpProblem& problem, const std::string& path);

// Loads a scenario from a JSON file; the chain path inside is resolved
// relative to the scenario file's directory.
Scenario load_scenario(const std::string& path);

// Parses a scenario from JSON text; `base_dir` anchors the chain path.
Scenario parse_scenario(const std::string& text,
                        const std::string& source_name,
                        const std::string& base_dir);

}  // namespace priokin

#endif  // PRIOKIN_SCENARIO_HPP_
