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

// All JSON ingestion and emission lives in this translation unit: chain
// and scenario loading, trace serialization and the QP debug dump.

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json_internal.hpp"
#include "priokin/errors.hpp"
#include "priokin/kinematics.hpp"
#include "priokin/scenario.hpp"

namespace priokin {
namespace {

using nlohmann::json;

constexpr double kMinAxisNorm = 1e-6;

[[noreturn]] void fail(const std::string& source, const std::string& path,
                       const std::string& what) {
  throw ParseError(source + ": " + path + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("error while reading '" + path + "'");
  }
  return buffer.str();
}

// Line number (1-based) of a byte offset, for syntax error messages.
size_t line_of_offset(const std::string& text, size_t offset) {
  size_t line = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
    }
  }
  return line;
}

json parse_document(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(source + ":" +
                     std::to_string(line_of_offset(text, offset)) + ": " +
                     e.what());
  }
}

const json& member(const json& obj, const char* key,
                   const std::string& source, const std::string& path) {
  if (!obj.is_object()) {
    fail(source, path, "expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    fail(source, path, std::string("missing required key '") + key + "'");
  }
  return *it;
}

const json* optional_member(const json& obj, const char* key) {
  if (!obj.is_object()) {
    return nullptr;
  }
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_double(const json& value, const std::string& source,
                 const std::string& path) {
  if (!value.is_number()) {
    fail(source, path, "expected a number");
  }
  return value.get<double>();
}

int as_int(const json& value, const std::string& source,
           const std::string& path) {
  if (!value.is_number_integer()) {
    fail(source, path, "expected an integer");
  }
  return value.get<int>();
}

bool as_bool(const json& value, const std::string& source,
             const std::string& path) {
  if (!value.is_boolean()) {
    fail(source, path, "expected a boolean");
  }
  return value.get<bool>();
}

std::string as_string(const json& value, const std::string& source,
                      const std::string& path) {
  if (!value.is_string()) {
    fail(source, path, "expected a string");
  }
  return value.get<std::string>();
}

Eigen::VectorXd as_vector(const json& value, const std::string& source,
                          const std::string& path) {
  if (!value.is_array() || value.empty()) {
    fail(source, path, "expected a non-empty array of numbers");
  }
  Eigen::VectorXd out(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = as_double(
        value[i], source, path + "[" + std::to_string(i) + "]");
  }
  return out;
}

Eigen::Vector3d as_vec3(const json& value, const std::string& source,
                        const std::string& path) {
  if (!value.is_array() || value.size() != 3) {
    fail(source, path, "expected an array of 3 numbers");
  }
  return Eigen::Vector3d(as_double(value[0], source, path + "[0]"),
                         as_double(value[1], source, path + "[1]"),
                         as_double(value[2], source, path + "[2]"));
}

std::pair<double, double> as_range(const json& value,
                                   const std::string& source,
                                   const std::string& path) {
  if (!value.is_array() || value.size() != 2) {
    fail(source, path, "expected an array [lo, hi]");
  }
  return {as_double(value[0], source, path + "[0]"),
          as_double(value[1], source, path + "[1]")};
}

// Roll-pitch-yaw (extrinsic x-y-z) to quaternion.
Eigen::Quaterniond rpy_to_quaternion(const Eigen::Vector3d& rpy) {
  return Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
         Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
         Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX());
}

FramePose parse_pose(const json& obj, const std::string& source,
                     const std::string& path) {
  FramePose pose;
  if (const json* xyz = optional_member(obj, "xyz")) {
    pose.position = as_vec3(*xyz, source, path + ".xyz");
  }
  if (const json* rpy = optional_member(obj, "rpy")) {
    pose.rotation = rpy_to_quaternion(as_vec3(*rpy, source, path + ".rpy"));
  }
  return pose;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Task parse_task(const json& obj, const std::string& source,
                const std::string& path, int dof) {
  const std::string type =
      as_string(member(obj, "type", source, path), source, path + ".type");
  auto frame_of = [&]() {
    return as_string(member(obj, "frame", source, path), source,
                     path + ".frame");
  };
  try {
    if (type == "frame_pose") {
      const json& target = member(obj, "target", source, path);
      return Task::frame_pose(frame_of(),
                              parse_pose(target, source, path + ".target"));
    }
    if (type == "frame_position") {
      return Task::frame_position(
          frame_of(),
          as_vec3(member(obj, "target", source, path), source,
                  path + ".target"));
    }
    if (type == "frame_orientation") {
      const json& target = member(obj, "target", source, path);
      const Eigen::Vector3d rpy =
          as_vec3(member(target, "rpy", source, path + ".target"), source,
                  path + ".target.rpy");
      return Task::frame_orientation(frame_of(), rpy_to_quaternion(rpy));
    }
    if (type == "approach_axis") {
      Eigen::Vector3d axis =
          as_vec3(member(obj, "target", source, path), source,
                  path + ".target");
      if (axis.norm() < kMinAxisNorm) {
        fail(source, path + ".target", "axis is numerically zero");
      }
      return Task::frame_approach_axis(frame_of(), axis.normalized());
    }
    if (type == "joint_posture") {
      const Eigen::VectorXd target =
          as_vector(member(obj, "target", source, path), source,
                    path + ".target");
      if (target.size() != dof) {
        fail(source, path + ".target", "expected " + std::to_string(dof) +
                                           " entries");
      }
      return Task::joint_posture(target);
    }
  } catch (const InvalidArgumentError& e) {
    fail(source, path, e.what());
  }
  fail(source, path + ".type", "unknown task type '" + type + "'");
}

PrioritizedTask parse_task_entry(const json& obj, const std::string& source,
                                 const std::string& path, int dof) {
  PrioritizedTask entry;
  entry.task = parse_task(obj, source, path, dof);
  if (const json* blend = optional_member(obj, "blend")) {
    entry.blend_task = parse_task(*blend, source, path + ".blend", dof);
    if (const json* weight = optional_member(*blend, "weight")) {
      entry.blend_weight =
          as_double(*weight, source, path + ".blend.weight");
    }
  }
  return entry;
}

PiecewiseLinear3 parse_profile(const json& value, const std::string& source,
                               const std::string& path,
                               const char* vector_key) {
  if (!value.is_array() || value.empty()) {
    fail(source, path, "expected a non-empty array of knots");
  }
  std::vector<std::pair<double, Eigen::Vector3d>> knots;
  knots.reserve(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    const std::string knot_path = path + "[" + std::to_string(i) + "]";
    const json& knot = value[i];
    const double t = as_double(member(knot, "t", source, knot_path), source,
                               knot_path + ".t");
    const Eigen::Vector3d v =
        as_vec3(member(knot, vector_key, source, knot_path), source,
                knot_path + "." + vector_key);
    knots.emplace_back(t, v);
  }
  try {
    return PiecewiseLinear3(std::move(knots));
  } catch (const InvalidArgumentError& e) {
    fail(source, path, e.what());
  }
}

void parse_pik_params(const json& obj, const std::string& source,
                      const std::string& path, PikParams* params) {
  if (!obj.is_object()) {
    fail(source, path, "expected an object");
  }
  for (const auto& [key, value] : obj.items()) {
    const std::string key_path = path + "." + key;
    if (key == "use_limits") {
      params->use_limits = as_bool(value, source, key_path);
    } else if (key == "error_threshold") {
      params->error_threshold = as_double(value, source, key_path);
    } else if (key == "gradient_threshold") {
      params->gradient_threshold = as_double(value, source, key_path);
    } else if (key == "step_bound") {
      params->step_bound = as_double(value, source, key_path);
    } else if (key == "polish") {
      params->polish = as_bool(value, source, key_path);
    } else if (key == "polish_gradient_threshold") {
      params->polish_gradient_threshold = as_double(value, source, key_path);
    } else if (key == "polish_step_bound") {
      params->polish_step_bound = as_double(value, source, key_path);
    } else if (key == "position_clamp") {
      params->position_clamp = as_double(value, source, key_path);
    } else if (key == "orientation_clamp") {
      params->orientation_clamp = as_double(value, source, key_path);
    } else if (key == "max_iterations") {
      params->max_iterations = as_int(value, source, key_path);
    } else if (key == "max_time") {
      params->max_time = as_double(value, source, key_path);
    } else {
      fail(source, key_path, "unknown solver parameter");
    }
  }
}

const char* to_string(IkStop stop) {
  switch (stop) {
    case IkStop::kErrorBelowThreshold:
      return "error_below_threshold";
    case IkStop::kGradientStalled:
      return "gradient_stalled";
    case IkStop::kMaxIterations:
      return "max_iterations";
    case IkStop::kMaxTime:
      return "max_time";
    case IkStop::kCascadeFailure:
      return "cascade_failure";
  }
  return "unknown";
}

}  // namespace

KinematicChain parse_chain(const std::string& text,
                           const std::string& source_name) {
  const json doc = parse_document(text, source_name);
  const json& joints_json = member(doc, "joints", source_name, "$");
  if (!joints_json.is_array() || joints_json.empty()) {
    fail(source_name, "$.joints", "expected a non-empty array");
  }

  std::vector<JointSpec> joints;
  joints.reserve(joints_json.size());
  for (size_t i = 0; i < joints_json.size(); ++i) {
    const std::string path = "$.joints[" + std::to_string(i) + "]";
    const json& joint = joints_json[i];
    JointSpec spec;
    spec.axis = as_vec3(member(joint, "axis", source_name, path),
                        source_name, path + ".axis");
    if (const json* origin = optional_member(joint, "origin")) {
      spec.origin = parse_pose(*origin, source_name, path + ".origin");
    }
    const json& limits = member(joint, "limits", source_name, path);
    const auto [pos_lo, pos_hi] =
        as_range(member(limits, "pos", source_name, path + ".limits"),
                 source_name, path + ".limits.pos");
    const auto [vel_lo, vel_hi] =
        as_range(member(limits, "vel", source_name, path + ".limits"),
                 source_name, path + ".limits.vel");
    const auto [acc_lo, acc_hi] =
        as_range(member(limits, "acc", source_name, path + ".limits"),
                 source_name, path + ".limits.acc");
    spec.limits = JointLimits{pos_lo, pos_hi, vel_lo, vel_hi, acc_lo,
                              acc_hi};
    joints.push_back(std::move(spec));
  }

  std::map<std::string, FrameAttachment> frames;
  if (const json* frames_json = optional_member(doc, "frames")) {
    if (!frames_json->is_object()) {
      fail(source_name, "$.frames", "expected an object");
    }
    for (const auto& [name, value] : frames_json->items()) {
      const std::string path = "$.frames." + name;
      FrameAttachment attachment;
      attachment.parent_joint =
          as_int(member(value, "parent_joint", source_name, path),
                 source_name, path + ".parent_joint");
      attachment.offset = parse_pose(value, source_name, path);
      frames.emplace(name, std::move(attachment));
    }
  }

  try {
    return KinematicChain(std::move(joints), std::move(frames));
  } catch (const InvalidArgumentError& e) {
    throw ParseError(source_name + ": " + e.what());
  }
}

KinematicChain load_chain(const std::string& path) {
  return parse_chain(read_file(path), path);
}

Scenario parse_scenario(const std::string& text,
                        const std::string& source_name,
                        const std::string& base_dir) {
  const json doc = parse_document(text, source_name);
  Scenario scenario;

  if (const json* name = optional_member(doc, "name")) {
    scenario.name = as_string(*name, source_name, "$.name");
  }

  const std::string mode = as_string(
      member(doc, "mode", source_name, "$"), source_name, "$.mode");
  if (mode == "continuous") {
    scenario.mode = ScenarioMode::kContinuous;
  } else if (mode == "selective") {
    scenario.mode = ScenarioMode::kSelective;
  } else {
    fail(source_name, "$.mode",
         "expected 'continuous' or 'selective', got '" + mode + "'");
  }

  const std::string chain_ref =
      as_string(member(doc, "chain", source_name, "$"), source_name,
                "$.chain");
  std::filesystem::path chain_path(chain_ref);
  if (chain_path.is_relative() && !base_dir.empty()) {
    chain_path = std::filesystem::path(base_dir) / chain_path;
  }
  scenario.chain = load_chain(chain_path.string());
  const int dof = scenario.chain->dof();

  scenario.q_initial =
      as_vector(member(doc, "q_initial", source_name, "$"), source_name,
                "$.q_initial");

  if (const json* frame = optional_member(doc, "spray_frame")) {
    scenario.spray_frame = as_string(*frame, source_name, "$.spray_frame");
  }
  if (const json* gains = optional_member(doc, "gains")) {
    if (const json* kp = optional_member(*gains, "kp_joint")) {
      scenario.gains.kp_joint = as_double(*kp, source_name,
                                          "$.gains.kp_joint");
    }
    if (const json* kp = optional_member(*gains, "kp_omega")) {
      scenario.gains.kp_omega = as_double(*kp, source_name,
                                          "$.gains.kp_omega");
    }
  }

  if (scenario.mode == ScenarioMode::kContinuous) {
    scenario.duration = as_double(
        member(doc, "duration", source_name, "$"), source_name,
        "$.duration");
    if (const json* dt = optional_member(doc, "dt")) {
      scenario.dt = as_double(*dt, source_name, "$.dt");
    }
    if (const json* cascade = optional_member(doc, "cascade")) {
      if (const json* cascade_mode = optional_member(*cascade, "mode")) {
        const std::string mode_name =
            as_string(*cascade_mode, source_name, "$.cascade.mode");
        if (mode_name == "three_level") {
          scenario.cascade.mode = SprayingMode::kThreeLevel;
        } else if (mode_name == "two_level_blend") {
          scenario.cascade.mode = SprayingMode::kTwoLevelBlend;
        } else {
          fail(source_name, "$.cascade.mode",
               "expected 'three_level' or 'two_level_blend'");
        }
      }
      if (const json* weight = optional_member(*cascade, "blend_weight")) {
        scenario.cascade.blend_weight =
            as_double(*weight, source_name, "$.cascade.blend_weight");
      }
    }
    scenario.velocity_profile =
        parse_profile(member(doc, "velocity_profile", source_name, "$"),
                      source_name, "$.velocity_profile", "v");

    const json& axis = member(doc, "desired_axis", source_name, "$");
    if (axis.is_array() && !axis.empty() && axis[0].is_number()) {
      const Eigen::Vector3d constant =
          as_vec3(axis, source_name, "$.desired_axis");
      scenario.desired_axis = PiecewiseLinear3({{0.0, constant}});
    } else {
      scenario.desired_axis =
          parse_profile(axis, source_name, "$.desired_axis", "a");
    }

    scenario.posture_target = scenario.q_initial;
    if (const json* posture = optional_member(doc, "posture_target")) {
      scenario.posture_target =
          as_vector(*posture, source_name, "$.posture_target");
    }
    if (const json* height = optional_member(doc, "height_constraint")) {
      HeightConstraintSpec spec;
      spec.z_min = as_double(
          member(*height, "z_min", source_name, "$.height_constraint"),
          source_name, "$.height_constraint.z_min");
      spec.frames = {scenario.spray_frame};
      if (const json* frames = optional_member(*height, "frames")) {
        if (!frames->is_array() || frames->empty()) {
          fail(source_name, "$.height_constraint.frames",
               "expected a non-empty array of frame names");
        }
        spec.frames.clear();
        for (size_t i = 0; i < frames->size(); ++i) {
          spec.frames.push_back(as_string(
              (*frames)[i], source_name,
              "$.height_constraint.frames[" + std::to_string(i) + "]"));
        }
      }
      scenario.height_constraint = std::move(spec);
    }
  } else {
    if (const json* tasks = optional_member(doc, "tasks")) {
      if (!tasks->is_array()) {
        fail(source_name, "$.tasks", "expected an array");
      }
      for (size_t i = 0; i < tasks->size(); ++i) {
        scenario.tasks.push_back(
            parse_task_entry((*tasks)[i], source_name,
                             "$.tasks[" + std::to_string(i) + "]", dof));
      }
    }
    if (const json* guesses = optional_member(doc, "initial_guesses")) {
      if (!guesses->is_array() || guesses->empty()) {
        fail(source_name, "$.initial_guesses",
             "expected a non-empty array");
      }
      for (size_t i = 0; i < guesses->size(); ++i) {
        scenario.initial_guesses.push_back(as_vector(
            (*guesses)[i], source_name,
            "$.initial_guesses[" + std::to_string(i) + "]"));
      }
    }
    if (const json* pik = optional_member(doc, "pik")) {
      parse_pik_params(*pik, source_name, "$.pik", &scenario.pik);
    }
    if (const json* random = optional_member(doc, "random_targets")) {
      RandomTargetSpec spec;
      spec.count = as_int(
          member(*random, "count", source_name, "$.random_targets"),
          source_name, "$.random_targets.count");
      spec.frame = scenario.spray_frame;
      if (const json* frame = optional_member(*random, "frame")) {
        spec.frame = as_string(*frame, source_name,
                               "$.random_targets.frame");
      }
      scenario.random_targets = std::move(spec);
    }
  }

  try {
    scenario.validate();
  } catch (const Error& e) {
    throw ParseError(source_name + ": " + e.what());
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  const std::string base_dir =
      std::filesystem::path(path).parent_path().string();
  return parse_scenario(read_file(path), path, base_dir);
}

void emit_trace_json(const std::vector<TraceRow>& rows, std::ostream& out) {
  json doc;
  json array = json::array();
  for (const TraceRow& row : rows) {
    json entry;
    entry["t"] = row.t;
    entry["q"] = vector_to_json(row.q);
    entry["qd"] = vector_to_json(row.qd);
    entry["position"] = vector_to_json(row.position);
    entry["axis"] = vector_to_json(row.axis);
    entry["residuals"] = vector_to_json(row.residuals);
    entry["active_bounds"] = row.active_bounds;
    entry["height_active"] = row.height_active;
    array.push_back(std::move(entry));
  }
  doc["rows"] = std::move(array);
  out << doc.dump(2) << '\n';
}

std::vector<TraceRow> parse_trace_json(const std::string& text) {
  const std::string source = "<trace>";
  const json doc = parse_document(text, source);
  const json& rows_json = member(doc, "rows", source, "$");
  if (!rows_json.is_array()) {
    fail(source, "$.rows", "expected an array");
  }
  std::vector<TraceRow> rows;
  rows.reserve(rows_json.size());
  for (size_t i = 0; i < rows_json.size(); ++i) {
    const std::string path = "$.rows[" + std::to_string(i) + "]";
    const json& entry = rows_json[i];
    TraceRow row;
    row.t = as_double(member(entry, "t", source, path), source,
                      path + ".t");
    row.q = as_vector(member(entry, "q", source, path), source,
                      path + ".q");
    row.qd = as_vector(member(entry, "qd", source, path), source,
                       path + ".qd");
    row.position = as_vec3(member(entry, "position", source, path), source,
                           path + ".position");
    row.axis = as_vec3(member(entry, "axis", source, path), source,
                       path + ".axis");
    row.residuals = as_vec3(member(entry, "residuals", source, path),
                            source, path + ".residuals");
    const json& bounds = member(entry, "active_bounds", source, path);
    if (!bounds.is_number_unsigned()) {
      fail(source, path + ".active_bounds", "expected an unsigned integer");
    }
    row.active_bounds = bounds.get<uint32_t>();
    row.height_active = as_bool(member(entry, "height_active", source,
                                       path),
                                source, path + ".height_active");
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_reports(const std::vector<IkReport>& reports, std::ostream& out) {
  json doc;
  json array = json::array();
  for (const IkReport& report : reports) {
    json entry;
    entry["q"] = vector_to_json(report.q);
    entry["task_errors"] = report.task_errors;
    entry["iterations"] = report.iterations;
    entry["termination"] = to_string(report.termination);
    entry["wall_time"] = report.wall_time;
    entry["polished"] = report.polished;
    entry["cascade_failed"] = report.cascade_failed;
    array.push_back(std::move(entry));
  }
  doc["reports"] = std::move(array);
  out << doc.dump(2) << '\n';
}

void write_qp_debug(const QpProblem& problem, const std::string& path) {
  // Bounds may be infinite; JSON has no literal for that, so spell them
  // out as strings.
  auto bounds_to_json = [](const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::isinf(v(i))) {
        out.push_back(v(i) > 0 ? "inf" : "-inf");
      } else {
        out.push_back(v(i));
      }
    }
    return out;
  };
  json doc;
  doc["H"] = matrix_to_json(problem.H);
  doc["f"] = vector_to_json(problem.f);
  doc["A_eq"] = matrix_to_json(problem.A_eq);
  doc["b_eq"] = vector_to_json(problem.b_eq);
  doc["A_in"] = matrix_to_json(problem.A_in);
  doc["b_in"] = vector_to_json(problem.b_in);
  doc["lb"] = bounds_to_json(problem.lb);
  doc["ub"] = bounds_to_json(problem.ub);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("error while writing '" + path + "'");
  }
}

}  // namespace priokin
