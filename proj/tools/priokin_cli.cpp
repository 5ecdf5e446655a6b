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

// Command line front end.
//
//   priokin spray <scenario.json>   closed-loop run, trace to CSV/JSON
//   priokin ik <scenario.json>      inverse kinematics solves, reports
//   priokin check <chain.json>      chain summary and sanity check
//
// Exit codes: 0 success, 1 argument/validation/parse errors, 2 solver
// failures, 3 I/O errors.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "priokin/errors.hpp"
#include "priokin/kinematics.hpp"
#include "priokin/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

// Streams the writer's output to `path`, or to stdout when empty.
template <typename Writer>
void write_output(const std::string& path, Writer&& writer) {
  if (path.empty()) {
    writer(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw priokin::IoError("cannot open '" + path + "' for writing");
  }
  writer(out);
  out.flush();
  if (!out) {
    throw priokin::IoError("error while writing '" + path + "'");
  }
}

int run_spray(const std::string& scenario_path, const std::string& out_path,
              const std::string& format, const std::string& debug_dir) {
  const priokin::Scenario scenario = priokin::load_scenario(scenario_path);

  priokin::RunHooks hooks;
  if (!debug_dir.empty()) {
    std::filesystem::create_directories(debug_dir);
    hooks.qp_observer = [&debug_dir](int step, int level,
                                     const priokin::QpProblem& qp) {
      char name[64];
      std::snprintf(name, sizeof(name), "qp_step%05d_level%d.json", step,
                    level);
      priokin::write_qp_debug(
          qp, (std::filesystem::path(debug_dir) / name).string());
    };
  }

  const std::vector<priokin::TraceRow> rows =
      priokin::run_continuous(scenario, hooks);
  const priokin::TraceFormat trace_format =
      format == "json" ? priokin::TraceFormat::kJson
                       : priokin::TraceFormat::kCsv;
  write_output(out_path, [&](std::ostream& out) {
    priokin::emit_trace(rows, trace_format, out);
  });
  return kExitOk;
}

int run_ik(const std::string& scenario_path, const std::string& out_path,
           uint64_t seed) {
  const priokin::Scenario scenario = priokin::load_scenario(scenario_path);
  const std::vector<priokin::IkReport> reports =
      priokin::run_selective(scenario, seed);
  write_output(out_path, [&](std::ostream& out) {
    priokin::emit_reports(reports, out);
  });
  return kExitOk;
}

int run_check(const std::string& chain_path) {
  const priokin::KinematicChain chain = priokin::load_chain(chain_path);
  double reach = 0.0;
  for (const priokin::JointSpec& joint : chain.joints()) {
    reach += joint.origin.position.norm();
  }
  double longest_offset = 0.0;
  for (const auto& [name, attachment] : chain.frames()) {
    longest_offset =
        std::max(longest_offset, attachment.offset.position.norm());
  }
  std::cout << chain_path << ": " << chain.dof() << " joints, "
            << chain.frames().size() << " frames, reach upper bound "
            << reach + longest_offset << " m\n";
  for (const auto& [name, attachment] : chain.frames()) {
    std::cout << "  frame " << name << ": after joint "
              << attachment.parent_joint << ", offset "
              << attachment.offset.position.transpose() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prioritized task-space control for pointing tools"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string chain_path;
  std::string out_path;
  std::string format = "csv";
  std::string debug_dir;
  uint64_t seed = 0;

  CLI::App* spray = app.add_subcommand(
      "spray", "Run a continuous scenario and write its trace");
  spray->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();
  spray->add_option("--out", out_path, "Output path (default stdout)");
  spray->add_option("--format", format, "Trace format")
      ->check(CLI::IsMember({"csv", "json"}));
  spray->add_option("--debug-qp", debug_dir,
                    "Dump every assembled QP into this directory");

  CLI::App* ik = app.add_subcommand(
      "ik", "Run a selective scenario and write solve reports");
  ik->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();
  ik->add_option("--out", out_path, "Output path (default stdout)");
  ik->add_option("--seed", seed, "Seed for randomized target batches");

  CLI::App* check =
      app.add_subcommand("check", "Validate and summarize a chain file");
  check->add_option("chain", chain_path, "Chain JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spray->parsed()) {
      return run_spray(scenario_path, out_path, format, debug_dir);
    }
    if (ik->parsed()) {
      return run_ik(scenario_path, out_path, seed);
    }
    return run_check(chain_path);
  } catch (const priokin::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const priokin::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const priokin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitUsage;
  }
}
