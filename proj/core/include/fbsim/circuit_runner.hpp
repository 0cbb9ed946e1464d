// Copyright 2026 The fbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FBSIM_CIRCUIT_RUNNER_HPP
#define FBSIM_CIRCUIT_RUNNER_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fbsim/circuit_document.hpp"
#include "fbsim/scenarios.hpp"

namespace fbsim {

/// Structured output of a document run. Serializes deterministically (stable
/// key and row order) so byte-identical reruns are a testable property; only
/// wall_clock_ms varies between runs.
struct ResultDocument {
  struct OutcomeProb {
    std::string outcome;
    double probability = 0.0;
  };

  struct JointOutcome {
    std::vector<std::pair<std::string, std::string>> outcomes; // detector -> outcome label
    double probability = 0.0;
  };

  std::string tool_name;
  std::string tool_version;
  double wall_clock_ms = 0.0;
  CircuitDocument input_echo;
  std::optional<std::vector<CircuitDocument::StateTerm>> final_state;
  std::vector<std::pair<std::string, std::vector<OutcomeProb>>> detectors;
  std::vector<JointOutcome> joint_outcomes;
  std::optional<double> conditioned_probability;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> warnings;
};

/// Applies components in order, evaluates detections and metrics, and
/// returns the full result record. Deterministic for identical input.
ResultDocument run_document(const CircuitDocument& doc);

/// One-parameter scan over a document field.
struct SweepSpec {
  std::string parameter_path; ///< e.g. "components[1].theta"
  double from = 0.0;
  double to = 0.0;
  int steps = 2;                    ///< ≥ 2; endpoints always included
  std::vector<std::string> metrics; ///< names from the document's outputs; empty = all
};

struct SweepResult {
  std::string parameter_path;
  std::vector<std::string> columns; ///< "param" followed by metric names
  std::vector<std::vector<double>> rows;
};

SweepResult run_sweep(const CircuitDocument& doc, const SweepSpec& spec);

std::string serialize_result_json(const ResultDocument& result);
std::string serialize_result_csv(const ResultDocument& result);
std::string serialize_sweep_json(const SweepResult& sweep);
std::string serialize_sweep_csv(const SweepResult& sweep);
std::string serialize_scenario_json(const std::string& scenario_name, const ScenarioResult& result);
std::string serialize_scenario_csv(const std::string& scenario_name, const ScenarioResult& result);

} // namespace fbsim

#endif
