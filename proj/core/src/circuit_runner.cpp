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

#include "fbsim/circuit_runner.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <regex>
#include <sstream>

#include "json.hpp"

#include "fbsim/errors.hpp"
#include "fbsim/tolerances.hpp"
#include "fbsim/version.hpp"

namespace fbsim {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> display_names(const CompiledCircuit& circuit) {
  std::vector<std::string> names(static_cast<std::size_t>(circuit.registry->size()));
  for (int i = 0; i < circuit.registry->size(); ++i) {
    names[static_cast<std::size_t>(i)] = circuit.registry->mode(i).label();
  }
  for (const auto& [name, index] : circuit.mode_index) {
    names[static_cast<std::size_t>(index)] = name;
  }
  return names;
}

/// One leaf of the detection tree: a joint assignment of outcome labels to
/// the detectors applied so far, with the conditional state mixture.
struct Branch {
  std::vector<std::pair<std::string, std::string>> outcomes;
  double probability = 1.0;
  StateMixture mixture;
};

std::vector<Branch> split_branch(const Branch& branch, const CircuitDocument::DetectionDecl& decl,
                                 const std::vector<int>& watched, const ModeNamer& namer) {
  struct Bucket {
    double probability = 0.0;
    StateMixture mixture;
  };
  std::map<std::string, Bucket> buckets;
  for (const auto& [component_weight, component] : branch.mixture) {
    // Plain local: structured bindings cannot be captured by lambdas yet.
    const double weight = component_weight;
    auto absorb = [&buckets, weight](const DetectionOutcome& outcome) {
      if (outcome.probability <= 0.0) return;
      Bucket& bucket = buckets[outcome.label];
      bucket.probability += weight * outcome.probability;
      for (const auto& [w, state] : outcome.post_components) {
        bucket.mixture.emplace_back(weight * outcome.probability * w, state);
      }
    };
    if (decl.kind == CircuitDocument::DetectionDecl::Kind::Pattern) {
      DetectionResult det = condition_on_detection(component, watched, decl.frequency_blind, namer);
      for (const auto& outcome : det.clicks) absorb(outcome);
      absorb(det.no_click);
    } else {
      DetectionPlan plan{decl.name, watched, decl.efficiency, decl.dark_count_probability};
      for (const auto& outcome : herald_outcomes(component, plan)) {
        if (outcome.probability <= 0.0) continue;
        Bucket& bucket = buckets[outcome.label];
        bucket.probability += weight * outcome.probability;
        for (const auto& [w, state] : outcome.post_components) {
          bucket.mixture.emplace_back(weight * outcome.probability * w, state);
        }
      }
    }
  }
  std::vector<Branch> out;
  for (auto& [label, bucket] : buckets) {
    Branch next;
    next.outcomes = branch.outcomes;
    next.outcomes.emplace_back(decl.name, label);
    next.probability = branch.probability * bucket.probability;
    for (auto& [w, state] : bucket.mixture) {
      next.mixture.emplace_back(w / bucket.probability, std::move(state));
    }
    out.push_back(std::move(next));
  }
  return out;
}

SubsystemSelector build_selector(const std::vector<CircuitDocument::QubitDecl>& qubits,
                                 const CompiledCircuit& circuit) {
  SubsystemSelector selector;
  for (const auto& qubit : qubits) {
    QubitSpec spec;
    spec.name = qubit.name;
    spec.labeling = qubit.labeling;
    for (const auto& name : qubit.modes) {
      spec.modes.push_back(circuit.mode_index.at(name));
    }
    selector.qubits.push_back(std::move(spec));
  }
  return selector;
}

double joint_probability(const std::vector<ResultDocument::JointOutcome>& table,
                         const std::vector<std::pair<std::string, std::string>>& given) {
  double total = 0.0;
  for (const auto& row : table) {
    bool match = true;
    for (const auto& [detector, wanted] : given) {
      bool found = false;
      for (const auto& [name, label] : row.outcomes) {
        if (name == detector) {
          found = label == wanted;
          break;
        }
      }
      if (!found) {
        match = false;
        break;
      }
    }
    if (match) total += row.probability;
  }
  return total;
}

Json document_json(const CircuitDocument& doc) { return Json::parse(serialize_circuit(doc)); }

std::string format_double(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

} // namespace

ResultDocument run_document(const CircuitDocument& doc) {
  const auto start = std::chrono::steady_clock::now();
  CompiledCircuit circuit = compile_document(doc);

  ResultDocument result;
  result.tool_name = kToolName;
  result.tool_version = kToolVersion;
  result.input_echo = doc;
  result.warnings = circuit.warnings;

  PureState state = circuit.initial_state;
  for (const ModeUnitary& u : circuit.unitaries) {
    state = apply_mode_unitary(state, u);
  }

  const std::vector<std::string> names = display_names(circuit);
  ModeNamer namer = [&names](int index) { return names[static_cast<std::size_t>(index)]; };

  if (doc.outputs.state_dump) {
    std::vector<CircuitDocument::StateTerm> dump;
    for (const auto& [occ, amp] : state.terms()) {
      CircuitDocument::StateTerm term;
      term.amplitude = amp;
      for (std::size_t i = 0; i < occ.size(); ++i) {
        if (occ[i] > 0) term.occupation[names[i]] = occ[i];
      }
      dump.push_back(std::move(term));
    }
    result.final_state = std::move(dump);
  }

  // Joint detection tree over every declared detector, in declaration order.
  std::vector<Branch> branches = {{{}, 1.0, {{1.0, state}}}};
  for (std::size_t d = 0; d < circuit.detections.size(); ++d) {
    std::vector<Branch> next;
    for (const Branch& branch : branches) {
      for (Branch& grown :
           split_branch(branch, circuit.detections[d], circuit.detection_modes[d], namer)) {
        next.push_back(std::move(grown));
      }
    }
    branches = std::move(next);
  }

  if (doc.outputs.probabilities && !circuit.detections.empty()) {
    for (std::size_t d = 0; d < circuit.detections.size(); ++d) {
      const std::string& name = circuit.detections[d].name;
      std::map<std::string, double> marginal;
      for (const Branch& branch : branches) {
        marginal[branch.outcomes[d].second] += branch.probability;
      }
      std::vector<ResultDocument::OutcomeProb> rows;
      for (const auto& [label, p] : marginal) rows.push_back({label, p});
      result.detectors.emplace_back(name, std::move(rows));
    }
    for (const Branch& branch : branches) {
      result.joint_outcomes.push_back({branch.outcomes, branch.probability});
    }
  }

  // Conditioning for metrics: apply only the detections named in
  // conditioned_on (document order), then optionally postselect on empty
  // loss environments.
  StateMixture conditioned = {{1.0, state}};
  double conditioned_probability = 1.0;
  bool any_conditioning = false;
  for (const auto& [detector, wanted] : doc.outputs.conditioned_on) {
    any_conditioning = true;
    std::size_t d = 0;
    for (; d < circuit.detections.size(); ++d) {
      if (circuit.detections[d].name == detector) break;
    }
    Branch current{{}, 1.0, conditioned};
    double stage = 0.0;
    for (Branch& grown :
         split_branch(current, circuit.detections[d], circuit.detection_modes[d], namer)) {
      if (grown.outcomes.back().second == wanted) {
        stage = grown.probability;
        conditioned = std::move(grown.mixture);
        break;
      }
    }
    if (stage <= 0.0) {
      throw EvaluationError("conditioning on outcome '" + wanted + "' of detector '" + detector +
                            "' which has zero probability");
    }
    conditioned_probability *= stage;
  }
  if (doc.outputs.postselect_no_loss && !circuit.environment_modes.empty()) {
    any_conditioning = true;
    double stage = 0.0;
    StateMixture kept;
    for (const auto& [weight, component] : conditioned) {
      PureState projected(component.registry(), component.allow_mixed_sectors());
      double p = 0.0;
      for (const auto& [occ, amp] : component.terms()) {
        bool empty_env = true;
        for (int idx : circuit.environment_modes) {
          if (occ[static_cast<std::size_t>(idx)] != 0) {
            empty_env = false;
            break;
          }
        }
        if (empty_env) {
          projected.add_term(occ, amp);
          p += std::norm(amp);
        }
      }
      if (p > 0.0) {
        projected.normalize();
        kept.emplace_back(weight * p, std::move(projected));
      }
      stage += weight * p;
    }
    if (stage <= 0.0) {
      throw EvaluationError("postselect_no_loss removes the entire state");
    }
    for (auto& [w, component] : kept) w /= stage;
    conditioned = std::move(kept);
    conditioned_probability *= stage;
  } else if (doc.outputs.postselect_no_loss) {
    any_conditioning = true; // no loss channels: conditioning is trivial
  }
  if (any_conditioning) result.conditioned_probability = conditioned_probability;

  for (const auto& metric : doc.outputs.metrics) {
    double value = 0.0;
    switch (metric.kind) {
      case CircuitDocument::MetricDecl::Kind::JointProbability: {
        std::vector<ResultDocument::JointOutcome> table;
        for (const Branch& branch : branches) table.push_back({branch.outcomes, branch.probability});
        value = joint_probability(table, metric.given);
        break;
      }
      case CircuitDocument::MetricDecl::Kind::Concurrence: {
        DensityMatrix rho = partial_trace(conditioned, build_selector(metric.qubits, circuit));
        value = concurrence(rho);
        break;
      }
      case CircuitDocument::MetricDecl::Kind::Fidelity: {
        DensityMatrix rho = partial_trace(conditioned, build_selector(metric.qubits, circuit));
        Eigen::VectorXcd target(static_cast<Eigen::Index>(metric.target.size()));
        for (std::size_t i = 0; i < metric.target.size(); ++i) {
          target(static_cast<Eigen::Index>(i)) = metric.target[i];
        }
        value = fidelity(rho, target);
        break;
      }
    }
    result.metrics.emplace_back(metric.name, value);
  }

  const auto end = std::chrono::steady_clock::now();
  result.wall_clock_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return result;
}

namespace {

void set_parameter(CircuitDocument& doc, const std::string& path, double value) {
  static const std::regex pattern(R"(^components\[([0-9]+)\]\.([a-z_]+)$)");
  std::smatch match;
  if (!std::regex_match(path, match, pattern)) {
    throw ValidationError("sweep parameter path '" + path +
                          "' is not of the form components[<index>].<field>");
  }
  const std::size_t index = std::stoul(match[1].str());
  const std::string field = match[2].str();
  if (index >= doc.components.size()) {
    throw ValidationError("sweep parameter path '" + path + "': component index out of range");
  }
  bool ok = std::visit(
      [&](auto& component) {
        using T = std::decay_t<decltype(component)>;
        if constexpr (std::is_same_v<T, CircuitDocument::AomDecl>) {
          if (field == "theta") return component.theta = value, true;
          if (field == "modulation_frequency_hz") {
            return component.modulation_frequency_hz = value, true;
          }
        } else if constexpr (std::is_same_v<T, CircuitDocument::SpatialBsDecl>) {
          if (field == "mixing_angle") return component.mixing_angle = value, true;
        } else if constexpr (std::is_same_v<T, CircuitDocument::LossDecl>) {
          if (field == "transmission") return component.transmission = value, true;
        } else if constexpr (std::is_same_v<T, CircuitDocument::HeraldDecl>) {
          if (field == "efficiency") return component.efficiency = value, true;
          if (field == "dark_count_probability") {
            return component.dark_count_probability = value, true;
          }
        }
        return false;
      },
      doc.components[index]);
  if (!ok) {
    throw ValidationError("sweep parameter path '" + path +
                          "' does not name a sweepable numeric field of that component");
  }
}

} // namespace

SweepResult run_sweep(const CircuitDocument& doc, const SweepSpec& spec) {
  if (spec.steps < 2) {
    throw ValidationError("sweep requires at least 2 steps");
  }
  if (spec.from == spec.to) {
    throw ValidationError("sweep endpoints must differ");
  }
  std::vector<std::string> metric_names = spec.metrics;
  if (metric_names.empty()) {
    for (const auto& metric : doc.outputs.metrics) metric_names.push_back(metric.name);
  }
  if (metric_names.empty()) {
    throw ValidationError("sweep has no metrics: the document declares none and none were requested");
  }
  for (const auto& name : metric_names) {
    bool known = false;
    for (const auto& metric : doc.outputs.metrics) known = known || metric.name == name;
    if (!known) {
      throw ValidationError("sweep metric '" + name + "' is not declared in the document outputs");
    }
  }

  SweepResult result;
  result.parameter_path = spec.parameter_path;
  result.columns.push_back("param");
  for (const auto& name : metric_names) result.columns.push_back(name);

  for (int step = 0; step < spec.steps; ++step) {
    const double value =
        spec.from + (spec.to - spec.from) * static_cast<double>(step) /
                        static_cast<double>(spec.steps - 1);
    CircuitDocument point = doc;
    set_parameter(point, spec.parameter_path, value);
    ResultDocument run = run_document(point);
    std::vector<double> row = {value};
    for (const auto& name : metric_names) {
      for (const auto& [metric_name, metric_value] : run.metrics) {
        if (metric_name == name) {
          row.push_back(metric_value);
          break;
        }
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

namespace {

Json state_terms_json(const std::vector<CircuitDocument::StateTerm>& terms) {
  Json out = Json::array();
  for (const auto& term : terms) {
    Json occupation = Json::object();
    for (const auto& [name, count] : term.occupation) occupation[name] = count;
    out.push_back(Json{{"occupation", occupation},
                       {"amplitude", Json::array({term.amplitude.real(), term.amplitude.imag()})}});
  }
  return out;
}

} // namespace

std::string serialize_result_json(const ResultDocument& result) {
  Json root;
  root["tool"] = Json{{"name", result.tool_name}, {"version", result.tool_version}};
  root["input"] = document_json(result.input_echo);
  root["warnings"] = result.warnings;
  if (result.final_state.has_value()) {
    root["final_state"] = state_terms_json(*result.final_state);
  }
  Json detectors = Json::array();
  for (const auto& [name, rows] : result.detectors) {
    Json outcomes = Json::array();
    for (const auto& row : rows) {
      outcomes.push_back(Json{{"outcome", row.outcome}, {"probability", row.probability}});
    }
    detectors.push_back(Json{{"name", name}, {"outcomes", outcomes}});
  }
  root["detectors"] = std::move(detectors);
  Json joint = Json::array();
  for (const auto& row : result.joint_outcomes) {
    Json outcomes = Json::object();
    for (const auto& [name, label] : row.outcomes) outcomes[name] = label;
    joint.push_back(Json{{"outcomes", outcomes}, {"probability", row.probability}});
  }
  root["joint_outcomes"] = std::move(joint);
  if (result.conditioned_probability.has_value()) {
    root["conditioned_probability"] = *result.conditioned_probability;
  }
  Json metrics = Json::object();
  for (const auto& [name, value] : result.metrics) metrics[name] = value;
  root["metrics"] = std::move(metrics);
  root["wall_clock_ms"] = result.wall_clock_ms;
  return root.dump(2) + "\n";
}

std::string serialize_result_csv(const ResultDocument& result) {
  std::ostringstream out;
  out << "kind,name,outcome,value\n";
  for (const auto& [name, rows] : result.detectors) {
    for (const auto& row : rows) {
      out << "detector," << name << "," << row.outcome << "," << format_double(row.probability)
          << "\n";
    }
  }
  for (const auto& row : result.joint_outcomes) {
    std::string label;
    for (const auto& [name, outcome] : row.outcomes) {
      if (!label.empty()) label += ";";
      label += name + "=" + outcome;
    }
    out << "joint,," << label << "," << format_double(row.probability) << "\n";
  }
  if (result.conditioned_probability.has_value()) {
    out << "conditioned_probability,,," << format_double(*result.conditioned_probability) << "\n";
  }
  for (const auto& [name, value] : result.metrics) {
    out << "metric," << name << ",," << format_double(value) << "\n";
  }
  return out.str();
}

std::string serialize_sweep_json(const SweepResult& sweep) {
  Json root;
  root["parameter_path"] = sweep.parameter_path;
  root["columns"] = sweep.columns;
  Json rows = Json::array();
  for (const auto& row : sweep.rows) rows.push_back(row);
  root["rows"] = std::move(rows);
  return root.dump(2) + "\n";
}

std::string serialize_sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < sweep.columns.size(); ++i) {
    if (i > 0) out << ",";
    out << sweep.columns[i];
  }
  out << "\n";
  for (const auto& row : sweep.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ",";
      out << format_double(row[i]);
    }
    out << "\n";
  }
  return out.str();
}

namespace {

Json density_json(const DensityMatrix& rho) {
  Json matrix = Json::array();
  for (int r = 0; r < rho.dimension(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < rho.dimension(); ++c) {
      row.push_back(Json::array({rho.entry(r, c).real(), rho.entry(r, c).imag()}));
    }
    matrix.push_back(std::move(row));
  }
  return Json{{"basis", rho.basis_labels()}, {"matrix", matrix}};
}

void add_optional(Json& root, const char* key, const std::optional<double>& value) {
  if (value.has_value()) root[key] = *value;
}

} // namespace

std::string serialize_scenario_json(const std::string& scenario_name, const ScenarioResult& result) {
  Json root;
  root["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
  root["scenario"] = scenario_name;
  add_optional(root, "success_probability", result.success_probability);
  add_optional(root, "which_way_distinguishability", result.which_way_distinguishability);
  add_optional(root, "fidelity_to_target", result.fidelity_to_target);
  add_optional(root, "concurrence", result.concurrence);
  Json extra = Json::object();
  for (const auto& [key, value] : result.extra) extra[key] = value;
  root["extra"] = std::move(extra);
  Json outcomes = Json::array();
  for (const auto& row : result.outcomes) {
    Json values = Json::object();
    for (const auto& [key, value] : row.values) values[key] = value;
    Json entry;
    entry["label"] = row.label;
    entry["probability"] = row.probability;
    entry["values"] = std::move(values);
    if (!row.note.empty()) entry["note"] = row.note;
    outcomes.push_back(std::move(entry));
  }
  root["outcomes"] = std::move(outcomes);
  if (result.conditioned_density.has_value()) {
    root["conditioned_state"] = density_json(*result.conditioned_density);
  }
  root["warnings"] = result.warnings;
  return root.dump(2) + "\n";
}

std::string serialize_scenario_csv(const std::string& scenario_name, const ScenarioResult& result) {
  std::ostringstream out;
  out << "kind,label,key,value\n";
  auto scalar = [&](const char* key, const std::optional<double>& value) {
    if (value.has_value()) out << "scalar,," << key << "," << format_double(*value) << "\n";
  };
  out << "scenario,," << scenario_name << ",\n";
  scalar("success_probability", result.success_probability);
  scalar("which_way_distinguishability", result.which_way_distinguishability);
  scalar("fidelity_to_target", result.fidelity_to_target);
  scalar("concurrence", result.concurrence);
  for (const auto& [key, value] : result.extra) {
    out << "extra,," << key << "," << format_double(value) << "\n";
  }
  for (const auto& row : result.outcomes) {
    out << "outcome," << row.label << ",probability," << format_double(row.probability) << "\n";
    for (const auto& [key, value] : row.values) {
      out << "outcome," << row.label << "," << key << "," << format_double(value) << "\n";
    }
  }
  return out.str();
}

} // namespace fbsim
