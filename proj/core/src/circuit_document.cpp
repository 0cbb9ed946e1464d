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

#include "fbsim/circuit_document.hpp"

#include <cmath>
#include <set>

#include "json.hpp"

#include "fbsim/errors.hpp"
#include "fbsim/tolerances.hpp"

namespace fbsim {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError(path + ": " + message);
}

std::string type_name(const Json& value) {
  switch (value.type()) {
    case Json::value_t::null: return "null";
    case Json::value_t::object: return "object";
    case Json::value_t::array: return "array";
    case Json::value_t::string: return "string";
    case Json::value_t::boolean: return "boolean";
    case Json::value_t::binary: return "binary";
    default: return "number";
  }
}

const Json& require_field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object, found " + type_name(obj));
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing required field '" + std::string(key) + "'");
  return *it;
}

void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed,
                         const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object, found " + type_name(obj));
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) fail(path + "." + key, "unknown field");
  }
}

double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number, found " + type_name(value));
  return value.get<double>();
}

int as_int(const Json& value, const std::string& path) {
  if (!value.is_number_integer()) fail(path, "expected an integer, found " + type_name(value));
  return value.get<int>();
}

bool as_bool(const Json& value, const std::string& path) {
  if (!value.is_boolean()) fail(path, "expected a boolean, found " + type_name(value));
  return value.get<bool>();
}

std::string as_string(const Json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string, found " + type_name(value));
  return value.get<std::string>();
}

const Json& as_array(const Json& value, const std::string& path) {
  if (!value.is_array()) fail(path, "expected an array, found " + type_name(value));
  return value;
}

std::complex<double> as_complex(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) {
    fail(path, "expected a complex number as a [re, im] array");
  }
  return {as_number(value[0], path + "[0]"), as_number(value[1], path + "[1]")};
}

bool valid_identifier(const std::string& s) {
  if (s.empty() || s.front() == '@') return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.' || c == '/';
    if (!ok) return false;
  }
  return true;
}

std::string as_identifier(const Json& value, const std::string& path) {
  std::string s = as_string(value, path);
  if (!valid_identifier(s)) {
    fail(path, "'" + s + "' is not a valid identifier (letters, digits, _-./; must not start with @)");
  }
  return s;
}

std::vector<std::string> as_name_list(const Json& value, const std::string& path) {
  std::vector<std::string> out;
  const Json& arr = as_array(value, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(as_identifier(arr[i], path + "[" + std::to_string(i) + "]"));
  }
  if (out.empty()) fail(path, "list must not be empty");
  return out;
}

CircuitDocument::ComponentDecl parse_component(const Json& obj, const std::string& path) {
  const std::string type = as_string(require_field(obj, "type", path), path + ".type");
  if (type == "aom") {
    reject_unknown_keys(obj, {"type", "theta", "modulation_frequency_hz", "pairs"}, path);
    CircuitDocument::AomDecl aom;
    aom.theta = as_number(require_field(obj, "theta", path), path + ".theta");
    aom.modulation_frequency_hz = as_number(require_field(obj, "modulation_frequency_hz", path),
                                            path + ".modulation_frequency_hz");
    const Json& pairs = as_array(require_field(obj, "pairs", path), path + ".pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string pair_path = path + ".pairs[" + std::to_string(i) + "]";
      const Json& pair = as_array(pairs[i], pair_path);
      if (pair.size() != 2) fail(pair_path, "expected a two-element [mode, mode] array");
      aom.pairs.emplace_back(as_identifier(pair[0], pair_path + "[0]"),
                             as_identifier(pair[1], pair_path + "[1]"));
    }
    if (aom.pairs.empty()) fail(path + ".pairs", "list must not be empty");
    return aom;
  }
  if (type == "spatial_beam_splitter") {
    reject_unknown_keys(obj, {"type", "path_a", "path_b", "mixing_angle"}, path);
    CircuitDocument::SpatialBsDecl bs;
    bs.path_a = as_identifier(require_field(obj, "path_a", path), path + ".path_a");
    bs.path_b = as_identifier(require_field(obj, "path_b", path), path + ".path_b");
    bs.mixing_angle = as_number(require_field(obj, "mixing_angle", path), path + ".mixing_angle");
    return bs;
  }
  if (type == "polarizing_beam_splitter") {
    reject_unknown_keys(obj, {"type", "input_path", "transmit_path", "reflect_path"}, path);
    CircuitDocument::PbsDecl pbs;
    pbs.input_path = as_identifier(require_field(obj, "input_path", path), path + ".input_path");
    pbs.transmit_path =
        as_identifier(require_field(obj, "transmit_path", path), path + ".transmit_path");
    pbs.reflect_path =
        as_identifier(require_field(obj, "reflect_path", path), path + ".reflect_path");
    return pbs;
  }
  if (type == "frequency_demux") {
    reject_unknown_keys(obj, {"type", "routes"}, path);
    CircuitDocument::DemuxDecl demux;
    const Json& routes = as_array(require_field(obj, "routes", path), path + ".routes");
    for (std::size_t i = 0; i < routes.size(); ++i) {
      const std::string route_path = path + ".routes[" + std::to_string(i) + "]";
      reject_unknown_keys(routes[i], {"input_path", "bin", "output_path"}, route_path);
      CircuitDocument::DemuxDecl::Route route;
      route.input_path =
          as_identifier(require_field(routes[i], "input_path", route_path), route_path + ".input_path");
      route.bin_id = as_int(require_field(routes[i], "bin", route_path), route_path + ".bin");
      route.output_path = as_identifier(require_field(routes[i], "output_path", route_path),
                                        route_path + ".output_path");
      demux.routes.push_back(std::move(route));
    }
    if (demux.routes.empty()) fail(path + ".routes", "list must not be empty");
    return demux;
  }
  if (type == "loss") {
    reject_unknown_keys(obj, {"type", "targets", "transmission"}, path);
    CircuitDocument::LossDecl loss;
    loss.targets = as_name_list(require_field(obj, "targets", path), path + ".targets");
    loss.transmission = as_number(require_field(obj, "transmission", path), path + ".transmission");
    return loss;
  }
  if (type == "herald") {
    reject_unknown_keys(obj, {"type", "name", "watched", "efficiency", "dark_count_probability"},
                        path);
    CircuitDocument::HeraldDecl herald;
    herald.name = as_identifier(require_field(obj, "name", path), path + ".name");
    herald.watched = as_name_list(require_field(obj, "watched", path), path + ".watched");
    if (obj.contains("efficiency")) {
      herald.efficiency = as_number(obj["efficiency"], path + ".efficiency");
    }
    if (obj.contains("dark_count_probability")) {
      herald.dark_count_probability =
          as_number(obj["dark_count_probability"], path + ".dark_count_probability");
    }
    return herald;
  }
  fail(path + ".type", "unknown component type '" + type +
                           "' (expected aom, spatial_beam_splitter, polarizing_beam_splitter, "
                           "frequency_demux, loss, or herald)");
}

CircuitDocument::DetectionDecl parse_detection(const Json& obj, const std::string& path) {
  reject_unknown_keys(
      obj, {"name", "modes", "kind", "frequency_blind", "efficiency", "dark_count_probability"},
      path);
  CircuitDocument::DetectionDecl detection;
  detection.name = as_identifier(require_field(obj, "name", path), path + ".name");
  detection.modes = as_name_list(require_field(obj, "modes", path), path + ".modes");
  if (obj.contains("kind")) {
    const std::string kind = as_string(obj["kind"], path + ".kind");
    if (kind == "pattern") {
      detection.kind = CircuitDocument::DetectionDecl::Kind::Pattern;
    } else if (kind == "herald") {
      detection.kind = CircuitDocument::DetectionDecl::Kind::Herald;
    } else {
      fail(path + ".kind", "unknown detection kind '" + kind + "' (expected pattern or herald)");
    }
  }
  if (obj.contains("frequency_blind")) {
    detection.frequency_blind = as_bool(obj["frequency_blind"], path + ".frequency_blind");
  }
  if (obj.contains("efficiency")) {
    detection.efficiency = as_number(obj["efficiency"], path + ".efficiency");
  }
  if (obj.contains("dark_count_probability")) {
    detection.dark_count_probability =
        as_number(obj["dark_count_probability"], path + ".dark_count_probability");
  }
  return detection;
}

CircuitDocument::QubitDecl parse_qubit(const Json& obj, const std::string& path) {
  reject_unknown_keys(obj, {"name", "modes", "labeling"}, path);
  CircuitDocument::QubitDecl qubit;
  qubit.name = as_identifier(require_field(obj, "name", path), path + ".name");
  qubit.modes = as_name_list(require_field(obj, "modes", path), path + ".modes");
  const std::string labeling = as_string(require_field(obj, "labeling", path), path + ".labeling");
  if (labeling == "polarization") {
    qubit.labeling = QubitLabeling::Polarization;
  } else if (labeling == "occupation") {
    qubit.labeling = QubitLabeling::Occupation;
  } else {
    fail(path + ".labeling", "unknown labeling '" + labeling +
                                 "' (expected polarization or occupation)");
  }
  return qubit;
}

CircuitDocument::MetricDecl parse_metric(const Json& obj, const std::string& path) {
  CircuitDocument::MetricDecl metric;
  metric.name = as_identifier(require_field(obj, "name", path), path + ".name");
  const std::string kind = as_string(require_field(obj, "kind", path), path + ".kind");
  if (kind == "concurrence") {
    reject_unknown_keys(obj, {"name", "kind", "qubits"}, path);
    metric.kind = CircuitDocument::MetricDecl::Kind::Concurrence;
  } else if (kind == "fidelity") {
    reject_unknown_keys(obj, {"name", "kind", "qubits", "target"}, path);
    metric.kind = CircuitDocument::MetricDecl::Kind::Fidelity;
  } else if (kind == "joint_probability") {
    reject_unknown_keys(obj, {"name", "kind", "given"}, path);
    metric.kind = CircuitDocument::MetricDecl::Kind::JointProbability;
  } else {
    fail(path + ".kind", "unknown metric kind '" + kind +
                             "' (expected concurrence, fidelity, or joint_probability)");
  }
  if (metric.kind != CircuitDocument::MetricDecl::Kind::JointProbability) {
    const Json& qubits = as_array(require_field(obj, "qubits", path), path + ".qubits");
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      metric.qubits.push_back(parse_qubit(qubits[i], path + ".qubits[" + std::to_string(i) + "]"));
    }
    if (metric.qubits.empty()) fail(path + ".qubits", "list must not be empty");
  }
  if (metric.kind == CircuitDocument::MetricDecl::Kind::Fidelity) {
    const Json& target = as_array(require_field(obj, "target", path), path + ".target");
    for (std::size_t i = 0; i < target.size(); ++i) {
      metric.target.push_back(as_complex(target[i], path + ".target[" + std::to_string(i) + "]"));
    }
  }
  if (metric.kind == CircuitDocument::MetricDecl::Kind::JointProbability) {
    const Json& given = require_field(obj, "given", path);
    if (!given.is_object()) fail(path + ".given", "expected an object of detector -> outcome");
    for (const auto& [key, value] : given.items()) {
      metric.given.emplace_back(key, as_string(value, path + ".given." + key));
    }
    if (metric.given.empty()) fail(path + ".given", "must name at least one detector outcome");
  }
  return metric;
}

CircuitDocument parse_document_tree(const Json& root) {
  if (!root.is_object()) fail("$", "expected a JSON object at the document root");
  reject_unknown_keys(root,
                      {"format_version", "title", "max_photons", "bins", "modes", "initial_state",
                       "components", "detections", "outputs"},
                      "$");
  CircuitDocument doc;
  doc.format_version = as_int(require_field(root, "format_version", "$"), "$.format_version");
  if (doc.format_version != 1) {
    fail("$.format_version", "unsupported format version " + std::to_string(doc.format_version));
  }
  if (root.contains("title")) doc.title = as_string(root["title"], "$.title");
  if (root.contains("max_photons")) {
    doc.max_photons = as_int(root["max_photons"], "$.max_photons");
    if (doc.max_photons < 1) fail("$.max_photons", "must be at least 1");
  }

  const Json& bins = as_array(require_field(root, "bins", "$"), "$.bins");
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const std::string path = "$.bins[" + std::to_string(i) + "]";
    reject_unknown_keys(bins[i], {"id", "frequency_hz"}, path);
    CircuitDocument::BinDecl bin;
    bin.id = as_int(require_field(bins[i], "id", path), path + ".id");
    bin.frequency_hz = as_number(require_field(bins[i], "frequency_hz", path), path + ".frequency_hz");
    doc.bins.push_back(bin);
  }

  const Json& modes = as_array(require_field(root, "modes", "$"), "$.modes");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string path = "$.modes[" + std::to_string(i) + "]";
    reject_unknown_keys(modes[i], {"name", "path", "bin", "polarization"}, path);
    CircuitDocument::ModeDecl mode;
    mode.name = as_identifier(require_field(modes[i], "name", path), path + ".name");
    mode.path = as_identifier(require_field(modes[i], "path", path), path + ".path");
    mode.bin_id = as_int(require_field(modes[i], "bin", path), path + ".bin");
    if (modes[i].contains("polarization")) {
      const std::string pol = as_string(modes[i]["polarization"], path + ".polarization");
      try {
        mode.polarization = polarization_from_string(pol);
      } catch (const ValidationError& e) {
        fail(path + ".polarization", e.what());
      }
    }
    doc.modes.push_back(std::move(mode));
  }

  const Json& initial = require_field(root, "initial_state", "$");
  reject_unknown_keys(initial, {"allow_mixed_photon_number", "terms"}, "$.initial_state");
  if (initial.contains("allow_mixed_photon_number")) {
    doc.allow_mixed_photon_number =
        as_bool(initial["allow_mixed_photon_number"], "$.initial_state.allow_mixed_photon_number");
  }
  const Json& terms = as_array(require_field(initial, "terms", "$.initial_state"),
                               "$.initial_state.terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string path = "$.initial_state.terms[" + std::to_string(i) + "]";
    reject_unknown_keys(terms[i], {"amplitude", "occupation"}, path);
    CircuitDocument::StateTerm term;
    term.amplitude = as_complex(require_field(terms[i], "amplitude", path), path + ".amplitude");
    const Json& occupation = require_field(terms[i], "occupation", path);
    if (!occupation.is_object()) fail(path + ".occupation", "expected an object of mode -> count");
    for (const auto& [name, count] : occupation.items()) {
      const int c = as_int(count, path + ".occupation." + name);
      if (c < 0) fail(path + ".occupation." + name, "photon count must be non-negative");
      if (c > 0) term.occupation[name] = c;
    }
    doc.initial_state.push_back(std::move(term));
  }
  if (doc.initial_state.empty()) fail("$.initial_state.terms", "list must not be empty");

  if (root.contains("components")) {
    const Json& components = as_array(root["components"], "$.components");
    for (std::size_t i = 0; i < components.size(); ++i) {
      doc.components.push_back(
          parse_component(components[i], "$.components[" + std::to_string(i) + "]"));
    }
  }

  if (root.contains("detections")) {
    const Json& detections = as_array(root["detections"], "$.detections");
    for (std::size_t i = 0; i < detections.size(); ++i) {
      doc.detections.push_back(
          parse_detection(detections[i], "$.detections[" + std::to_string(i) + "]"));
    }
  }

  if (root.contains("outputs")) {
    const Json& outputs = root["outputs"];
    reject_unknown_keys(
        outputs, {"state", "probabilities", "conditioned_on", "postselect_no_loss", "metrics"},
        "$.outputs");
    if (outputs.contains("state")) {
      doc.outputs.state_dump = as_bool(outputs["state"], "$.outputs.state");
    }
    if (outputs.contains("probabilities")) {
      doc.outputs.probabilities = as_bool(outputs["probabilities"], "$.outputs.probabilities");
    }
    if (outputs.contains("conditioned_on")) {
      const Json& given = outputs["conditioned_on"];
      if (!given.is_object()) fail("$.outputs.conditioned_on", "expected an object");
      for (const auto& [key, value] : given.items()) {
        doc.outputs.conditioned_on.emplace_back(
            key, as_string(value, "$.outputs.conditioned_on." + key));
      }
    }
    if (outputs.contains("postselect_no_loss")) {
      doc.outputs.postselect_no_loss =
          as_bool(outputs["postselect_no_loss"], "$.outputs.postselect_no_loss");
    }
    if (outputs.contains("metrics")) {
      const Json& metrics = as_array(outputs["metrics"], "$.outputs.metrics");
      for (std::size_t i = 0; i < metrics.size(); ++i) {
        doc.outputs.metrics.push_back(
            parse_metric(metrics[i], "$.outputs.metrics[" + std::to_string(i) + "]"));
      }
    }
  }
  return doc;
}

Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json document_to_json(const CircuitDocument& doc) {
  Json root;
  root["format_version"] = doc.format_version;
  if (!doc.title.empty()) root["title"] = doc.title;
  root["max_photons"] = doc.max_photons;
  root["bins"] = Json::array();
  for (const auto& bin : doc.bins) {
    root["bins"].push_back(Json{{"id", bin.id}, {"frequency_hz", bin.frequency_hz}});
  }
  root["modes"] = Json::array();
  for (const auto& mode : doc.modes) {
    root["modes"].push_back(Json{{"name", mode.name},
                                 {"path", mode.path},
                                 {"bin", mode.bin_id},
                                 {"polarization", to_string(mode.polarization)}});
  }
  Json initial;
  initial["allow_mixed_photon_number"] = doc.allow_mixed_photon_number;
  initial["terms"] = Json::array();
  for (const auto& term : doc.initial_state) {
    Json occupation = Json::object();
    for (const auto& [name, count] : term.occupation) occupation[name] = count;
    initial["terms"].push_back(
        Json{{"amplitude", complex_to_json(term.amplitude)}, {"occupation", occupation}});
  }
  root["initial_state"] = std::move(initial);

  root["components"] = Json::array();
  for (const auto& component : doc.components) {
    root["components"].push_back(std::visit(
        [](const auto& c) -> Json {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CircuitDocument::AomDecl>) {
            Json pairs = Json::array();
            for (const auto& [a, b] : c.pairs) pairs.push_back(Json::array({a, b}));
            return Json{{"type", "aom"},
                        {"theta", c.theta},
                        {"modulation_frequency_hz", c.modulation_frequency_hz},
                        {"pairs", pairs}};
          } else if constexpr (std::is_same_v<T, CircuitDocument::SpatialBsDecl>) {
            return Json{{"type", "spatial_beam_splitter"},
                        {"path_a", c.path_a},
                        {"path_b", c.path_b},
                        {"mixing_angle", c.mixing_angle}};
          } else if constexpr (std::is_same_v<T, CircuitDocument::PbsDecl>) {
            return Json{{"type", "polarizing_beam_splitter"},
                        {"input_path", c.input_path},
                        {"transmit_path", c.transmit_path},
                        {"reflect_path", c.reflect_path}};
          } else if constexpr (std::is_same_v<T, CircuitDocument::DemuxDecl>) {
            Json routes = Json::array();
            for (const auto& route : c.routes) {
              routes.push_back(Json{{"input_path", route.input_path},
                                    {"bin", route.bin_id},
                                    {"output_path", route.output_path}});
            }
            return Json{{"type", "frequency_demux"}, {"routes", routes}};
          } else if constexpr (std::is_same_v<T, CircuitDocument::LossDecl>) {
            return Json{{"type", "loss"}, {"targets", c.targets}, {"transmission", c.transmission}};
          } else {
            return Json{{"type", "herald"},
                        {"name", c.name},
                        {"watched", c.watched},
                        {"efficiency", c.efficiency},
                        {"dark_count_probability", c.dark_count_probability}};
          }
        },
        component));
  }

  root["detections"] = Json::array();
  for (const auto& detection : doc.detections) {
    root["detections"].push_back(Json{
        {"name", detection.name},
        {"modes", detection.modes},
        {"kind", detection.kind == CircuitDocument::DetectionDecl::Kind::Pattern ? "pattern" : "herald"},
        {"frequency_blind", detection.frequency_blind},
        {"efficiency", detection.efficiency},
        {"dark_count_probability", detection.dark_count_probability}});
  }

  Json outputs;
  outputs["state"] = doc.outputs.state_dump;
  outputs["probabilities"] = doc.outputs.probabilities;
  Json conditioned = Json::object();
  for (const auto& [name, outcome] : doc.outputs.conditioned_on) conditioned[name] = outcome;
  outputs["conditioned_on"] = std::move(conditioned);
  outputs["postselect_no_loss"] = doc.outputs.postselect_no_loss;
  outputs["metrics"] = Json::array();
  for (const auto& metric : doc.outputs.metrics) {
    Json m;
    m["name"] = metric.name;
    switch (metric.kind) {
      case CircuitDocument::MetricDecl::Kind::Concurrence: m["kind"] = "concurrence"; break;
      case CircuitDocument::MetricDecl::Kind::Fidelity: m["kind"] = "fidelity"; break;
      case CircuitDocument::MetricDecl::Kind::JointProbability: m["kind"] = "joint_probability"; break;
    }
    if (metric.kind != CircuitDocument::MetricDecl::Kind::JointProbability) {
      Json qubits = Json::array();
      for (const auto& qubit : metric.qubits) {
        qubits.push_back(Json{
            {"name", qubit.name},
            {"modes", qubit.modes},
            {"labeling",
             qubit.labeling == QubitLabeling::Polarization ? "polarization" : "occupation"}});
      }
      m["qubits"] = std::move(qubits);
    }
    if (metric.kind == CircuitDocument::MetricDecl::Kind::Fidelity) {
      Json target = Json::array();
      for (const auto& amp : metric.target) target.push_back(complex_to_json(amp));
      m["target"] = std::move(target);
    }
    if (metric.kind == CircuitDocument::MetricDecl::Kind::JointProbability) {
      Json given = Json::object();
      for (const auto& [name, outcome] : metric.given) given[name] = outcome;
      m["given"] = std::move(given);
    }
    outputs["metrics"].push_back(std::move(m));
  }
  root["outputs"] = std::move(outputs);
  return root;
}

} // namespace

CircuitDocument parse_circuit(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("document is not valid JSON: ") + e.what());
  }
  CircuitDocument doc = parse_document_tree(root);
  compile_document(doc); // full semantic validation; result discarded
  return doc;
}

std::string serialize_circuit(const CircuitDocument& doc) {
  return document_to_json(doc).dump(2) + "\n";
}

CompiledCircuit compile_document(const CircuitDocument& doc) {
  auto registry = std::make_shared<ModeRegistry>(doc.max_photons);
  for (std::size_t i = 0; i < doc.bins.size(); ++i) {
    try {
      registry->add_bin({doc.bins[i].id, doc.bins[i].frequency_hz});
    } catch (const ValidationError& e) {
      throw ValidationError("$.bins[" + std::to_string(i) + "]: " + e.what());
    }
  }

  std::map<std::string, int> mode_index;
  for (std::size_t i = 0; i < doc.modes.size(); ++i) {
    const auto& decl = doc.modes[i];
    const std::string path = "$.modes[" + std::to_string(i) + "]";
    if (mode_index.count(decl.name) != 0) {
      throw ValidationError(path + ".name: duplicate mode name '" + decl.name + "'");
    }
    try {
      mode_index[decl.name] = registry->add_mode({decl.path, decl.bin_id, decl.polarization});
    } catch (const ValidationError& e) {
      throw ValidationError(path + ": " + e.what());
    }
  }

  auto resolve_mode = [&](const std::string& name, const std::string& path) -> const Mode& {
    auto it = mode_index.find(name);
    if (it == mode_index.end()) {
      throw ValidationError(path + ": unknown mode '" + name + "'");
    }
    return registry->mode(it->second);
  };
  auto resolve_index = [&](const std::string& name, const std::string& path) {
    auto it = mode_index.find(name);
    if (it == mode_index.end()) {
      throw ValidationError(path + ": unknown mode '" + name + "'");
    }
    return it->second;
  };

  // First pass over components: loss channels enlarge the registry with
  // their environment ancillas before anything compiles.
  std::vector<std::optional<LossChannel>> loss_specs(doc.components.size());
  std::vector<int> environment_modes;
  for (std::size_t i = 0; i < doc.components.size(); ++i) {
    if (const auto* loss = std::get_if<CircuitDocument::LossDecl>(&doc.components[i])) {
      const std::string path = "$.components[" + std::to_string(i) + "]";
      LossChannel channel;
      channel.transmission = loss->transmission;
      for (std::size_t t = 0; t < loss->targets.size(); ++t) {
        channel.targets.push_back(
            resolve_mode(loss->targets[t], path + ".targets[" + std::to_string(t) + "]"));
      }
      const int before = registry->size();
      try {
        register_loss_environment(channel, static_cast<int>(i), *registry);
      } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
      }
      for (int idx = before; idx < registry->size(); ++idx) environment_modes.push_back(idx);
      loss_specs[i] = std::move(channel);
    }
  }

  std::shared_ptr<const ModeRegistry> frozen = registry;
  CompiledCircuit circuit{frozen,
                          mode_index,
                          std::move(environment_modes),
                          PureState(frozen, doc.allow_mixed_photon_number),
                          {},
                          {},
                          {},
                          {},
                          {}};

  for (std::size_t i = 0; i < doc.initial_state.size(); ++i) {
    const auto& term = doc.initial_state[i];
    const std::string path = "$.initial_state.terms[" + std::to_string(i) + "]";
    OccupationVector occ(static_cast<std::size_t>(frozen->size()), 0);
    for (const auto& [name, count] : term.occupation) {
      occ[static_cast<std::size_t>(resolve_index(name, path + ".occupation." + name))] += count;
    }
    try {
      circuit.initial_state.add_term(occ, term.amplitude);
    } catch (const ValidationError& e) {
      throw ValidationError(path + ": " + e.what());
    }
  }
  {
    const double norm = circuit.initial_state.norm();
    if (norm <= 0.0) {
      throw ValidationError("$.initial_state: state is not normalizable (zero norm)");
    }
    if (std::abs(norm - 1.0) > kNormTol) {
      circuit.warnings.push_back("initial state normalized (input norm was " +
                                 std::to_string(norm) + ")");
      circuit.initial_state.normalize();
    }
    try {
      circuit.initial_state.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("$.initial_state: ") + e.what());
    }
  }

  // Second pass: compile in order. Heralds are evaluated at the detection
  // stage, so no later component may act on their watched modes.
  std::vector<std::pair<std::size_t, std::set<int>>> herald_watch_sets;
  auto check_not_after_herald = [&](const std::vector<int>& touched, const std::string& path) {
    for (const auto& [herald_index, watched] : herald_watch_sets) {
      for (int idx : touched) {
        if (watched.count(idx) != 0) {
          throw ValidationError(path + ": acts on mode '" + frozen->mode(idx).label() +
                                "' watched by the herald in components[" +
                                std::to_string(herald_index) + "]");
        }
      }
    }
  };

  std::set<std::string> detector_names;
  std::set<int> detector_modes_seen;
  auto claim_detector_modes = [&](const std::vector<int>& modes, const std::string& name,
                                  const std::string& path) {
    for (int idx : modes) {
      if (!detector_modes_seen.insert(idx).second) {
        throw ValidationError(path + ": detector '" + name + "' watches mode '" +
                              frozen->mode(idx).label() + "' already watched by another detector");
      }
    }
  };

  for (std::size_t i = 0; i < doc.components.size(); ++i) {
    const std::string path = "$.components[" + std::to_string(i) + "]";
    ComponentSpec spec = std::visit(
        [&](const auto& decl) -> ComponentSpec {
          using T = std::decay_t<decltype(decl)>;
          if constexpr (std::is_same_v<T, CircuitDocument::AomDecl>) {
            AOMCoupler coupler;
            coupler.theta = decl.theta;
            coupler.modulation_frequency_hz = decl.modulation_frequency_hz;
            for (std::size_t p = 0; p < decl.pairs.size(); ++p) {
              const std::string pair_path = path + ".pairs[" + std::to_string(p) + "]";
              coupler.pairs.emplace_back(resolve_mode(decl.pairs[p].first, pair_path + "[0]"),
                                         resolve_mode(decl.pairs[p].second, pair_path + "[1]"));
            }
            return coupler;
          } else if constexpr (std::is_same_v<T, CircuitDocument::SpatialBsDecl>) {
            return SpatialBeamSplitter{decl.path_a, decl.path_b, decl.mixing_angle};
          } else if constexpr (std::is_same_v<T, CircuitDocument::PbsDecl>) {
            return PolarizingBeamSplitter{decl.input_path, decl.transmit_path, decl.reflect_path};
          } else if constexpr (std::is_same_v<T, CircuitDocument::DemuxDecl>) {
            FrequencyDemux demux;
            for (const auto& route : decl.routes) {
              demux.routes.push_back({route.input_path, route.bin_id, route.output_path});
            }
            return demux;
          } else if constexpr (std::is_same_v<T, CircuitDocument::LossDecl>) {
            return *loss_specs[i];
          } else {
            HeraldDetector herald;
            herald.name = decl.name;
            for (std::size_t w = 0; w < decl.watched.size(); ++w) {
              herald.watched.push_back(
                  resolve_mode(decl.watched[w], path + ".watched[" + std::to_string(w) + "]"));
            }
            herald.efficiency = decl.efficiency;
            herald.dark_count_probability = decl.dark_count_probability;
            return herald;
          }
        },
        doc.components[i]);

    CompiledComponent compiled;
    try {
      compiled = compile_component(spec, *frozen, static_cast<int>(i));
    } catch (const ValidationError& e) {
      throw ValidationError(path + ": " + e.what());
    }
    for (auto& warning : compiled.warnings) {
      circuit.warnings.push_back(path + ": " + warning);
    }
    check_not_after_herald(compiled.touched_modes, path);
    if (compiled.unitary.has_value()) {
      circuit.unitaries.push_back(std::move(*compiled.unitary));
    }
    if (compiled.plan.has_value()) {
      if (!detector_names.insert(compiled.plan->name).second) {
        throw ValidationError(path + ": duplicate detector name '" + compiled.plan->name + "'");
      }
      claim_detector_modes(compiled.plan->watched, compiled.plan->name, path);
      herald_watch_sets.emplace_back(
          i, std::set<int>(compiled.plan->watched.begin(), compiled.plan->watched.end()));
      CircuitDocument::DetectionDecl as_detection;
      as_detection.name = compiled.plan->name;
      as_detection.kind = CircuitDocument::DetectionDecl::Kind::Herald;
      as_detection.efficiency = compiled.plan->efficiency;
      as_detection.dark_count_probability = compiled.plan->dark_count_probability;
      circuit.detections.push_back(std::move(as_detection));
      circuit.detection_modes.push_back(compiled.plan->watched);
      circuit.herald_plans.push_back(std::move(*compiled.plan));
    }
  }

  for (std::size_t i = 0; i < doc.detections.size(); ++i) {
    const auto& decl = doc.detections[i];
    const std::string path = "$.detections[" + std::to_string(i) + "]";
    if (!detector_names.insert(decl.name).second) {
      throw ValidationError(path + ".name: duplicate detector name '" + decl.name + "'");
    }
    std::vector<int> indices;
    for (std::size_t m = 0; m < decl.modes.size(); ++m) {
      indices.push_back(resolve_index(decl.modes[m], path + ".modes[" + std::to_string(m) + "]"));
    }
    claim_detector_modes(indices, decl.name, path);
    if (decl.kind == CircuitDocument::DetectionDecl::Kind::Herald) {
      if (decl.efficiency < 0.0 || decl.efficiency > 1.0) {
        throw ValidationError(path + ".efficiency: must lie in [0, 1]");
      }
      if (decl.dark_count_probability < 0.0 || decl.dark_count_probability >= 1.0) {
        throw ValidationError(path + ".dark_count_probability: must lie in [0, 1)");
      }
      circuit.herald_plans.push_back(
          {decl.name, indices, decl.efficiency, decl.dark_count_probability});
    } else if (decl.efficiency != 1.0 || decl.dark_count_probability != 0.0) {
      throw ValidationError(path + ": pattern detections are projective; efficiency and "
                            "dark_count_probability only apply to kind 'herald'");
    }
    circuit.detections.push_back(decl);
    circuit.detection_modes.push_back(std::move(indices));
  }

  // Outputs validation.
  for (const auto& [detector, outcome] : doc.outputs.conditioned_on) {
    if (detector_names.count(detector) == 0) {
      throw ValidationError("$.outputs.conditioned_on." + detector +
                            ": unknown detector '" + detector + "'");
    }
  }
  std::set<std::string> metric_names;
  for (std::size_t i = 0; i < doc.outputs.metrics.size(); ++i) {
    const auto& metric = doc.outputs.metrics[i];
    const std::string path = "$.outputs.metrics[" + std::to_string(i) + "]";
    if (!metric_names.insert(metric.name).second) {
      throw ValidationError(path + ".name: duplicate metric name '" + metric.name + "'");
    }
    if (metric.kind == CircuitDocument::MetricDecl::Kind::JointProbability) {
      for (const auto& [detector, outcome] : metric.given) {
        if (detector_names.count(detector) == 0) {
          throw ValidationError(path + ".given." + detector + ": unknown detector '" + detector +
                                "'");
        }
      }
      continue;
    }
    std::size_t label_count = 1;
    for (std::size_t q = 0; q < metric.qubits.size(); ++q) {
      const auto& qubit = metric.qubits[q];
      const std::string qubit_path = path + ".qubits[" + std::to_string(q) + "]";
      for (std::size_t m = 0; m < qubit.modes.size(); ++m) {
        resolve_index(qubit.modes[m], qubit_path + ".modes[" + std::to_string(m) + "]");
      }
      if (qubit.labeling == QubitLabeling::Occupation && qubit.modes.size() != 1) {
        throw ValidationError(qubit_path + ": occupation labeling requires exactly one mode");
      }
      label_count *= 2;
    }
    if (metric.kind == CircuitDocument::MetricDecl::Kind::Fidelity) {
      if (metric.target.size() != label_count) {
        throw ValidationError(path + ".target: expected " + std::to_string(label_count) +
                              " amplitudes for " + std::to_string(metric.qubits.size()) +
                              " qubits, got " + std::to_string(metric.target.size()));
      }
      double norm = 0.0;
      for (const auto& amp : metric.target) norm += std::norm(amp);
      if (std::abs(norm - 1.0) > kNormTol) {
        throw ValidationError(path + ".target: amplitudes are not normalized (|t|^2 = " +
                              std::to_string(norm) + ")");
      }
    }
    if (metric.kind == CircuitDocument::MetricDecl::Kind::Concurrence && metric.qubits.size() != 2) {
      throw ValidationError(path + ".qubits: concurrence requires exactly two qubits");
    }
  }
  return circuit;
}

} // namespace fbsim
