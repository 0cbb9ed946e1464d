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

#ifndef FBSIM_CIRCUIT_DOCUMENT_HPP
#define FBSIM_CIRCUIT_DOCUMENT_HPP

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fbsim/components.hpp"
#include "fbsim/fock.hpp"
#include "fbsim/modes.hpp"

namespace fbsim {

/// Declarative circuit description mirroring the JSON document format.
/// Modes are referenced by name throughout; complex numbers serialize as
/// [re, im]; frequencies are plain Hz numbers.
struct CircuitDocument {
  struct BinDecl {
    int id = 0;
    double frequency_hz = 0.0;
  };

  struct ModeDecl {
    std::string name;
    std::string path;
    int bin_id = 0;
    Polarization polarization = Polarization::None;
  };

  struct StateTerm {
    std::complex<double> amplitude;
    std::map<std::string, int> occupation; // mode name -> photon count
  };

  struct AomDecl {
    double theta = 0.0;
    double modulation_frequency_hz = 0.0;
    std::vector<std::pair<std::string, std::string>> pairs;
  };

  struct SpatialBsDecl {
    std::string path_a;
    std::string path_b;
    double mixing_angle = 0.0;
  };

  struct PbsDecl {
    std::string input_path;
    std::string transmit_path;
    std::string reflect_path;
  };

  struct DemuxDecl {
    struct Route {
      std::string input_path;
      int bin_id = 0;
      std::string output_path;
    };
    std::vector<Route> routes;
  };

  struct LossDecl {
    std::vector<std::string> targets;
    double transmission = 1.0;
  };

  struct HeraldDecl {
    std::string name;
    std::vector<std::string> watched;
    double efficiency = 1.0;
    double dark_count_probability = 0.0;
  };

  using ComponentDecl =
      std::variant<AomDecl, SpatialBsDecl, PbsDecl, DemuxDecl, LossDecl, HeraldDecl>;

  struct DetectionDecl {
    enum class Kind { Pattern, Herald };
    std::string name;
    std::vector<std::string> modes;
    Kind kind = Kind::Pattern;
    bool frequency_blind = false;
    double efficiency = 1.0;
    double dark_count_probability = 0.0;
  };

  struct QubitDecl {
    std::string name;
    std::vector<std::string> modes;
    QubitLabeling labeling = QubitLabeling::Polarization;
  };

  struct MetricDecl {
    enum class Kind { Concurrence, Fidelity, JointProbability };
    std::string name;
    Kind kind = Kind::Concurrence;
    std::vector<QubitDecl> qubits;                  // concurrence / fidelity
    std::vector<std::complex<double>> target;       // fidelity, over the qubit basis
    std::vector<std::pair<std::string, std::string>> given; // joint_probability: detector -> outcome
  };

  struct Outputs {
    bool state_dump = false;
    bool probabilities = true;
    std::vector<std::pair<std::string, std::string>> conditioned_on; // detector -> outcome
    bool postselect_no_loss = false;
    std::vector<MetricDecl> metrics;
  };

  int format_version = 1;
  std::string title;
  int max_photons = 4;
  std::vector<BinDecl> bins;
  std::vector<ModeDecl> modes;
  bool allow_mixed_photon_number = false;
  std::vector<StateTerm> initial_state;
  std::vector<ComponentDecl> components;
  std::vector<DetectionDecl> detections;
  Outputs outputs;
};

/// Parses and fully validates a JSON circuit document (structure, mode
/// references, component invariants, state normalizability). Failures throw
/// ValidationError with the offending field path in the message.
CircuitDocument parse_circuit(const std::string& text);

/// Canonical JSON serialization; parse(serialize(doc)) is equivalent to doc.
std::string serialize_circuit(const CircuitDocument& doc);

/// Document compiled against a concrete registry (environment modes for loss
/// channels included), ready to run.
struct CompiledCircuit {
  std::shared_ptr<const ModeRegistry> registry;
  std::map<std::string, int> mode_index;   // declared name -> registry index
  std::vector<int> environment_modes;      // loss dilation ancillas
  PureState initial_state;
  std::vector<ModeUnitary> unitaries;      // in application order
  std::vector<DetectionPlan> herald_plans; // from components + detections
  std::vector<CircuitDocument::DetectionDecl> detections; // resolved copies (pattern + herald)
  std::vector<std::vector<int>> detection_modes;          // per detection, registry indices
  std::vector<std::string> warnings;
};

CompiledCircuit compile_document(const CircuitDocument& doc);

} // namespace fbsim

#endif
