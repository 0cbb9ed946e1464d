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

#ifndef FBSIM_COMPONENTS_HPP
#define FBSIM_COMPONENTS_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fbsim/fock.hpp"
#include "fbsim/mode_unitary.hpp"
#include "fbsim/modes.hpp"
#include "fbsim/pure_state.hpp"

namespace fbsim {

enum class CouplingConvention {
  ImaginaryCross, ///< pair block [[cosθ, i·sinθ], [i·sinθ, cosθ]]
  RealCross,      ///< pair block [[cosθ, sinθ], [−sinθ, cosθ]]
};

/// Acousto-optic coupler: rotates between registered mode pairs whose
/// frequency gap equals the drive. One device covers the prism-enclosed
/// frequency beam splitter, direction-correlated geometries, and
/// simultaneous two-pair drives.
struct AOMCoupler {
  std::vector<std::pair<Mode, Mode>> pairs;
  double theta = 0.0; ///< interaction angle θ = ηl, radians
  double modulation_frequency_hz = 0.0;
  CouplingConvention convention = CouplingConvention::ImaginaryCross;
};

/// Non-polarizing beam splitter between two paths; couples modes identical
/// in frequency bin and polarization across the paths.
struct SpatialBeamSplitter {
  std::string path_a;
  std::string path_b;
  double mixing_angle = 0.0; ///< π/4 for 50:50
};

/// Ideal polarizing beam splitter: x-polarized modes on the input path swap
/// with the transmit path, y-polarized with the reflect path.
struct PolarizingBeamSplitter {
  std::string input_path;
  std::string transmit_path;
  std::string reflect_path;
};

/// Lossless routing by (input path, frequency bin); models prisms both as
/// splitters and as recombiners. Polarization is preserved.
struct FrequencyDemux {
  struct Route {
    std::string input_path;
    int bin_id = 0;
    std::string output_path;
  };
  std::vector<Route> routes;
};

/// Absorption modeled as a beam splitter to a fresh environment mode per
/// target, which is then traced or conditioned downstream.
struct LossChannel {
  std::vector<Mode> targets;
  double transmission = 1.0;
};

/// Binary click/no-click detector used for heralding.
struct HeraldDetector {
  std::string name;
  std::vector<Mode> watched;
  double efficiency = 1.0;
  double dark_count_probability = 0.0;
};

using ComponentSpec = std::variant<AOMCoupler,
                                   SpatialBeamSplitter,
                                   PolarizingBeamSplitter,
                                   FrequencyDemux,
                                   LossChannel,
                                   HeraldDetector>;

/// Herald detector resolved against a registry, consumed by detection
/// conditioning.
struct DetectionPlan {
  std::string name;
  std::vector<int> watched;
  double efficiency = 1.0;
  double dark_count_probability = 0.0;
};

struct CompiledComponent {
  std::optional<ModeUnitary> unitary;
  std::optional<DetectionPlan> plan;
  std::vector<int> touched_modes;
  std::vector<std::string> warnings;
};

/// Builds the AOM pair-rotation unitary: identity except on the coupled
/// pairs. Validates disjoint pairs, registered modes, and that every pair's
/// bin gap matches the drive within the relative tolerance; drives above the
/// feasibility threshold add a warning.
ModeUnitary fbs_unitary(const AOMCoupler& coupler, const ModeRegistry& registry,
                        std::vector<std::string>* warnings = nullptr);

/// Environment-mode path used by loss dilation; component_index keeps the
/// names unique when a circuit has several loss channels.
std::string loss_environment_path(int component_index, const std::string& target_path);

/// Registers one fresh environment mode per loss target. Must run before the
/// registry is frozen; compile_component later resolves the same names.
void register_loss_environment(const LossChannel& loss, int component_index,
                               ModeRegistry& registry);

/// Compiles any component against a registry: routing elements yield
/// permutation unitaries, couplers yield block rotations, loss yields a
/// dilation unitary onto its pre-registered environment modes, and herald
/// detectors yield a detection plan.
CompiledComponent compile_component(const ComponentSpec& spec, const ModeRegistry& registry,
                                    int component_index = -1);

/// Click/no-click outcome of a herald detector.
struct HeraldOutcome {
  std::string label; ///< "click" or "no_click"
  double probability = 0.0;
  StateMixture post_components;
};

/// Applies the herald model: per term with n photons in the watched modes,
/// P(no click) = (1 − dark)·(1 − efficiency)^n, which reduces to
/// 1 − (1 − dark)(1 − efficiency·P_present) in the ≤1-photon regime. With an
/// ideal detector, no-click exactly projects out watched-mode occupation.
/// Returns {click, no_click}; probabilities sum to 1.
std::vector<HeraldOutcome> herald_outcomes(const PureState& state, const DetectionPlan& plan);

} // namespace fbsim

#endif
