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

#ifndef FBSIM_FOCK_HPP
#define FBSIM_FOCK_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbsim/density_matrix.hpp"
#include "fbsim/mode_unitary.hpp"
#include "fbsim/pure_state.hpp"

namespace fbsim {

/// Multi-photon lift of a single-particle unitary: substitutes
/// a†_k -> Σ_j U(j,k) a†_j in every term and re-expands. Photon number and
/// norm are preserved; amplitudes below the pruning floor are dropped.
PureState apply_mode_unitary(const PureState& state, const ModeUnitary& u);

/// Maps registry indices to display names for outcome labels.
using ModeNamer = std::function<std::string(int)>;

/// One detection outcome: the Born probability and the renormalized
/// post-click state of the undetected subsystem (detected photons are
/// absorbed; their modes read zero afterwards). A merged frequency-blind
/// outcome is an incoherent mixture with more than one component.
struct DetectionOutcome {
  std::string label;
  double probability = 0.0;
  StateMixture post_components;

  bool is_pure() const { return post_components.size() == 1; }
  const PureState& pure_state() const;
  /// Renders the mixture as a density matrix over its occupation support.
  DensityMatrix to_density_matrix() const;
};

struct DetectionResult {
  std::vector<DetectionOutcome> clicks;
  DetectionOutcome no_click;

  double total_probability() const;
};

/// Conditions a normalized state on a photon-counting detector covering
/// `detector_modes`. Every click pattern (restriction of the occupation to
/// the watched modes) becomes one outcome; with frequency_blind set,
/// patterns that differ only in the frequency bin of the detected photons
/// are merged into a single outcome whose post-click state is an incoherent
/// mixture. Probabilities over clicks plus no_click sum to 1.
DetectionResult condition_on_detection(const PureState& state,
                                       const std::vector<int>& detector_modes,
                                       bool frequency_blind,
                                       const ModeNamer& namer = {});

enum class QubitLabeling {
  Polarization, ///< exactly one photon among the qubit's modes; label = its polarization
  Occupation,   ///< single mode holding 0 or 1 photons; label = the count
};

struct QubitSpec {
  std::string name;
  std::vector<int> modes;
  QubitLabeling labeling = QubitLabeling::Polarization;
};

/// Declares the qubits kept by a partial trace; everything else (frequency
/// bins, paths, leftover modes) is traced out.
struct SubsystemSelector {
  std::vector<QubitSpec> qubits;
};

/// Traces a pure state (or mixture) down to the declared qubit subsystem.
/// Terms the selector cannot classify (no photon in an arm, two photons in
/// one arm, unpolarized mode under Polarization labeling) raise an
/// EvaluationError naming the offending occupation.
DensityMatrix partial_trace(const PureState& state, const SubsystemSelector& selector);
DensityMatrix partial_trace(const StateMixture& mixture, const SubsystemSelector& selector);

/// Wootters concurrence of a two-qubit density matrix (dimension 4):
/// C = max(0, λ1−λ2−λ3−λ4), λi the descending square roots of the
/// eigenvalues of ρ(σy⊗σy)ρ*(σy⊗σy).
double concurrence(const DensityMatrix& rho);

/// ⟨target|ρ|target⟩ for a unit-norm target over the same basis.
double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& target);

} // namespace fbsim

#endif
