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

#ifndef FBSIM_SCENARIOS_HPP
#define FBSIM_SCENARIOS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fbsim/components.hpp"
#include "fbsim/density_matrix.hpp"
#include "fbsim/pure_state.hpp"

namespace fbsim {

/// Configuration shared by the which-way erasure run (single photon) and the
/// two-photon interference run: two emitters at distinct frequency bins and
/// one AOM pass driven at their difference.
struct ErasureConfig {
  double omega1_hz = 3.75e14;
  double omega2_hz = 3.75e14 - 1.0e9;
  double theta = 0.7853981633974483; // π/4
  bool frequency_blind = true;
  CouplingConvention convention = CouplingConvention::ImaginaryCross;

  void validate() const;
  double modulation_frequency_hz() const;
};

/// Biexciton cascade rectification parameters. Frequencies obey
/// ω3 > ω1 > ω2 > ω4 with ω3 = ω1 + Δ, ω2 = ω4 + Δ, ω1 = ω2 + ξ.
struct BiexcitonConfig {
  double omega1_hz = 0.0;
  double omega2_hz = 0.0;
  double omega3_hz = 0.0;
  double omega4_hz = 0.0;
  double doublet_splitting_hz = 8.0e8; // Δ
  double biexciton_shift_hz = 1.0e11;  // ξ
  double nu = 0.0;                     // cascade phase
  double theta = 1.5707963267948966;   // π/2, AOM interaction angle
  double shift_efficiency = 0.8;       // α, per-pass shift probability
  double absorption = 0.0005;          // a, per-pass crystal absorption
  double detector_efficiency_u = 1.0;
  double detector_dark_u = 0.0;
  double detector_efficiency_v = 1.0;
  double detector_dark_v = 0.0;

  /// Fills ω1..ω4 from a base frequency (ω2), Δ, and ξ.
  static BiexcitonConfig from_splittings(double base_omega2_hz, double doublet_splitting_hz,
                                         double biexciton_shift_hz);

  void validate() const;
};

/// Uniform result record for all scenario runners; fields not meaningful
/// for a given scenario stay unset.
struct ScenarioResult {
  struct OutcomeRow {
    std::string label;
    double probability = 0.0;
    std::map<std::string, double> values;
    std::string note;
  };

  std::optional<double> success_probability;
  std::optional<double> fidelity_to_target;
  std::optional<double> concurrence;
  std::optional<double> which_way_distinguishability;
  std::optional<DensityMatrix> conditioned_density;
  std::vector<OutcomeRow> outcomes;
  std::map<std::string, double> extra;
  std::vector<std::string> warnings;
};

/// Which-way erasure (single-excitation superposition of two emitters): the
/// photon crosses a frequency beam splitter at angle θ driven at ω1−ω2 and
/// is detected by direction. Reports per-click source probabilities,
/// distinguishability |cos 2θ|, fidelity to the nearest Bell state, and the
/// emitter-emitter concurrence |sin 2θ|.
ScenarioResult run_erasure(const ErasureConfig& config);

/// Two-photon interference between frequency-mismatched sources: one photon
/// in each bin meets the same coupler; the coincidence probability is
/// cos²(2θ), vanishing at θ = π/4.
ScenarioResult run_hom(const ErasureConfig& config);

/// Mach-Zehnder rectifier: y-polarized cascade photons traverse the FBS
/// driven at Δ (pairs ω3↔ω1 and ω4↔ω2), then recombine with the x path.
/// Reports the frequency-traced polarization density matrix, concurrence
/// sin²θ, and fidelity to (|xx⟩ + e^{i(ν+π)}|yy⟩)/√2.
ScenarioResult run_biexciton_fbs(const BiexcitonConfig& config);

/// Heralded rectifier: the two cascade photons traverse independent AOM
/// passes (ω3→ω1 and ω4→ω2); unshifted components go to herald detectors U
/// and V and crystal absorption is modeled by loss dilation. Success (no
/// clicks, both photons shifted and transmitted) has probability
/// α²(1−a)²(1−dark_U)(1−dark_V) and the success-conditioned rectified state
/// is maximally entangled. Checks the lower bound success ≥ 0.95²·α² when
/// a ≤ 0.05.
ScenarioResult run_biexciton_fbs_prime(const BiexcitonConfig& config);

} // namespace fbsim

#endif
