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

#ifndef FBSIM_PURE_STATE_HPP
#define FBSIM_PURE_STATE_HPP

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fbsim/modes.hpp"
#include "fbsim/tolerances.hpp"

namespace fbsim {

/// Photon count per registered mode; length always equals the registry size.
using OccupationVector = std::vector<int>;

int total_photons(const OccupationVector& occupation);
std::string occupation_to_string(const OccupationVector& occupation);

/// Sparse few-photon state: occupation vector -> complex amplitude.
///
/// All terms share one total photon number unless the state was created with
/// allow_mixed_sectors (needed when emitter markers and photons live in one
/// registry and branches differ in marker count). The ordered map keeps every
/// traversal deterministic.
class PureState {
 public:
  explicit PureState(std::shared_ptr<const ModeRegistry> registry,
                     bool allow_mixed_sectors = false);

  static PureState single_term(std::shared_ptr<const ModeRegistry> registry,
                               const OccupationVector& occupation,
                               std::complex<double> amplitude = 1.0);

  const std::shared_ptr<const ModeRegistry>& registry() const { return registry_; }
  bool allow_mixed_sectors() const { return allow_mixed_sectors_; }

  const std::map<OccupationVector, std::complex<double>>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds amplitude to a term (accumulating); validates the occupation shape.
  void add_term(const OccupationVector& occupation, std::complex<double> amplitude);

  std::complex<double> amplitude(const OccupationVector& occupation) const;

  double squared_norm() const;
  double norm() const;

  /// Scales to unit norm; throws EvaluationError on an empty/zero state.
  void normalize();

  /// Drops terms with |amplitude| below the floor. Exact HOM cancellations
  /// must leave no residue, hence the aggressive default.
  void prune(double floor = kAmplitudeFloor);

  /// Checks the class invariants: unit norm within kNormTol and a single
  /// photon-number sector unless allow_mixed_sectors is set.
  void validate() const;

  /// Total photon number, or -1 for a mixed-sector state.
  int photon_number() const;

 private:
  std::shared_ptr<const ModeRegistry> registry_;
  bool allow_mixed_sectors_;
  std::map<OccupationVector, std::complex<double>> terms_;
};

/// ⟨a|b⟩. Both states must share a registry.
std::complex<double> inner_product(const PureState& a, const PureState& b);

/// Convex combination of pure states; weights are probabilities summing to 1.
using StateMixture = std::vector<std::pair<double, PureState>>;

} // namespace fbsim

#endif
