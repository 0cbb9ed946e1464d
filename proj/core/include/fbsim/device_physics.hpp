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

#ifndef FBSIM_DEVICE_PHYSICS_HPP
#define FBSIM_DEVICE_PHYSICS_HPP

#include <string>
#include <vector>

namespace fbsim {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// Bulk acousto-optic material constants. All device formulas use angular
/// optical frequency (rad/s) internally; conversions from Hz live at the
/// interface layer.
struct CrystalParams {
  double refractive_index = 0.0;      // n
  double photoelastic_constant = 0.0; // p
  double density_kg_m3 = 0.0;         // ρ
  double sound_speed_m_s = 0.0;       // v_s
};

struct AOMGeometry {
  double interaction_length_m = 0.0; // l
};

struct AcousticDrive {
  double intensity_w_m2 = 0.0; // I_acoustic
  double modulation_frequency_hz = 0.0;
};

/// Coupling constant of the photoelastic two-field interaction,
///   η = (ω / (2√2 c)) · √(n⁶ p² I_acoustic / (ρ v_s³))   [1/m],
/// with ω the optical angular frequency. Linear in ω, ∝ √I_acoustic.
double coupling_eta(const CrystalParams& crystal, const AcousticDrive& drive,
                    double optical_angular_frequency);

/// Interaction constant R = η·l/ω in seconds. The ω in η cancels, so R
/// depends on crystal, drive, and geometry alone; the conversion efficiency
/// at frequency ω is sin²(ωR).
double interaction_constant(const CrystalParams& crystal, const AcousticDrive& drive,
                            const AOMGeometry& geometry);

/// sin²θ with θ = ηl = ωR.
double conversion_efficiency(double theta);

/// Acoustic intensity needed so that η·l equals target_theta (θ ∝ √I, so
/// the inversion is exact). target_theta must lie in (0, π/2].
double required_intensity(double target_theta, const CrystalParams& crystal,
                          const AOMGeometry& geometry, double optical_angular_frequency);

struct BandwidthRatio {
  double exact = 0.0;       ///< sin²((ω+δ)R) / sin²(ωR)
  double first_order = 0.0; ///< 1 + 2δR·cos(ωR)/sin(ωR)
};

/// Ratio of conversion efficiencies for photons at ω and ω+δ, exact and to
/// first order in δR. Raises EvaluationError when ωR sits at a multiple of π
/// (zero-efficiency reference point).
BandwidthRatio bandwidth_ratio(double omega, double delta, double interaction_r);

struct Material {
  std::string name;
  CrystalParams crystal;
  std::string citation;
};

/// Versioned lookup table of acousto-optic materials. The built-in table
/// matches the shipped data file; from_json loads an external copy.
class MaterialTable {
 public:
  MaterialTable(int version, std::vector<Material> materials)
      : version_(version), materials_(std::move(materials)) {}

  static const MaterialTable& builtin();
  static MaterialTable from_json(const std::string& json_text);

  int version() const { return version_; }
  const std::vector<Material>& materials() const { return materials_; }
  const Material& find(const std::string& name) const;

 private:
  int version_ = 0;
  std::vector<Material> materials_;
};

} // namespace fbsim

#endif
