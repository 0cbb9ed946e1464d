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

#include "fbsim/device_physics.hpp"

#include <cmath>

#include "json.hpp"

#include "fbsim/errors.hpp"

namespace fbsim {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw ValidationError(std::string(name) + " must be positive");
  }
}

void check_crystal(const CrystalParams& crystal) {
  require_positive(crystal.refractive_index, "refractive index");
  require_positive(crystal.photoelastic_constant, "photoelastic constant");
  require_positive(crystal.density_kg_m3, "density");
  require_positive(crystal.sound_speed_m_s, "sound speed");
}

/// sqrt(n^6 p^2 / (rho v_s^3)): the material part of the coupling, in
/// sqrt(s^3/kg) so that multiplying by sqrt(W/m^2) yields a dimensionless
/// factor once divided by c.
double material_root(const CrystalParams& crystal) {
  const double n = crystal.refractive_index;
  const double p = crystal.photoelastic_constant;
  const double n6p2 = std::pow(n, 6) * p * p;
  const double denom = crystal.density_kg_m3 * std::pow(crystal.sound_speed_m_s, 3);
  return std::sqrt(n6p2 / denom);
}

} // namespace

double coupling_eta(const CrystalParams& crystal, const AcousticDrive& drive,
                    double optical_angular_frequency) {
  check_crystal(crystal);
  require_positive(drive.intensity_w_m2, "acoustic intensity");
  require_positive(optical_angular_frequency, "optical angular frequency");
  return optical_angular_frequency / (2.0 * std::sqrt(2.0) * kSpeedOfLight) *
         material_root(crystal) * std::sqrt(drive.intensity_w_m2);
}

double interaction_constant(const CrystalParams& crystal, const AcousticDrive& drive,
                            const AOMGeometry& geometry) {
  check_crystal(crystal);
  require_positive(drive.intensity_w_m2, "acoustic intensity");
  require_positive(geometry.interaction_length_m, "interaction length");
  // R = eta*l/omega; the omega in eta cancels, leaving a pure crystal/drive
  // time scale.
  return geometry.interaction_length_m / (2.0 * std::sqrt(2.0) * kSpeedOfLight) *
         material_root(crystal) * std::sqrt(drive.intensity_w_m2);
}

double conversion_efficiency(double theta) {
  const double s = std::sin(theta);
  return s * s;
}

double required_intensity(double target_theta, const CrystalParams& crystal,
                          const AOMGeometry& geometry, double optical_angular_frequency) {
  check_crystal(crystal);
  require_positive(geometry.interaction_length_m, "interaction length");
  require_positive(optical_angular_frequency, "optical angular frequency");
  constexpr double kHalfPi = 1.5707963267948966;
  if (!(target_theta > 0.0) || target_theta > kHalfPi) {
    throw ValidationError("target theta must lie in (0, pi/2]");
  }
  const double eta_per_sqrt_intensity = optical_angular_frequency /
                                        (2.0 * std::sqrt(2.0) * kSpeedOfLight) *
                                        material_root(crystal);
  const double root = target_theta / (eta_per_sqrt_intensity * geometry.interaction_length_m);
  return root * root;
}

BandwidthRatio bandwidth_ratio(double omega, double delta, double interaction_r) {
  const double reference = std::sin(omega * interaction_r);
  if (std::abs(reference) < 1e-12) {
    throw EvaluationError("bandwidth ratio is singular: omega*R = " +
                          std::to_string(omega * interaction_r) +
                          " sits at a multiple of pi (zero reference efficiency)");
  }
  const double shifted = std::sin((omega + delta) * interaction_r);
  BandwidthRatio out;
  out.exact = (shifted * shifted) / (reference * reference);
  out.first_order = 1.0 + 2.0 * delta * interaction_r *
                          std::cos(omega * interaction_r) / reference;
  return out;
}

namespace {

MaterialTable parse_table(const nlohmann::json& root) {
  if (!root.is_object()) throw ValidationError("material table: expected a JSON object");
  if (!root.contains("version") || !root["version"].is_number_integer()) {
    throw ValidationError("material table: missing integer field 'version'");
  }
  if (!root.contains("materials") || !root["materials"].is_array()) {
    throw ValidationError("material table: missing array field 'materials'");
  }
  std::vector<Material> materials;
  for (const auto& entry : root["materials"]) {
    Material m;
    m.name = entry.at("name").get<std::string>();
    m.crystal.refractive_index = entry.at("refractive_index").get<double>();
    m.crystal.photoelastic_constant = entry.at("photoelastic_constant").get<double>();
    m.crystal.density_kg_m3 = entry.at("density_kg_m3").get<double>();
    m.crystal.sound_speed_m_s = entry.at("sound_speed_m_s").get<double>();
    m.citation = entry.at("citation").get<std::string>();
    check_crystal(m.crystal);
    materials.push_back(std::move(m));
  }
  return MaterialTable(root["version"].get<int>(), std::move(materials));
}

} // namespace

const MaterialTable& MaterialTable::builtin() {
  static const MaterialTable table(
      1,
      {
          Material{"gallium_phosphide",
                   CrystalParams{3.31, 0.151, 4130.0, 6320.0},
                   "Dixon, J. Appl. Phys. 38, 5149 (1967): GaP at 0.633 um, longitudinal [110]"},
          Material{"fused_silica",
                   CrystalParams{1.457, 0.27, 2200.0, 5960.0},
                   "Yariv & Yeh, Optical Waves in Crystals (1984), Table 9.2: SiO2, p12, longitudinal"},
          Material{"lithium_niobate",
                   CrystalParams{2.20, 0.15, 4640.0, 6570.0},
                   "Yariv & Yeh, Optical Waves in Crystals (1984), Table 9.2: LiNbO3, longitudinal"},
      });
  return table;
}

MaterialTable MaterialTable::from_json(const std::string& json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("material table: ") + e.what());
  }
  try {
    return parse_table(root);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("material table: ") + e.what());
  }
}

const Material& MaterialTable::find(const std::string& name) const {
  for (const auto& material : materials_) {
    if (material.name == name) return material;
  }
  std::string known;
  for (const auto& material : materials_) {
    if (!known.empty()) known += ", ";
    known += material.name;
  }
  throw ValidationError("unknown material '" + name + "' (known: " + known + ")");
}

} // namespace fbsim
