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

#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "fbsim/device_physics.hpp"
#include "fbsim/errors.hpp"
#include "test_helpers.hpp"

using namespace fbsim;
using fbsim_tests::kPi;

namespace {

const CrystalParams& gap() {
  static const CrystalParams crystal = MaterialTable::builtin().find("gallium_phosphide").crystal;
  return crystal;
}

// Documented GaP working point: 1 mm cell, 1e7 W/m^2 acoustic drive.
const AOMGeometry kMillimeterCell{1.0e-3};
const AcousticDrive kReferenceDrive{1.0e7, 8.0e8};
const double kOmega = 2.0 * kPi * 3.75e14;

} // namespace

TEST_CASE("coupling scaling laws hold exactly under parameter doubling") {
  const double base = coupling_eta(gap(), kReferenceDrive, kOmega);

  AcousticDrive doubled_intensity = kReferenceDrive;
  doubled_intensity.intensity_w_m2 *= 2.0;
  CHECK(coupling_eta(gap(), doubled_intensity, kOmega) ==
        doctest::Approx(base * std::sqrt(2.0)).epsilon(1e-14));

  CHECK(coupling_eta(gap(), kReferenceDrive, 2.0 * kOmega) ==
        doctest::Approx(2.0 * base).epsilon(1e-14));

  CrystalParams doubled_n = gap();
  doubled_n.refractive_index *= 2.0;
  CHECK(coupling_eta(doubled_n, kReferenceDrive, kOmega) ==
        doctest::Approx(8.0 * base).epsilon(1e-14));

  CrystalParams doubled_v = gap();
  doubled_v.sound_speed_m_s *= 2.0;
  CHECK(coupling_eta(doubled_v, kReferenceDrive, kOmega) ==
        doctest::Approx(base / (2.0 * std::sqrt(2.0))).epsilon(1e-14));

  CHECK_THROWS_AS(coupling_eta(gap(), AcousticDrive{-1.0, 0.0}, kOmega), ValidationError);
}

TEST_CASE("interaction constant is independent of the optical frequency") {
  const double r = interaction_constant(gap(), kReferenceDrive, kMillimeterCell);
  for (double omega : {kOmega * 1e-2, kOmega * 0.1, kOmega, kOmega * 10.0, kOmega * 1e2}) {
    CHECK(coupling_eta(gap(), kReferenceDrive, omega) * kMillimeterCell.interaction_length_m /
              omega ==
          doctest::Approx(r).epsilon(1e-12));
  }

  AOMGeometry doubled{2.0e-3};
  CHECK(interaction_constant(gap(), kReferenceDrive, doubled) ==
        doctest::Approx(2.0 * r).epsilon(1e-14));
}

TEST_CASE("GaP millimeter cell lands near the 1e-15 s scale") {
  const double r = interaction_constant(gap(), kReferenceDrive, kMillimeterCell);
  CHECK(r >= 1.0e-16);
  CHECK(r <= 1.0e-14);
}

TEST_CASE("conversion efficiency at the standard operating points") {
  CHECK(std::abs(conversion_efficiency(kPi / 4) - 0.5) <= 1e-12);
  CHECK(std::abs(conversion_efficiency(kPi / 2) - 1.0) <= 1e-12);
  CHECK(conversion_efficiency(0.0) == 0.0);
  for (double theta = -1.0; theta < 7.0; theta += 0.37) {
    const double e = conversion_efficiency(theta);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}

TEST_CASE("required intensity inverts the coupling exactly") {
  for (double target : {0.1, kPi / 4, 1.0, kPi / 2}) {
    const double intensity = required_intensity(target, gap(), kMillimeterCell, kOmega);
    CHECK(intensity > 0.0);
    const double recovered =
        coupling_eta(gap(), AcousticDrive{intensity, 0.0}, kOmega) *
        kMillimeterCell.interaction_length_m;
    CHECK(std::abs(recovered - target) <= 1e-12 * target);
  }

  const double quarter = required_intensity(0.2, gap(), kMillimeterCell, kOmega);
  const double full = required_intensity(0.8, gap(), kMillimeterCell, kOmega);
  CHECK(full == doctest::Approx(16.0 * quarter).epsilon(1e-12));

  CHECK_THROWS_AS(required_intensity(0.0, gap(), kMillimeterCell, kOmega), ValidationError);
  CHECK_THROWS_AS(required_intensity(2.0, gap(), kMillimeterCell, kOmega), ValidationError);
  CHECK_THROWS_AS(required_intensity(0.5, gap(), AOMGeometry{0.0}, kOmega), ValidationError);
}

TEST_CASE("bandwidth ratio: exact vs first order") {
  SUBCASE("zero detuning gives exactly 1") {
    BandwidthRatio ratio = bandwidth_ratio(1.0e15, 0.0, 1.0e-15);
    CHECK(ratio.exact == 1.0);
    CHECK(ratio.first_order == 1.0);
  }

  SUBCASE("a GHz detuning at optical frequencies is a negligible correction") {
    // omega*R near 1, delta*R = 1e-6.
    const double r = 1.0e-15;
    const double omega = 1.0 / r;
    const double delta = 1.0e-6 / r;
    BandwidthRatio ratio = bandwidth_ratio(omega, delta, r);
    const double expected_shift = 2.0e-6 * std::cos(1.0) / std::sin(1.0);
    CHECK(std::abs(ratio.exact - 1.0 - expected_shift) <= 1e-11);
  }

  SUBCASE("first-order error is bounded by 5(deltaR)^2 and shrinks quadratically") {
    const double r = 1.0e-15;
    const double omega = 1.0 / r; // omega*R = 1.0
    double previous_error = 0.0;
    int step = 0;
    for (double delta_r : {1.0e-3, 5.0e-4, 2.5e-4}) {
      BandwidthRatio ratio = bandwidth_ratio(omega, delta_r / r, r);
      const double error = std::abs(ratio.exact - ratio.first_order);
      CHECK(error <= 5.0 * delta_r * delta_r);
      if (step > 0) {
        CHECK(previous_error / error == doctest::Approx(4.0).epsilon(0.10));
      }
      previous_error = error;
      ++step;
    }
  }

  SUBCASE("multiples of pi are a singularity error") {
    const double r = 1.0e-15;
    CHECK_THROWS_AS(bandwidth_ratio(kPi / r, 1.0, r), EvaluationError);
  }
}

TEST_CASE("material table: built-ins and the shipped data file agree") {
  const MaterialTable& table = MaterialTable::builtin();
  CHECK(table.version() == 1);
  CHECK(table.materials().size() == 3);
  CHECK_THROWS_WITH_AS(table.find("unobtainium"), doctest::Contains("unknown material"),
                       ValidationError);

  std::ifstream file(std::string(FBSIM_DATA_DIR) + "/materials.json");
  REQUIRE(file.good());
  std::ostringstream text;
  text << file.rdbuf();
  MaterialTable shipped = MaterialTable::from_json(text.str());
  CHECK(shipped.version() == table.version());
  REQUIRE(shipped.materials().size() == table.materials().size());
  for (std::size_t i = 0; i < shipped.materials().size(); ++i) {
    const Material& a = shipped.materials()[i];
    const Material& b = table.materials()[i];
    CHECK(a.name == b.name);
    CHECK(a.crystal.refractive_index == b.crystal.refractive_index);
    CHECK(a.crystal.photoelastic_constant == b.crystal.photoelastic_constant);
    CHECK(a.crystal.density_kg_m3 == b.crystal.density_kg_m3);
    CHECK(a.crystal.sound_speed_m_s == b.crystal.sound_speed_m_s);
    CHECK(a.citation == b.citation);
  }

  CHECK_THROWS_AS(MaterialTable::from_json("not json"), ValidationError);
  CHECK_THROWS_AS(MaterialTable::from_json("{\"materials\": []}"), ValidationError);
}
