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
#include <complex>
#include <random>

#include "doctest.h"

#include "fbsim/errors.hpp"
#include "fbsim/fock.hpp"
#include "fbsim/oracle.hpp"
#include "test_helpers.hpp"

using namespace fbsim;
using fbsim_tests::kPi;
using fbsim_tests::occupations_with;
using fbsim_tests::plain_registry;
using fbsim_tests::random_unitary;

TEST_CASE("permanent of small matrices") {
  Eigen::MatrixXcd empty(0, 0);
  CHECK(permanent(empty) == std::complex<double>(1.0, 0.0));

  Eigen::MatrixXcd one(1, 1);
  one << std::complex<double>(2.0, 1.0);
  CHECK(permanent(one) == std::complex<double>(2.0, 1.0));

  Eigen::MatrixXcd two(2, 2);
  two << 1.0, 2.0, 3.0, 4.0;
  CHECK(permanent(two) == std::complex<double>(10.0, 0.0)); // ad + bc

  Eigen::MatrixXcd three(3, 3);
  three << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  CHECK(permanent(three) == std::complex<double>(450.0, 0.0));

  CHECK_THROWS_AS(permanent(Eigen::MatrixXcd(2, 3)), ValidationError);
}

TEST_CASE("oracle on the identity: diagonal 1, off-diagonal 0") {
  const ModeUnitary id = ModeUnitary::identity(4);
  for (const auto& occ : occupations_with(4, 2)) {
    CHECK(std::abs(transition_amplitude_oracle(occ, occ, id) - 1.0) < 1e-12);
    for (const auto& other : occupations_with(4, 2)) {
      if (other == occ) continue;
      CHECK(std::abs(transition_amplitude_oracle(occ, other, id)) < 1e-12);
    }
  }
}

TEST_CASE("oracle returns 0 across photon-number sectors") {
  const ModeUnitary id = ModeUnitary::identity(3);
  CHECK(transition_amplitude_oracle({1, 0, 0}, {1, 1, 0}, id) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("oracle coincidence amplitude on a pair coupler is cos^2 - sin^2") {
  for (double theta : {0.0, 0.3, kPi / 4, 1.0, kPi / 2}) {
    Eigen::MatrixXcd m(2, 2);
    const std::complex<double> i_sin(0.0, std::sin(theta));
    m << std::cos(theta), i_sin, i_sin, std::cos(theta);
    const ModeUnitary u = ModeUnitary::from_matrix(m);
    const std::complex<double> amp = transition_amplitude_oracle({1, 1}, {1, 1}, u);
    const double expected = std::cos(theta) * std::cos(theta) - std::sin(theta) * std::sin(theta);
    CHECK(std::abs(amp - expected) < 1e-12);
  }
}

TEST_CASE("oracle agrees with the evolution engine on all small transitions") {
  std::mt19937_64 rng(2026);
  int performed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int modes = 2 + trial % 5; // 2..6
    auto registry = plain_registry(modes);
    const ModeUnitary u = ModeUnitary::from_matrix(random_unitary(modes, rng));
    for (int photons = 0; photons <= 2; ++photons) {
      for (const auto& in_occ : occupations_with(modes, photons)) {
        PureState evolved = apply_mode_unitary(PureState::single_term(registry, in_occ), u);
        for (const auto& out_occ : occupations_with(modes, photons)) {
          const std::complex<double> expected = transition_amplitude_oracle(in_occ, out_occ, u);
          CHECK(std::abs(evolved.amplitude(out_occ) - expected) <= 1e-10);
          ++performed;
        }
      }
    }
  }
  CHECK(performed > 10000);
}

TEST_CASE("oracle handles multi-photon occupations up to the cap") {
  std::mt19937_64 rng(5);
  const int modes = 3;
  auto registry = plain_registry(modes);
  const ModeUnitary u = ModeUnitary::from_matrix(random_unitary(modes, rng));
  for (const auto& in_occ : occupations_with(modes, 4)) {
    PureState evolved = apply_mode_unitary(PureState::single_term(registry, in_occ), u);
    for (const auto& out_occ : occupations_with(modes, 4)) {
      CHECK(std::abs(evolved.amplitude(out_occ) -
                     transition_amplitude_oracle(in_occ, out_occ, u)) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(transition_amplitude_oracle({5, 0, 0}, {5, 0, 0}, u), ValidationError);
}
