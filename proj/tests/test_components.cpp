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

#include "doctest.h"

#include "fbsim/components.hpp"
#include "fbsim/errors.hpp"
#include "fbsim/fock.hpp"
#include "fbsim/tolerances.hpp"
#include "test_helpers.hpp"

using namespace fbsim;
using fbsim_tests::kPi;

namespace {

const std::complex<double> kI{0.0, 1.0};

/// Two-bin registry with one mode per bin, the minimal coupler habitat.
struct PairSetup {
  std::shared_ptr<ModeRegistry> registry;
  Mode a{"p", 1, Polarization::None};
  Mode b{"q", 2, Polarization::None};

  PairSetup() {
    registry = std::make_shared<ModeRegistry>(4);
    registry->add_bin({1, 3.75e14});
    registry->add_bin({2, 3.75e14 - 1.0e9});
    registry->add_mode(a);
    registry->add_mode(b);
  }

  AOMCoupler coupler(double theta) const {
    AOMCoupler c;
    c.pairs = {{a, b}};
    c.theta = theta;
    c.modulation_frequency_hz = 1.0e9;
    return c;
  }
};

bool is_unitary(const Eigen::MatrixXcd& m) {
  return (m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <=
         kUnitarityTol;
}

} // namespace

TEST_CASE("fbs_unitary at theta=0 is the identity") {
  PairSetup setup;
  ModeUnitary u = fbs_unitary(setup.coupler(0.0), *setup.registry);
  CHECK((u.matrix() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fbs_unitary at theta=pi/4 is the 50% setting") {
  PairSetup setup;
  ModeUnitary u = fbs_unitary(setup.coupler(kPi / 4), *setup.registry);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(u.entry(0, 0) - inv_sqrt2) < 1e-12);
  CHECK(std::abs(u.entry(1, 1) - inv_sqrt2) < 1e-12);
  CHECK(std::abs(u.entry(0, 1) - kI * inv_sqrt2) < 1e-12);
  CHECK(std::abs(u.entry(1, 0) - kI * inv_sqrt2) < 1e-12);
}

TEST_CASE("fbs_unitary is additive in the interaction angle on a shared pair") {
  PairSetup setup;
  for (auto [theta1, theta2] : {std::pair<double, double>{0.2, 0.5}, {1.0, 0.3}, {0.7, 0.7}}) {
    ModeUnitary u1 = fbs_unitary(setup.coupler(theta1), *setup.registry);
    ModeUnitary u2 = fbs_unitary(setup.coupler(theta2), *setup.registry);
    ModeUnitary sum = fbs_unitary(setup.coupler(theta1 + theta2), *setup.registry);
    CHECK((u1.matrix() * u2.matrix() - sum.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("fbs_unitary validates pairs and drive frequency") {
  PairSetup setup;
  AOMCoupler mismatch = setup.coupler(0.5);
  mismatch.modulation_frequency_hz = 2.0e9;
  CHECK_THROWS_WITH_AS(fbs_unitary(mismatch, *setup.registry), doctest::Contains("frequency gap"),
                       ValidationError);

  AOMCoupler overlapping = setup.coupler(0.5);
  overlapping.pairs = {{setup.a, setup.b}, {setup.b, setup.a}};
  CHECK_THROWS_AS(fbs_unitary(overlapping, *setup.registry), ValidationError);

  AOMCoupler unregistered = setup.coupler(0.5);
  unregistered.pairs = {{setup.a, Mode{"nowhere", 2, Polarization::None}}};
  CHECK_THROWS_AS(fbs_unitary(unregistered, *setup.registry), ValidationError);
}

TEST_CASE("drives above a few GHz raise a warning, not an error") {
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, 3.75e14});
  registry->add_bin({2, 3.75e14 - 5.0e9});
  const Mode a{"p", 1, Polarization::None};
  const Mode b{"q", 2, Polarization::None};
  registry->add_mode(a);
  registry->add_mode(b);
  AOMCoupler coupler;
  coupler.pairs = {{a, b}};
  coupler.theta = 0.3;
  coupler.modulation_frequency_hz = 5.0e9;
  std::vector<std::string> warnings;
  fbs_unitary(coupler, *registry, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("feasibility") != std::string::npos);
}

TEST_CASE("real-cross convention builds an orthogonal rotation") {
  PairSetup setup;
  AOMCoupler coupler = setup.coupler(0.4);
  coupler.convention = CouplingConvention::RealCross;
  ModeUnitary u = fbs_unitary(coupler, *setup.registry);
  CHECK(std::abs(u.entry(0, 1) - std::sin(0.4)) < 1e-12);
  CHECK(std::abs(u.entry(1, 0) + std::sin(0.4)) < 1e-12);
  CHECK(is_unitary(u.matrix()));
}

namespace {

std::shared_ptr<ModeRegistry> polarized_registry() {
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, 3.75e14});
  registry->add_bin({2, 3.74e14});
  for (const char* path : {"in", "top", "bot"}) {
    registry->add_mode({path, 1, Polarization::X});
    registry->add_mode({path, 1, Polarization::Y});
    registry->add_mode({path, 2, Polarization::X});
    registry->add_mode({path, 2, Polarization::Y});
  }
  return registry;
}

} // namespace

TEST_CASE("polarizing beam splitter routes x to transmit and y to reflect") {
  auto registry = polarized_registry();
  CompiledComponent pbs =
      compile_component(PolarizingBeamSplitter{"in", "top", "bot"}, *registry);
  REQUIRE(pbs.unitary.has_value());
  CHECK(is_unitary(pbs.unitary->matrix()));
  const int in_x = registry->require_index({"in", 1, Polarization::X});
  const int top_x = registry->require_index({"top", 1, Polarization::X});
  const int in_y = registry->require_index({"in", 1, Polarization::Y});
  const int bot_y = registry->require_index({"bot", 1, Polarization::Y});
  CHECK(std::abs(pbs.unitary->entry(top_x, in_x) - 1.0) < 1e-12);
  CHECK(std::abs(pbs.unitary->entry(bot_y, in_y) - 1.0) < 1e-12);
  CHECK(std::abs(pbs.unitary->entry(top_x, in_y)) == 0.0);

  CHECK_THROWS_AS(compile_component(PolarizingBeamSplitter{"in", "same", "same"}, *registry),
                  ValidationError);
}

TEST_CASE("polarizing beam splitter rejects unpolarized input modes") {
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, 3.75e14});
  registry->add_mode({"in", 1, Polarization::None});
  registry->add_mode({"top", 1, Polarization::None});
  registry->add_mode({"bot", 1, Polarization::None});
  CHECK_THROWS_WITH_AS(compile_component(PolarizingBeamSplitter{"in", "top", "bot"}, *registry),
                       doctest::Contains("unpolarized"), ValidationError);
}

TEST_CASE("frequency demux splits bins onto distinct rails and inverts to identity") {
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, 3.751e14});
  registry->add_bin({2, 3.75e14});
  registry->add_mode({"in", 1, Polarization::None});
  registry->add_mode({"in", 2, Polarization::None});
  registry->add_mode({"rail_i", 1, Polarization::None});
  registry->add_mode({"rail_d", 2, Polarization::None});

  FrequencyDemux split{{{"in", 1, "rail_i"}, {"in", 2, "rail_d"}}};
  CompiledComponent compiled = compile_component(split, *registry);
  REQUIRE(compiled.unitary.has_value());
  const int in1 = registry->require_index({"in", 1, Polarization::None});
  const int in2 = registry->require_index({"in", 2, Polarization::None});
  const int r1 = registry->require_index({"rail_i", 1, Polarization::None});
  const int r2 = registry->require_index({"rail_d", 2, Polarization::None});
  CHECK(std::abs(compiled.unitary->entry(r1, in1) - 1.0) < 1e-12);
  CHECK(std::abs(compiled.unitary->entry(r2, in2) - 1.0) < 1e-12);
  CHECK(r1 != r2);

  FrequencyDemux inverse{{{"rail_i", 1, "in"}, {"rail_d", 2, "in"}}};
  ModeUnitary round_trip =
      compose(*compile_component(inverse, *registry).unitary, *compiled.unitary);
  CHECK((round_trip.matrix() - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);

  FrequencyDemux duplicate{{{"in", 1, "rail_i"}, {"in", 1, "rail_d"}}};
  CHECK_THROWS_WITH_AS(compile_component(duplicate, *registry), doctest::Contains("twice"),
                       ValidationError);
}

TEST_CASE("spatial beam splitter couples matching modes and demands full pairing") {
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, 3.75e14});
  registry->add_mode({"a", 1, Polarization::None});
  registry->add_mode({"b", 1, Polarization::None});
  CompiledComponent bs = compile_component(SpatialBeamSplitter{"a", "b", kPi / 4}, *registry);
  REQUIRE(bs.unitary.has_value());
  CHECK(is_unitary(bs.unitary->matrix()));
  CHECK(std::abs(bs.unitary->entry(0, 1) - kI / std::sqrt(2.0)) < 1e-12);

  registry->add_bin({2, 3.74e14});
  registry->add_mode({"a", 2, Polarization::None}); // no partner on b
  CHECK_THROWS_WITH_AS(compile_component(SpatialBeamSplitter{"a", "b", kPi / 4}, *registry),
                       doctest::Contains("no partner"), ValidationError);
}

TEST_CASE("loss dilation transmits with the configured probability") {
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, 3.75e14});
  const Mode target{"arm", 1, Polarization::None};
  registry->add_mode(target);
  LossChannel loss{{target}, 0.9995};
  register_loss_environment(loss, 0, *registry);
  CompiledComponent compiled = compile_component(loss, *registry, 0);
  REQUIRE(compiled.unitary.has_value());
  CHECK(is_unitary(compiled.unitary->matrix()));

  auto frozen = std::static_pointer_cast<const ModeRegistry>(registry);
  PureState in = PureState::single_term(frozen, {1, 0});
  PureState out = apply_mode_unitary(in, *compiled.unitary);
  CHECK(std::norm(out.amplitude({1, 0})) == doctest::Approx(0.9995).epsilon(1e-12));
  CHECK(std::norm(out.amplitude({0, 1})) == doctest::Approx(0.0005).epsilon(1e-9));

  LossChannel invalid{{target}, 1.5};
  CHECK_THROWS_AS(compile_component(invalid, *registry, 0), ValidationError);
}

TEST_CASE("herald outcomes follow the efficiency/dark-count model") {
  auto registry = fbsim_tests::plain_registry(2);
  const DetectionPlan ideal{"U", {0}, 1.0, 0.0};

  SUBCASE("photon definitely present, ideal detector: click with probability 1") {
    PureState state = PureState::single_term(registry, {1, 0});
    auto outcomes = herald_outcomes(state, ideal);
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].label == "click");
    CHECK(outcomes[0].probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(outcomes[1].probability == doctest::Approx(0.0));
  }

  SUBCASE("vacuum in the watched mode: click probability equals the dark rate") {
    PureState state = PureState::single_term(registry, {0, 1});
    const DetectionPlan dark{"U", {0}, 1.0, 0.03};
    auto outcomes = herald_outcomes(state, dark);
    CHECK(outcomes[0].probability == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(outcomes[1].probability == doctest::Approx(0.97).epsilon(1e-12));
  }

  SUBCASE("shifter arm at alpha=0.8 with an ideal herald: no-click probability 0.8") {
    // Photon split sqrt(0.2)|watched> + i sqrt(0.8)|shifted>.
    PureState state(registry);
    state.add_term({1, 0}, std::sqrt(0.2));
    state.add_term({0, 1}, std::complex<double>(0.0, std::sqrt(0.8)));
    auto outcomes = herald_outcomes(state, ideal);
    CHECK(outcomes[1].label == "no_click");
    CHECK(outcomes[1].probability == doctest::Approx(0.8).epsilon(1e-12));
    // Ideal no-click projects out the watched occupation entirely.
    const PureState& post = outcomes[1].post_components.front().second;
    CHECK(post.amplitude({1, 0}) == std::complex<double>(0.0, 0.0));
    CHECK(std::abs(std::abs(post.amplitude({0, 1})) - 1.0) < 1e-12);
  }

  SUBCASE("partial efficiency matches 1 - (1-dark)(1 - eff*P_present) for single photons") {
    PureState state(registry);
    state.add_term({1, 0}, std::sqrt(0.3));
    state.add_term({0, 1}, std::sqrt(0.7));
    const DetectionPlan lossy{"U", {0}, 0.6, 0.01};
    auto outcomes = herald_outcomes(state, lossy);
    const double expected = 1.0 - (1.0 - 0.01) * (1.0 - 0.6 * 0.3);
    CHECK(outcomes[0].probability == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("probabilities sum to 1") {
    PureState state(registry);
    state.add_term({2, 0}, 0.5);
    state.add_term({1, 1}, 0.5);
    state.add_term({0, 2}, std::sqrt(0.5));
    const DetectionPlan lossy{"U", {0}, 0.37, 0.02};
    auto outcomes = herald_outcomes(state, lossy);
    CHECK(outcomes[0].probability + outcomes[1].probability ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("every compiled component is unitary") {
  auto registry = polarized_registry();
  std::vector<ComponentSpec> specs;
  AOMCoupler coupler;
  coupler.pairs = {{Mode{"in", 1, Polarization::X}, Mode{"in", 2, Polarization::X}}};
  coupler.theta = 0.9;
  coupler.modulation_frequency_hz = 1.0e12;
  specs.emplace_back(coupler);
  specs.emplace_back(SpatialBeamSplitter{"top", "bot", 0.77});
  specs.emplace_back(PolarizingBeamSplitter{"in", "top", "bot"});
  specs.emplace_back(FrequencyDemux{{{"in", 1, "top"}, {"in", 2, "bot"}}});
  LossChannel loss{{Mode{"in", 1, Polarization::X}, Mode{"in", 1, Polarization::Y}}, 0.25};
  register_loss_environment(loss, 7, *registry);
  specs.emplace_back(loss);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CompiledComponent compiled = compile_component(specs[i], *registry, 7);
    if (compiled.unitary.has_value()) {
      CHECK(is_unitary(compiled.unitary->matrix()));
    }
  }
}
