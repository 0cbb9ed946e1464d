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

#include "fbsim/components.hpp"
#include "fbsim/errors.hpp"
#include "fbsim/fock.hpp"
#include "fbsim/oracle.hpp"
#include "test_helpers.hpp"

using namespace fbsim;
using fbsim_tests::kPi;
using fbsim_tests::occupations_with;
using fbsim_tests::plain_registry;
using fbsim_tests::random_unitary;

namespace {

const std::complex<double> kI{0.0, 1.0};

ModeUnitary pair_coupler(int dimension, int a, int b, double theta) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dimension, dimension);
  m(a, a) = std::cos(theta);
  m(b, b) = std::cos(theta);
  m(a, b) = kI * std::sin(theta);
  m(b, a) = kI * std::sin(theta);
  return ModeUnitary::from_matrix(m);
}

} // namespace

TEST_CASE("identity unitary leaves any state unchanged") {
  auto registry = plain_registry(3);
  PureState state(registry);
  state.add_term({1, 0, 1}, std::complex<double>(0.6, 0.0));
  state.add_term({0, 2, 0}, std::complex<double>(0.0, 0.8));
  PureState out = apply_mode_unitary(state, ModeUnitary::identity(3));
  CHECK(out.amplitude({1, 0, 1}) == std::complex<double>(0.6, 0.0));
  CHECK(out.amplitude({0, 2, 0}) == std::complex<double>(0.0, 0.8));
}

TEST_CASE("50% coupler maps a single photon to (1/sqrt2, i/sqrt2)") {
  auto registry = plain_registry(2);
  PureState in = PureState::single_term(registry, {1, 0});
  PureState out = apply_mode_unitary(in, pair_coupler(2, 0, 1, kPi / 4));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(out.amplitude({1, 0}) - inv_sqrt2) < 1e-12);
  CHECK(std::abs(out.amplitude({0, 1}) - kI * inv_sqrt2) < 1e-12);
}

TEST_CASE("two photons on the 50% coupler bunch with no coincidence term") {
  auto registry = plain_registry(2);
  PureState in = PureState::single_term(registry, {1, 1});
  PureState out = apply_mode_unitary(in, pair_coupler(2, 0, 1, kPi / 4));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Frozen from the permanent oracle over all 2-photon outcomes.
  CHECK(std::abs(out.amplitude({2, 0}) - kI * inv_sqrt2) < 1e-12);
  CHECK(std::abs(out.amplitude({0, 2}) - kI * inv_sqrt2) < 1e-12);
  CHECK(out.amplitude({1, 1}) == std::complex<double>(0.0, 0.0));
  const ModeUnitary u = pair_coupler(2, 0, 1, kPi / 4);
  for (const auto& occ : occupations_with(2, 2)) {
    CHECK(std::abs(out.amplitude(occ) - transition_amplitude_oracle({1, 1}, occ, u)) < 1e-12);
  }
}

TEST_CASE("apply_mode_unitary rejects dimension mismatches") {
  auto registry = plain_registry(3);
  PureState state = PureState::single_term(registry, {1, 0, 0});
  CHECK_THROWS_AS(apply_mode_unitary(state, ModeUnitary::identity(2)), ValidationError);
}

TEST_CASE("non-unitary matrices are rejected at construction") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2) * 1.5;
  CHECK_THROWS_AS(ModeUnitary::from_matrix(bad), ValidationError);
}

TEST_CASE("norm and photon number are preserved for random unitaries and states") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> mode_count(2, 6);
  std::uniform_int_distribution<int> photon_count(1, 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int iteration = 0; iteration < 1000; ++iteration) {
    const int modes = mode_count(rng);
    const int photons = photon_count(rng);
    auto registry = plain_registry(modes);
    PureState state(registry);
    for (const auto& occ : occupations_with(modes, photons)) {
      state.add_term(occ, std::complex<double>(gauss(rng), gauss(rng)));
    }
    state.normalize();
    const ModeUnitary u = ModeUnitary::from_matrix(random_unitary(modes, rng));
    PureState out = apply_mode_unitary(state, u);
    CHECK(std::abs(out.norm() - 1.0) <= 1e-10);
    for (const auto& [occ, amp] : out.terms()) {
      CHECK(total_photons(occ) == photons);
    }
  }
}

TEST_CASE("composition: applying U then V equals applying V*U") {
  std::mt19937_64 rng(777);
  for (int iteration = 0; iteration < 25; ++iteration) {
    const int modes = 4;
    auto registry = plain_registry(modes);
    PureState state(registry);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& occ : occupations_with(modes, 2)) {
      state.add_term(occ, std::complex<double>(gauss(rng), gauss(rng)));
    }
    state.normalize();
    const ModeUnitary u = ModeUnitary::from_matrix(random_unitary(modes, rng));
    const ModeUnitary v = ModeUnitary::from_matrix(random_unitary(modes, rng));
    PureState stepwise = apply_mode_unitary(apply_mode_unitary(state, u), v);
    PureState direct = apply_mode_unitary(state, compose(v, u));
    for (const auto& occ : occupations_with(modes, 2)) {
      CHECK(std::abs(stepwise.amplitude(occ) - direct.amplitude(occ)) <= 1e-10);
    }
  }
}

TEST_CASE("detection: a photon entirely in the watched mode clicks with probability 1") {
  auto registry = plain_registry(2);
  PureState state = PureState::single_term(registry, {1, 0});
  DetectionResult result = condition_on_detection(state, {0}, false);
  REQUIRE(result.clicks.size() == 1);
  CHECK(result.clicks[0].probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.no_click.probability == doctest::Approx(0.0));
  const PureState& post = result.clicks[0].pure_state();
  CHECK(std::abs(post.amplitude({0, 0}) - 1.0) < 1e-12);
}

TEST_CASE("detection reproduces the erasure click conditioning") {
  // Modes: s1 marker, s2 marker, photon at bin1, photon at bin2.
  auto registry = plain_registry(4);
  const double theta = kPi / 4;
  PureState state(registry);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  state.add_term({1, 0, 1, 0}, inv_sqrt2);
  state.add_term({0, 1, 0, 1}, inv_sqrt2);
  PureState evolved = apply_mode_unitary(state, pair_coupler(4, 2, 3, theta));

  DetectionResult result = condition_on_detection(evolved, {2}, false);
  REQUIRE(result.clicks.size() == 1);
  CHECK(result.clicks[0].probability == doctest::Approx(0.5).epsilon(1e-12));
  const PureState& post = result.clicks[0].pure_state();
  CHECK(std::abs(post.amplitude({1, 0, 0, 0}) - inv_sqrt2) < 1e-12);
  CHECK(std::abs(post.amplitude({0, 1, 0, 0}) - kI * inv_sqrt2) < 1e-12);

  // theta = 0: the frequency tags the source exactly.
  PureState untouched = apply_mode_unitary(state, pair_coupler(4, 2, 3, 0.0));
  DetectionResult tagged = condition_on_detection(untouched, {2}, false);
  REQUIRE(tagged.clicks.size() == 1);
  CHECK(tagged.clicks[0].probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(tagged.clicks[0].pure_state().amplitude({1, 0, 0, 0}) - 1.0) < 1e-12);
}

TEST_CASE("frequency-blind detection merges bins into a mixture") {
  // One photon split over two bins on the same output path, entangled with a
  // marker: blind merging must yield a genuinely mixed outcome.
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, 2.0e14});
  registry->add_bin({2, 2.00001e14});
  registry->add_bin({0, 1.0});
  registry->add_mode({"det", 1, Polarization::None});
  registry->add_mode({"det", 2, Polarization::None});
  registry->add_mode({"mark", 0, Polarization::None});
  // The photon's bin is entangled with the marker occupation, so the two
  // branches sit in different photon-number sectors.
  PureState state(registry, true);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  state.add_term({1, 0, 0}, inv_sqrt2);
  state.add_term({0, 1, 1}, inv_sqrt2);

  DetectionResult blind = condition_on_detection(state, {0, 1}, true);
  REQUIRE(blind.clicks.size() == 1); // both bins merge: same path, same count
  CHECK(blind.clicks[0].probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(blind.clicks[0].is_pure());
  DensityMatrix rho = blind.clicks[0].to_density_matrix();
  CHECK(rho.dimension() == 2);
  // Marker populations 1/2 each, no coherence (the bin record decoheres them).
  CHECK(std::abs(rho.entry(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(rho.entry(1, 1).real() - 0.5) < 1e-12);
  CHECK(std::abs(rho.entry(0, 1)) < 1e-12);

  DetectionResult resolved = condition_on_detection(state, {0, 1}, false);
  CHECK(resolved.clicks.size() == 2);
}

TEST_CASE("detection probabilities over outcomes plus no-click sum to 1") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int iteration = 0; iteration < 50; ++iteration) {
    const int modes = 5;
    auto registry = plain_registry(modes);
    PureState state(registry);
    for (const auto& occ : occupations_with(modes, 2)) {
      state.add_term(occ, std::complex<double>(gauss(rng), gauss(rng)));
    }
    state.normalize();
    PureState evolved = apply_mode_unitary(state, ModeUnitary::from_matrix(random_unitary(modes, rng)));
    DetectionResult result = condition_on_detection(evolved, {1, 3}, iteration % 2 == 0);
    CHECK(std::abs(result.total_probability() - 1.0) <= 1e-9);
  }
}

TEST_CASE("detection rejects empty states and unknown modes") {
  auto registry = plain_registry(2);
  PureState empty(registry);
  CHECK_THROWS_AS(condition_on_detection(empty, {0}, false), ValidationError);
  PureState state = PureState::single_term(registry, {1, 0});
  CHECK_THROWS_AS(condition_on_detection(state, {7}, false), ValidationError);
  CHECK_THROWS_AS(condition_on_detection(state, {}, false), ValidationError);
}

namespace {

/// Registry shaped like the rectifier output: arm A carries bins 1/3, arm B
/// bins 2/4, with x/y polarized modes as needed.
struct ArmRegistry {
  std::shared_ptr<ModeRegistry> registry;
  SubsystemSelector selector;
  int ax1, ay1, ay3, bx2, by2, by4;
};

ArmRegistry make_arm_registry() {
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, 3.751e14});
  registry->add_bin({2, 3.75e14});
  registry->add_bin({3, 3.7510008e14});
  registry->add_bin({4, 3.7499992e14});
  ArmRegistry out;
  out.ax1 = registry->add_mode({"out", 1, Polarization::X});
  out.ay1 = registry->add_mode({"out", 1, Polarization::Y});
  out.ay3 = registry->add_mode({"out", 3, Polarization::Y});
  out.bx2 = registry->add_mode({"out", 2, Polarization::X});
  out.by2 = registry->add_mode({"out", 2, Polarization::Y});
  out.by4 = registry->add_mode({"out", 4, Polarization::Y});
  out.selector.qubits = {{"A", {out.ax1, out.ay1, out.ay3}, QubitLabeling::Polarization},
                         {"B", {out.bx2, out.by2, out.by4}, QubitLabeling::Polarization}};
  out.registry = registry;
  return out;
}

OccupationVector two_photon(const ArmRegistry& r, int a, int b) {
  OccupationVector occ(static_cast<std::size_t>(r.registry->size()), 0);
  occ[static_cast<std::size_t>(a)] = 1;
  occ[static_cast<std::size_t>(b)] = 1;
  return occ;
}

/// Post-FBS cascade state of the rectifier at interaction angle theta.
PureState rectifier_state(const ArmRegistry& r, double theta, double nu) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::complex<double> phase = std::polar(1.0, nu);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  PureState state(r.registry);
  state.add_term(two_photon(r, r.ax1, r.bx2), inv_sqrt2);
  state.add_term(two_photon(r, r.ay1, r.by4), phase * inv_sqrt2 * (kI * s) * c);
  state.add_term(two_photon(r, r.ay1, r.by2), phase * inv_sqrt2 * (kI * s) * (kI * s));
  state.add_term(two_photon(r, r.ay3, r.by4), phase * inv_sqrt2 * c * c);
  state.add_term(two_photon(r, r.ay3, r.by2), phase * inv_sqrt2 * c * (kI * s));
  return state;
}

} // namespace

TEST_CASE("partial trace of a product state is the pure |xx><xx|") {
  ArmRegistry r = make_arm_registry();
  PureState state = PureState::single_term(r.registry, two_photon(r, r.ax1, r.bx2));
  DensityMatrix rho = partial_trace(state, r.selector);
  CHECK(rho.basis_labels() == std::vector<std::string>{"xx", "xy", "yx", "yy"});
  CHECK(std::abs(rho.entry(0, 0) - 1.0) < 1e-12);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(rho.entry(i, i)) < 1e-12);
}

TEST_CASE("frequency-distinguishable cascade traces to the classical mixture") {
  ArmRegistry r = make_arm_registry();
  // theta = 0 leaves the y photons at their shifted bins.
  DensityMatrix rho = partial_trace(rectifier_state(r, 0.0, 0.7), r.selector);
  CHECK(std::abs(rho.entry(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(rho.entry(3, 3).real() - 0.5) < 1e-12);
  CHECK(std::abs(rho.entry(0, 3)) < 1e-12);
  CHECK(concurrence(rho) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rectified cascade at theta=pi/4 has coherence 1/4 and concurrence 1/2") {
  ArmRegistry r = make_arm_registry();
  DensityMatrix rho = partial_trace(rectifier_state(r, kPi / 4, 0.0), r.selector);
  CHECK(std::abs(std::abs(rho.entry(0, 3)) - 0.25) < 1e-12);
  CHECK(concurrence(rho) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("rectified cascade concurrence follows sin^2(theta)") {
  ArmRegistry r = make_arm_registry();
  for (int i = 0; i <= 20; ++i) {
    const double theta = kPi / 2 * i / 20.0;
    DensityMatrix rho = partial_trace(rectifier_state(r, theta, 1.1), r.selector);
    const double s2 = std::sin(theta) * std::sin(theta);
    CHECK(std::abs(concurrence(rho) - s2) <= 1e-9);
  }
}

TEST_CASE("partial trace names the offending occupation for unclassifiable terms") {
  ArmRegistry r = make_arm_registry();
  PureState state = PureState::single_term(r.registry, two_photon(r, r.ax1, r.ay1)); // both in arm A
  CHECK_THROWS_WITH_AS(partial_trace(state, r.selector),
                       doctest::Contains("[1,1,0,0,0,0]"), EvaluationError);
}

TEST_CASE("concurrence: Bell state exactly 1, classical mixture 0, bounds hold") {
  Eigen::Matrix4cd bell = Eigen::Matrix4cd::Zero();
  bell(0, 0) = 0.5;
  bell(0, 3) = 0.5;
  bell(3, 0) = 0.5;
  bell(3, 3) = 0.5;
  DensityMatrix rho_bell(bell, {"xx", "xy", "yx", "yy"});
  CHECK(std::abs(concurrence(rho_bell) - 1.0) <= 1e-12);

  Eigen::Matrix4cd mixture = Eigen::Matrix4cd::Zero();
  mixture(0, 0) = 0.5;
  mixture(3, 3) = 0.5;
  CHECK(concurrence(DensityMatrix(mixture, {"xx", "xy", "yx", "yy"})) == 0.0);

  std::mt19937_64 rng(4242);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> rank_dist(1, 4);
  for (int iteration = 0; iteration < 200; ++iteration) {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    const int rank = rank_dist(rng);
    for (int k = 0; k < rank; ++k) {
      Eigen::Vector4cd v;
      for (int i = 0; i < 4; ++i) v(i) = std::complex<double>(gauss(rng), gauss(rng));
      v.normalize();
      rho += v * v.adjoint() / static_cast<double>(rank);
    }
    rho = (rho + rho.adjoint().eval()) / 2.0;
    const double c = concurrence(DensityMatrix(rho, {"00", "01", "10", "11"}));
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
}

TEST_CASE("concurrence rejects wrong dimensions") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  CHECK_THROWS_AS(concurrence(DensityMatrix(rho, {"0", "1"})), ValidationError);
}

TEST_CASE("fidelity against pure targets") {
  Eigen::Vector4cd target;
  target << 1.0 / std::sqrt(2.0), 0.0, 0.0, -1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd rho = target * target.adjoint();
  CHECK(fidelity(DensityMatrix(rho, {"xx", "xy", "yx", "yy"}), target) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Eigen::Vector4cd orthogonal;
  orthogonal << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  CHECK(fidelity(DensityMatrix(rho, {"xx", "xy", "yx", "yy"}), orthogonal) ==
        doctest::Approx(0.0).epsilon(1e-12));

  Eigen::VectorXcd wrong(2);
  wrong << 1.0, 0.0;
  CHECK_THROWS_AS(fidelity(DensityMatrix(rho, {"a", "b", "c", "d"}), wrong), ValidationError);
}

TEST_CASE("density matrix invariants are enforced") {
  Eigen::Matrix2cd not_hermitian;
  not_hermitian << 0.5, 0.1, 0.3, 0.5;
  CHECK_THROWS_AS(DensityMatrix(not_hermitian, {"0", "1"}), ValidationError);

  Eigen::Matrix2cd wrong_trace = Eigen::Matrix2cd::Identity();
  CHECK_THROWS_AS(DensityMatrix(wrong_trace, {"0", "1"}), ValidationError);

  Eigen::Matrix2cd negative;
  negative << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityMatrix(negative, {"0", "1"}), ValidationError);
}

TEST_CASE("mixed photon-number sectors require the explicit flag") {
  auto registry = plain_registry(2);
  PureState strict(registry);
  strict.add_term({1, 0}, 1.0 / std::sqrt(2.0));
  strict.add_term({1, 1}, 1.0 / std::sqrt(2.0));
  CHECK_THROWS_AS(strict.validate(), ValidationError);

  PureState flagged(registry, true);
  flagged.add_term({1, 0}, 1.0 / std::sqrt(2.0));
  flagged.add_term({1, 1}, 1.0 / std::sqrt(2.0));
  CHECK_NOTHROW(flagged.validate());
  CHECK(flagged.photon_number() == -1);
}

TEST_CASE("pruning removes sub-floor amplitudes") {
  auto registry = plain_registry(2);
  PureState state(registry);
  state.add_term({1, 0}, 1.0);
  state.add_term({0, 1}, 1e-15);
  state.prune();
  CHECK(state.terms().size() == 1);
}
