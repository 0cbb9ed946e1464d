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

#include "fbsim/scenarios.hpp"

#include <cmath>
#include <complex>

#include "fbsim/errors.hpp"
#include "fbsim/fock.hpp"
#include "fbsim/tolerances.hpp"

namespace fbsim {

namespace {

constexpr std::complex<double> kImaginary{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

struct BellCandidate {
  const char* label;
  std::complex<double> relative_phase; // coefficient of |s2| relative to |s1|
};

const BellCandidate kBellCandidates[] = {
    {"(|s1>+i|s2>)/sqrt2", {0.0, 1.0}},
    {"(|s1>-i|s2>)/sqrt2", {0.0, -1.0}},
    {"(|s1>+|s2>)/sqrt2", {1.0, 0.0}},
    {"(|s1>-|s2>)/sqrt2", {-1.0, 0.0}},
};

} // namespace

void ErasureConfig::validate() const {
  if (omega1_hz <= 0.0 || omega2_hz <= 0.0) {
    throw ValidationError("emitter frequencies must be positive");
  }
  if (omega1_hz == omega2_hz) {
    throw ValidationError("the two emitter frequencies must differ");
  }
}

double ErasureConfig::modulation_frequency_hz() const {
  return std::abs(omega1_hz - omega2_hz);
}

BiexcitonConfig BiexcitonConfig::from_splittings(double base_omega2_hz,
                                                 double doublet_splitting_hz,
                                                 double biexciton_shift_hz) {
  BiexcitonConfig config;
  config.doublet_splitting_hz = doublet_splitting_hz;
  config.biexciton_shift_hz = biexciton_shift_hz;
  config.omega2_hz = base_omega2_hz;
  config.omega1_hz = base_omega2_hz + biexciton_shift_hz;
  config.omega3_hz = config.omega1_hz + doublet_splitting_hz;
  config.omega4_hz = config.omega2_hz - doublet_splitting_hz;
  return config;
}

void BiexcitonConfig::validate() const {
  for (double f : {omega1_hz, omega2_hz, omega3_hz, omega4_hz}) {
    if (f <= 0.0) throw ValidationError("cascade frequencies must be positive");
  }
  if (!(omega3_hz > omega1_hz && omega1_hz > omega2_hz && omega2_hz > omega4_hz)) {
    throw ValidationError("cascade frequencies must satisfy omega3 > omega1 > omega2 > omega4");
  }
  auto check_relation = [](double lhs, double rhs, const char* what) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (std::abs(lhs - rhs) > kFrequencyRelTol * scale) {
      throw ValidationError(std::string("cascade frequency relation violated: ") + what);
    }
  };
  check_relation(omega3_hz, omega1_hz + doublet_splitting_hz, "omega3 = omega1 + doublet splitting");
  check_relation(omega2_hz, omega4_hz + doublet_splitting_hz, "omega2 = omega4 + doublet splitting");
  check_relation(omega1_hz, omega2_hz + biexciton_shift_hz, "omega1 = omega2 + biexciton shift");
  if (shift_efficiency < 0.0 || shift_efficiency > 1.0) {
    throw ValidationError("shift efficiency must lie in [0, 1]");
  }
  if (absorption < 0.0 || absorption >= 1.0) {
    throw ValidationError("absorption must lie in [0, 1)");
  }
  for (double e : {detector_efficiency_u, detector_efficiency_v}) {
    if (e < 0.0 || e > 1.0) throw ValidationError("detector efficiency must lie in [0, 1]");
  }
  for (double d : {detector_dark_u, detector_dark_v}) {
    if (d < 0.0 || d >= 1.0) throw ValidationError("dark count probability must lie in [0, 1)");
  }
}

namespace {

/// Single-excitation erasure setup shared by run_erasure and run_hom: two
/// direction modes whose frequency bins ride the AOM pair coupling.
struct ErasureCircuit {
  std::shared_ptr<const ModeRegistry> registry;
  int marker1 = 0, marker2 = 1, direction1 = 2, direction2 = 3;
  ModeUnitary coupler;
  std::vector<std::string> warnings;
};

ErasureCircuit build_erasure_circuit(const ErasureConfig& config) {
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({0, 1.0}); // emitter-marker bookkeeping bin
  registry->add_bin({1, config.omega1_hz});
  registry->add_bin({2, config.omega2_hz});
  registry->add_mode({"s1", 0, Polarization::None});
  registry->add_mode({"s2", 0, Polarization::None});
  const Mode d1{"d1", 1, Polarization::None};
  const Mode d2{"d2", 2, Polarization::None};
  registry->add_mode(d1);
  registry->add_mode(d2);

  AOMCoupler coupler;
  coupler.pairs = {{d1, d2}};
  coupler.theta = config.theta;
  coupler.modulation_frequency_hz = config.modulation_frequency_hz();
  coupler.convention = config.convention;

  std::vector<std::string> warnings;
  ModeUnitary u = fbs_unitary(coupler, *registry, &warnings);
  return ErasureCircuit{registry, 0, 1, 2, 3, std::move(u), std::move(warnings)};
}

ModeNamer erasure_namer() {
  return [](int index) {
    static const char* names[] = {"s1", "s2", "d1", "d2"};
    return std::string(names[index]);
  };
}

} // namespace

ScenarioResult run_erasure(const ErasureConfig& config) {
  config.validate();
  ErasureCircuit circuit = build_erasure_circuit(config);
  const auto& registry = circuit.registry;

  // (|s1>|photon at omega1> + |s2>|photon at omega2>)/sqrt2, markers riding
  // along as occupation of the source modes.
  PureState input(registry);
  input.add_term({1, 0, 1, 0}, kInvSqrt2);
  input.add_term({0, 1, 0, 1}, kInvSqrt2);

  PureState evolved = apply_mode_unitary(input, circuit.coupler);

  ScenarioResult result;
  result.warnings = circuit.warnings;
  const OccupationVector from_s1 = {1, 0, 0, 0};
  const OccupationVector from_s2 = {0, 1, 0, 0};

  SubsystemSelector emitters;
  emitters.qubits = {{"s1", {circuit.marker1}, QubitLabeling::Occupation},
                     {"s2", {circuit.marker2}, QubitLabeling::Occupation}};

  double total_click_probability = 0.0;
  bool first_outcome = true;
  for (const auto& [direction, mode] :
       {std::pair<const char*, int>{"d1", circuit.direction1}, {"d2", circuit.direction2}}) {
    DetectionResult detection =
        condition_on_detection(evolved, {mode}, config.frequency_blind, erasure_namer());
    for (const auto& outcome : detection.clicks) {
      total_click_probability += outcome.probability;
      const PureState& post = outcome.pure_state();
      const double p_s1 = std::norm(post.amplitude(from_s1));
      const double p_s2 = std::norm(post.amplitude(from_s2));
      const double distinguishability = std::abs(p_s1 - p_s2);

      double best_fidelity = -1.0;
      const char* best_label = "";
      for (const auto& candidate : kBellCandidates) {
        PureState bell(registry);
        bell.add_term(from_s1, kInvSqrt2);
        bell.add_term(from_s2, candidate.relative_phase * kInvSqrt2);
        const double f = std::norm(inner_product(bell, post));
        if (f > best_fidelity + 1e-15) {
          best_fidelity = f;
          best_label = candidate.label;
        }
      }

      ScenarioResult::OutcomeRow row;
      row.label = std::string("click:") + direction;
      row.probability = outcome.probability;
      row.values["p_source1"] = p_s1;
      row.values["p_source2"] = p_s2;
      row.values["distinguishability"] = distinguishability;
      row.values["bell_fidelity"] = best_fidelity;
      row.note = std::string("nearest Bell state ") + best_label;
      result.outcomes.push_back(std::move(row));

      if (first_outcome) {
        first_outcome = false;
        result.which_way_distinguishability = distinguishability;
        result.fidelity_to_target = best_fidelity;
        result.concurrence = concurrence(partial_trace(post, emitters));
        result.conditioned_density = partial_trace(post, emitters);
      }
    }
  }
  result.success_probability = total_click_probability;
  return result;
}

ScenarioResult run_hom(const ErasureConfig& config) {
  config.validate();
  ErasureCircuit circuit = build_erasure_circuit(config);
  const auto& registry = circuit.registry;

  // One photon from each source; markers are irrelevant here.
  PureState input(registry);
  input.add_term({0, 0, 1, 1}, 1.0);
  PureState evolved = apply_mode_unitary(input, circuit.coupler);

  DetectionResult detection = condition_on_detection(
      evolved, {circuit.direction1, circuit.direction2}, false, erasure_namer());

  ScenarioResult result;
  result.warnings = circuit.warnings;
  double coincidence = 0.0;
  for (const auto& outcome : detection.clicks) {
    ScenarioResult::OutcomeRow row;
    row.label = outcome.label;
    row.probability = outcome.probability;
    result.outcomes.push_back(std::move(row));
    if (outcome.label == "d1:1+d2:1") coincidence = outcome.probability;
  }
  if (detection.no_click.probability > 0.0) {
    result.outcomes.push_back({"none", detection.no_click.probability, {}, ""});
  }
  result.success_probability = detection.total_probability() - detection.no_click.probability;
  result.extra["coincidence"] = coincidence;
  result.extra["bunching"] = 1.0 - coincidence;
  return result;
}

namespace {

Eigen::VectorXcd rectified_target(double nu) {
  Eigen::VectorXcd target(4);
  target.setZero();
  target(0) = kInvSqrt2;
  target(3) = std::polar(1.0, nu + M_PI) * kInvSqrt2;
  return target;
}

} // namespace

ScenarioResult run_biexciton_fbs(const BiexcitonConfig& config) {
  config.validate();
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, config.omega1_hz});
  registry->add_bin({2, config.omega2_hz});
  registry->add_bin({3, config.omega3_hz});
  registry->add_bin({4, config.omega4_hz});
  // Cascade input, polarizing split, FBS on the y arm, recombination.
  for (auto [bin, pol] : {std::pair<int, Polarization>{1, Polarization::X},
                          {2, Polarization::X},
                          {3, Polarization::Y},
                          {4, Polarization::Y}}) {
    registry->add_mode({"in", bin, pol});
  }
  registry->add_mode({"top", 1, Polarization::X});
  registry->add_mode({"top", 2, Polarization::X});
  for (int bin : {1, 2, 3, 4}) registry->add_mode({"bot", bin, Polarization::Y});
  registry->add_mode({"out", 1, Polarization::X});
  registry->add_mode({"out", 2, Polarization::X});
  for (int bin : {1, 2, 3, 4}) registry->add_mode({"out", bin, Polarization::Y});

  PureState input(registry);
  {
    OccupationVector xx(static_cast<std::size_t>(registry->size()), 0);
    xx[static_cast<std::size_t>(registry->require_index({"in", 1, Polarization::X}))] = 1;
    xx[static_cast<std::size_t>(registry->require_index({"in", 2, Polarization::X}))] = 1;
    input.add_term(xx, kInvSqrt2);
    OccupationVector yy(static_cast<std::size_t>(registry->size()), 0);
    yy[static_cast<std::size_t>(registry->require_index({"in", 3, Polarization::Y}))] = 1;
    yy[static_cast<std::size_t>(registry->require_index({"in", 4, Polarization::Y}))] = 1;
    input.add_term(yy, std::polar(1.0, config.nu) * kInvSqrt2);
  }

  ScenarioResult result;

  PolarizingBeamSplitter split{"in", "top", "bot"};
  AOMCoupler coupler;
  coupler.pairs = {{Mode{"bot", 3, Polarization::Y}, Mode{"bot", 1, Polarization::Y}},
                   {Mode{"bot", 4, Polarization::Y}, Mode{"bot", 2, Polarization::Y}}};
  coupler.theta = config.theta;
  coupler.modulation_frequency_hz = config.doublet_splitting_hz;
  FrequencyDemux recombine;
  for (int bin : {1, 2}) recombine.routes.push_back({"top", bin, "out"});
  for (int bin : {1, 2, 3, 4}) recombine.routes.push_back({"bot", bin, "out"});

  PureState state = input;
  for (const ComponentSpec& spec :
       std::vector<ComponentSpec>{split, coupler, recombine}) {
    CompiledComponent compiled = compile_component(spec, *registry);
    for (auto& w : compiled.warnings) result.warnings.push_back(std::move(w));
    state = apply_mode_unitary(state, *compiled.unitary);
  }

  SubsystemSelector arms;
  arms.qubits = {{"A",
                  {registry->require_index({"out", 1, Polarization::X}),
                   registry->require_index({"out", 1, Polarization::Y}),
                   registry->require_index({"out", 3, Polarization::Y})},
                  QubitLabeling::Polarization},
                 {"B",
                  {registry->require_index({"out", 2, Polarization::X}),
                   registry->require_index({"out", 2, Polarization::Y}),
                   registry->require_index({"out", 4, Polarization::Y})},
                  QubitLabeling::Polarization}};

  DensityMatrix rho = partial_trace(state, arms);
  result.concurrence = concurrence(rho);
  result.fidelity_to_target = fidelity(rho, rectified_target(config.nu));
  result.success_probability = 1.0;
  result.extra["xx_yy_coherence_magnitude"] = std::abs(rho.entry(0, 3));
  for (int i = 0; i < 4; ++i) {
    ScenarioResult::OutcomeRow row;
    row.label = "population:" + rho.basis_labels()[static_cast<std::size_t>(i)];
    row.probability = rho.entry(i, i).real();
    result.outcomes.push_back(std::move(row));
  }
  result.conditioned_density = std::move(rho);
  return result;
}

ScenarioResult run_biexciton_fbs_prime(const BiexcitonConfig& config) {
  config.validate();
  const double alpha = config.shift_efficiency;
  const double transmission = 1.0 - config.absorption;
  const double theta_shift = std::asin(std::sqrt(alpha));

  // The two cascade photons traverse the AOM as two independent single-pair
  // shifters; unshifted light stays in the input bin and is watched by the
  // heralds. Absorption is dilated onto explicit environment modes.
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({1, config.omega1_hz});
  registry->add_bin({2, config.omega2_hz});
  registry->add_bin({3, config.omega3_hz});
  registry->add_bin({4, config.omega4_hz});
  const Mode arm_a_in{"armA", 3, Polarization::Y};
  const Mode arm_a_out{"armA", 1, Polarization::Y};
  const Mode arm_b_in{"armB", 4, Polarization::Y};
  const Mode arm_b_out{"armB", 2, Polarization::Y};
  for (const Mode& mode : {arm_a_in, arm_a_out, arm_b_in, arm_b_out}) {
    registry->add_mode(mode);
  }
  LossChannel loss{{arm_a_in, arm_a_out, arm_b_in, arm_b_out}, transmission};
  register_loss_environment(loss, 0, *registry);

  ScenarioResult result;

  PureState input(registry);
  {
    OccupationVector occ(static_cast<std::size_t>(registry->size()), 0);
    occ[static_cast<std::size_t>(registry->require_index(arm_a_in))] = 1;
    occ[static_cast<std::size_t>(registry->require_index(arm_b_in))] = 1;
    input.add_term(occ, 1.0);
  }

  AOMCoupler pass_a;
  pass_a.pairs = {{arm_a_in, arm_a_out}};
  pass_a.theta = theta_shift;
  pass_a.modulation_frequency_hz = config.doublet_splitting_hz;
  AOMCoupler pass_b = pass_a;
  pass_b.pairs = {{arm_b_in, arm_b_out}};

  PureState state = input;
  for (const ComponentSpec& spec : std::vector<ComponentSpec>{pass_a, pass_b}) {
    CompiledComponent compiled = compile_component(spec, *registry);
    for (auto& w : compiled.warnings) result.warnings.push_back(std::move(w));
    state = apply_mode_unitary(state, *compiled.unitary);
  }
  state = apply_mode_unitary(state, *compile_component(loss, *registry, 0).unitary);

  DetectionPlan plan_u{"U", {registry->require_index(arm_a_in)}, config.detector_efficiency_u,
                       config.detector_dark_u};
  DetectionPlan plan_v{"V", {registry->require_index(arm_b_in)}, config.detector_efficiency_v,
                       config.detector_dark_v};

  // Joint herald statistics per term: the detectors respond independently
  // given the photon configuration.
  const double miss_u = 1.0 - plan_u.efficiency;
  const double miss_v = 1.0 - plan_v.efficiency;
  double p_nc_nc = 0.0, p_nc_u = 0.0, p_nc_v = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    const double w = std::norm(amp);
    const double quiet_u =
        (1.0 - plan_u.dark_count_probability) *
        std::pow(miss_u, occ[static_cast<std::size_t>(plan_u.watched.front())]);
    const double quiet_v =
        (1.0 - plan_v.dark_count_probability) *
        std::pow(miss_v, occ[static_cast<std::size_t>(plan_v.watched.front())]);
    p_nc_u += w * quiet_u;
    p_nc_v += w * quiet_v;
    p_nc_nc += w * quiet_u * quiet_v;
  }

  // Success: no clicks and both photons actually in the shifted output modes.
  OccupationVector success_occ(static_cast<std::size_t>(registry->size()), 0);
  success_occ[static_cast<std::size_t>(registry->require_index(arm_a_out))] = 1;
  success_occ[static_cast<std::size_t>(registry->require_index(arm_b_out))] = 1;
  const std::complex<double> success_amplitude = state.amplitude(success_occ);
  const double success = std::norm(success_amplitude) *
                         (1.0 - config.detector_dark_u) * (1.0 - config.detector_dark_v);

  result.success_probability = success;
  result.outcomes.push_back({"success", success, {}, "no clicks, both photons frequency shifted"});
  result.outcomes.push_back(
      {"no_click_photon_lost", p_nc_nc - success, {}, "no clicks but absorption or missed photon"});
  result.outcomes.push_back({"click_u_only", p_nc_v - p_nc_nc, {}, ""});
  result.outcomes.push_back({"click_v_only", p_nc_u - p_nc_nc, {}, ""});
  result.outcomes.push_back(
      {"click_both", 1.0 - p_nc_u - p_nc_v + p_nc_nc, {}, "any click heralds a failure"});

  if (config.absorption <= 0.05) {
    const double bound = 0.95 * 0.95 * alpha * alpha;
    result.extra["success_lower_bound"] = bound;
    result.extra["success_bound_satisfied"] = success >= bound ? 1.0 : 0.0;
  }

  if (success > 0.0) {
    // Success-conditioned rectified state: both branches survive the herald,
    // the yy branch carries the success amplitude's phase (i*i = -1).
    const std::complex<double> phase = success_amplitude / std::abs(success_amplitude);
    auto report = std::make_shared<ModeRegistry>(4);
    report->add_bin({1, config.omega1_hz});
    report->add_bin({2, config.omega2_hz});
    report->add_mode({"out", 1, Polarization::X});
    report->add_mode({"out", 2, Polarization::X});
    report->add_mode({"out", 1, Polarization::Y});
    report->add_mode({"out", 2, Polarization::Y});
    PureState rectified(report);
    rectified.add_term({1, 1, 0, 0}, kInvSqrt2);
    rectified.add_term({0, 0, 1, 1}, std::polar(1.0, config.nu) * phase * kInvSqrt2);

    SubsystemSelector arms;
    arms.qubits = {{"A", {0, 2}, QubitLabeling::Polarization},
                   {"B", {1, 3}, QubitLabeling::Polarization}};
    DensityMatrix rho = partial_trace(rectified, arms);
    result.concurrence = concurrence(rho);
    result.fidelity_to_target = fidelity(rho, rectified_target(config.nu));
    result.conditioned_density = std::move(rho);
  }
  return result;
}

} // namespace fbsim
