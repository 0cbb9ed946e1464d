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

#include "fbsim/components.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fbsim/errors.hpp"
#include "fbsim/tolerances.hpp"

namespace fbsim {

namespace {

constexpr std::complex<double> kImaginary{0.0, 1.0};

std::string format_hz(double hz) {
  std::ostringstream out;
  out.precision(12);
  out << hz;
  return out.str();
}

/// Shared builder for all pair-coupling components: identity plus 2x2 blocks
/// on disjoint index pairs.
class PairBlockBuilder {
 public:
  explicit PairBlockBuilder(int dimension)
      : matrix_(Eigen::MatrixXcd::Identity(dimension, dimension)) {}

  void add_rotation(int a, int b, double theta, CouplingConvention convention) {
    claim(a);
    claim(b);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    matrix_(a, a) = c;
    matrix_(b, b) = c;
    if (convention == CouplingConvention::ImaginaryCross) {
      matrix_(a, b) = kImaginary * s;
      matrix_(b, a) = kImaginary * s;
    } else {
      matrix_(a, b) = s;
      matrix_(b, a) = -s;
    }
  }

  void add_swap(int a, int b) {
    if (a == b) return;
    claim(a);
    claim(b);
    matrix_(a, a) = 0.0;
    matrix_(b, b) = 0.0;
    matrix_(a, b) = 1.0;
    matrix_(b, a) = 1.0;
  }

  void add_loss(int target, int environment, double transmission) {
    claim(target);
    claim(environment);
    const double t = std::sqrt(transmission);
    const double r = std::sqrt(1.0 - transmission);
    matrix_(target, target) = t;
    matrix_(environment, environment) = t;
    matrix_(target, environment) = kImaginary * r;
    matrix_(environment, target) = kImaginary * r;
  }

  bool touches(int index) const { return used_.count(index) != 0; }
  std::vector<int> touched() const { return {used_.begin(), used_.end()}; }

  ModeUnitary build() const { return ModeUnitary::from_matrix(matrix_); }

 private:
  void claim(int index) {
    if (!used_.insert(index).second) {
      throw ValidationError("mode index " + std::to_string(index) +
                            " is coupled twice by one component");
    }
  }

  Eigen::MatrixXcd matrix_;
  std::set<int> used_;
};

} // namespace

ModeUnitary fbs_unitary(const AOMCoupler& coupler, const ModeRegistry& registry,
                        std::vector<std::string>* warnings) {
  if (coupler.pairs.empty()) {
    throw ValidationError("aom coupler declares no mode pairs");
  }
  if (coupler.modulation_frequency_hz <= 0.0) {
    throw ValidationError("aom modulation frequency must be positive");
  }
  if (warnings != nullptr && coupler.modulation_frequency_hz > kModulationWarningHz) {
    warnings->push_back("aom modulation frequency " + format_hz(coupler.modulation_frequency_hz) +
                        " Hz exceeds the " + format_hz(kModulationWarningHz) +
                        " Hz feasibility threshold");
  }
  PairBlockBuilder builder(registry.size());
  for (const auto& [mode_a, mode_b] : coupler.pairs) {
    const int a = registry.require_index(mode_a);
    const int b = registry.require_index(mode_b);
    const double gap = std::abs(registry.mode_frequency_hz(a) - registry.mode_frequency_hz(b));
    const double mismatch = std::abs(gap - coupler.modulation_frequency_hz);
    if (mismatch > kFrequencyRelTol * coupler.modulation_frequency_hz) {
      throw ValidationError("aom pair (" + mode_a.label() + ", " + mode_b.label() +
                            ") has frequency gap " + format_hz(gap) +
                            " Hz but the drive is " + format_hz(coupler.modulation_frequency_hz) +
                            " Hz");
    }
    builder.add_rotation(a, b, coupler.theta, coupler.convention);
  }
  return builder.build();
}

std::string loss_environment_path(int component_index, const std::string& target_path) {
  return "@env" + std::to_string(component_index) + "/" + target_path;
}

void register_loss_environment(const LossChannel& loss, int component_index,
                               ModeRegistry& registry) {
  for (const auto& target : loss.targets) {
    registry.require_index(target);
    registry.add_mode(Mode{loss_environment_path(component_index, target.path), target.bin_id,
                           target.polarization});
  }
}

namespace {

CompiledComponent compile_aom(const AOMCoupler& coupler, const ModeRegistry& registry) {
  CompiledComponent out;
  out.unitary = fbs_unitary(coupler, registry, &out.warnings);
  for (const auto& [a, b] : coupler.pairs) {
    out.touched_modes.push_back(registry.require_index(a));
    out.touched_modes.push_back(registry.require_index(b));
  }
  return out;
}

CompiledComponent compile_spatial_bs(const SpatialBeamSplitter& bs, const ModeRegistry& registry) {
  if (bs.path_a == bs.path_b) {
    throw ValidationError("spatial beam splitter requires two distinct paths");
  }
  PairBlockBuilder builder(registry.size());
  const std::vector<int> on_a = registry.modes_on_path(bs.path_a);
  const std::vector<int> on_b = registry.modes_on_path(bs.path_b);
  if (on_a.empty() || on_b.empty()) {
    throw ValidationError("spatial beam splitter path '" + (on_a.empty() ? bs.path_a : bs.path_b) +
                          "' has no registered modes");
  }
  for (int a : on_a) {
    const Mode& mode_a = registry.mode(a);
    const int b = registry.index_of(Mode{bs.path_b, mode_a.bin_id, mode_a.polarization});
    if (b < 0) {
      throw ValidationError("spatial beam splitter: mode " + mode_a.label() +
                            " has no partner on path '" + bs.path_b + "'");
    }
    builder.add_rotation(a, b, bs.mixing_angle, CouplingConvention::ImaginaryCross);
  }
  for (int b : on_b) {
    if (!builder.touches(b)) {
      throw ValidationError("spatial beam splitter: mode " + registry.mode(b).label() +
                            " has no partner on path '" + bs.path_a + "'");
    }
  }
  CompiledComponent out;
  out.touched_modes = builder.touched();
  out.unitary = builder.build();
  return out;
}

CompiledComponent compile_pbs(const PolarizingBeamSplitter& pbs, const ModeRegistry& registry) {
  if (pbs.transmit_path == pbs.reflect_path) {
    throw ValidationError("polarizing beam splitter transmit and reflect paths must differ");
  }
  const std::vector<int> inputs = registry.modes_on_path(pbs.input_path);
  if (inputs.empty()) {
    throw ValidationError("polarizing beam splitter input path '" + pbs.input_path +
                          "' has no registered modes");
  }
  PairBlockBuilder builder(registry.size());
  for (int idx : inputs) {
    const Mode& mode = registry.mode(idx);
    if (mode.polarization == Polarization::None) {
      throw ValidationError("polarizing beam splitter cannot route unpolarized mode " + mode.label());
    }
    const std::string& out_path =
        mode.polarization == Polarization::X ? pbs.transmit_path : pbs.reflect_path;
    const int target = registry.index_of(Mode{out_path, mode.bin_id, mode.polarization});
    if (target < 0) {
      throw ValidationError("polarizing beam splitter output mode (" + out_path + ", bin " +
                            std::to_string(mode.bin_id) + ", " + to_string(mode.polarization) +
                            ") is not registered");
    }
    builder.add_swap(idx, target);
  }
  CompiledComponent out;
  out.touched_modes = builder.touched();
  out.unitary = builder.build();
  return out;
}

CompiledComponent compile_demux(const FrequencyDemux& demux, const ModeRegistry& registry) {
  if (demux.routes.empty()) {
    throw ValidationError("frequency demux declares no routes");
  }
  std::set<std::pair<std::string, int>> declared;
  PairBlockBuilder builder(registry.size());
  for (const auto& route : demux.routes) {
    if (!declared.insert({route.input_path, route.bin_id}).second) {
      throw ValidationError("frequency demux declares input (" + route.input_path + ", bin " +
                            std::to_string(route.bin_id) + ") twice");
    }
    bool any = false;
    for (Polarization pol : {Polarization::None, Polarization::X, Polarization::Y}) {
      const int source = registry.index_of(Mode{route.input_path, route.bin_id, pol});
      if (source < 0) continue;
      any = true;
      const int target = registry.index_of(Mode{route.output_path, route.bin_id, pol});
      if (target < 0) {
        throw ValidationError("frequency demux output mode (" + route.output_path + ", bin " +
                              std::to_string(route.bin_id) + ", " + to_string(pol) +
                              ") is not registered");
      }
      builder.add_swap(source, target);
    }
    if (!any) {
      throw ValidationError("frequency demux input (" + route.input_path + ", bin " +
                            std::to_string(route.bin_id) + ") matches no registered mode");
    }
  }
  CompiledComponent out;
  out.touched_modes = builder.touched();
  out.unitary = builder.build();
  return out;
}

CompiledComponent compile_loss(const LossChannel& loss, const ModeRegistry& registry,
                               int component_index) {
  if (loss.transmission < 0.0 || loss.transmission > 1.0) {
    throw ValidationError("loss transmission must lie in [0, 1]");
  }
  if (loss.targets.empty()) {
    throw ValidationError("loss channel declares no target modes");
  }
  PairBlockBuilder builder(registry.size());
  for (const auto& target : loss.targets) {
    const int t = registry.require_index(target);
    const Mode env{loss_environment_path(component_index, target.path), target.bin_id,
                   target.polarization};
    const int e = registry.index_of(env);
    if (e < 0) {
      throw ValidationError("loss environment mode " + env.label() +
                            " is missing; call register_loss_environment first");
    }
    builder.add_loss(t, e, loss.transmission);
  }
  CompiledComponent out;
  out.touched_modes = builder.touched();
  out.unitary = builder.build();
  return out;
}

CompiledComponent compile_herald(const HeraldDetector& detector, const ModeRegistry& registry) {
  if (detector.watched.empty()) {
    throw ValidationError("herald detector '" + detector.name + "' watches no modes");
  }
  if (detector.efficiency < 0.0 || detector.efficiency > 1.0) {
    throw ValidationError("herald detector '" + detector.name + "' efficiency must lie in [0, 1]");
  }
  if (detector.dark_count_probability < 0.0 || detector.dark_count_probability >= 1.0) {
    throw ValidationError("herald detector '" + detector.name +
                          "' dark count probability must lie in [0, 1)");
  }
  DetectionPlan plan;
  plan.name = detector.name;
  plan.efficiency = detector.efficiency;
  plan.dark_count_probability = detector.dark_count_probability;
  std::set<int> seen;
  for (const auto& mode : detector.watched) {
    const int idx = registry.require_index(mode);
    if (!seen.insert(idx).second) {
      throw ValidationError("herald detector '" + detector.name + "' watches mode " + mode.label() +
                            " twice");
    }
    plan.watched.push_back(idx);
  }
  CompiledComponent out;
  out.touched_modes = plan.watched;
  out.plan = std::move(plan);
  return out;
}

} // namespace

CompiledComponent compile_component(const ComponentSpec& spec, const ModeRegistry& registry,
                                    int component_index) {
  return std::visit(
      [&](const auto& component) -> CompiledComponent {
        using T = std::decay_t<decltype(component)>;
        if constexpr (std::is_same_v<T, AOMCoupler>) {
          return compile_aom(component, registry);
        } else if constexpr (std::is_same_v<T, SpatialBeamSplitter>) {
          return compile_spatial_bs(component, registry);
        } else if constexpr (std::is_same_v<T, PolarizingBeamSplitter>) {
          return compile_pbs(component, registry);
        } else if constexpr (std::is_same_v<T, FrequencyDemux>) {
          return compile_demux(component, registry);
        } else if constexpr (std::is_same_v<T, LossChannel>) {
          return compile_loss(component, registry, component_index);
        } else {
          return compile_herald(component, registry);
        }
      },
      spec);
}

std::vector<HeraldOutcome> herald_outcomes(const PureState& state, const DetectionPlan& plan) {
  state.validate();
  const auto& registry = state.registry();
  for (int idx : plan.watched) {
    if (idx < 0 || idx >= registry->size()) {
      throw ValidationError("herald '" + plan.name + "' watches mode index " + std::to_string(idx) +
                            " outside the registry");
    }
  }
  const double miss = 1.0 - plan.efficiency;
  const double dark = plan.dark_count_probability;

  auto watched_photons = [&](const OccupationVector& occ) {
    int total = 0;
    for (int idx : plan.watched) total += occ[static_cast<std::size_t>(idx)];
    return total;
  };

  // No-click branch: Kraus (1-e)^(n/2) per term, times the dark-free factor.
  PureState survived(registry, state.allow_mixed_sectors());
  double survived_weight = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    const double keep = std::pow(miss, watched_photons(occ));
    if (keep <= 0.0) continue;
    survived.add_term(occ, amp * std::sqrt(keep));
    survived_weight += std::norm(amp) * keep;
  }

  HeraldOutcome no_click;
  no_click.label = "no_click";
  no_click.probability = (1.0 - dark) * survived_weight;
  if (survived_weight > 0.0) {
    PureState normalized = survived;
    normalized.normalize();
    no_click.post_components = {{1.0, std::move(normalized)}};
  }

  HeraldOutcome click;
  click.label = "click";
  click.probability = 1.0 - no_click.probability;

  // Photon-detection components, one per watched pattern: the detector
  // absorbs what it sees, and the (unread) photon record decoheres patterns.
  std::map<OccupationVector, std::vector<std::pair<OccupationVector, std::complex<double>>>> groups;
  for (const auto& [occ, amp] : state.terms()) {
    OccupationVector pattern;
    for (int idx : plan.watched) pattern.push_back(occ[static_cast<std::size_t>(idx)]);
    if (total_photons(pattern) == 0) continue;
    groups[pattern].emplace_back(occ, amp);
  }
  StateMixture click_components;
  for (const auto& [pattern, terms] : groups) {
    const double fire = 1.0 - std::pow(miss, total_photons(pattern));
    double group_weight = 0.0;
    for (const auto& [occ, amp] : terms) group_weight += std::norm(amp);
    const double probability = fire * group_weight;
    if (probability <= 0.0) continue;
    PureState post(registry, state.allow_mixed_sectors());
    for (const auto& [occ, amp] : terms) {
      OccupationVector remainder = occ;
      for (int idx : plan.watched) remainder[static_cast<std::size_t>(idx)] = 0;
      post.add_term(remainder, amp / std::sqrt(group_weight));
    }
    click_components.emplace_back(probability, std::move(post));
  }
  // Dark-count component: the state passes through untouched.
  if (dark > 0.0 && survived_weight > 0.0) {
    PureState dark_state = survived;
    dark_state.normalize();
    click_components.emplace_back(dark * survived_weight, std::move(dark_state));
  }
  if (click.probability > 0.0) {
    for (auto& [weight, component] : click_components) weight /= click.probability;
    click.post_components = std::move(click_components);
  }

  return {std::move(click), std::move(no_click)};
}

} // namespace fbsim
