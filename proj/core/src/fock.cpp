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

#include "fbsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fbsim/errors.hpp"

namespace fbsim {

namespace {

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

double sqrt_factorial_product(const OccupationVector& occ) {
  double out = 1.0;
  for (int n : occ) out *= factorial(n);
  return std::sqrt(out);
}

std::string default_mode_name(const ModeRegistry& registry, int index) {
  return registry.mode(index).label();
}

} // namespace

PureState apply_mode_unitary(const PureState& state, const ModeUnitary& u) {
  const auto& registry = state.registry();
  if (u.dimension() != registry->size()) {
    throw ValidationError("unitary dimension " + std::to_string(u.dimension()) +
                          " does not match registry size " + std::to_string(registry->size()));
  }
  const int n_modes = registry->size();
  const auto& m = u.matrix();

  PureState out(registry, state.allow_mixed_sectors());
  const OccupationVector vacuum(static_cast<std::size_t>(n_modes), 0);

  for (const auto& [occ, amp] : state.terms()) {
    // One creation operator at a time: multiply the running polynomial by
    // (sum_j U(j,k) a†_j) for each photon in input mode k.
    std::map<OccupationVector, std::complex<double>> poly;
    poly.emplace(vacuum, amp / sqrt_factorial_product(occ));
    for (int k = 0; k < n_modes; ++k) {
      for (int photon = 0; photon < occ[static_cast<std::size_t>(k)]; ++photon) {
        std::map<OccupationVector, std::complex<double>> next;
        for (const auto& [partial, coeff] : poly) {
          for (int j = 0; j < n_modes; ++j) {
            const std::complex<double> u_jk = m(j, k);
            if (u_jk == std::complex<double>(0.0, 0.0)) continue;
            OccupationVector grown = partial;
            ++grown[static_cast<std::size_t>(j)];
            auto [it, inserted] = next.emplace(std::move(grown), coeff * u_jk);
            if (!inserted) it->second += coeff * u_jk;
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [result_occ, coeff] : poly) {
      out.add_term(result_occ, coeff * sqrt_factorial_product(result_occ));
    }
  }
  out.prune();
  return out;
}

const PureState& DetectionOutcome::pure_state() const {
  if (!is_pure()) {
    throw EvaluationError("detection outcome '" + label + "' is a mixture, not a pure state");
  }
  return post_components.front().second;
}

DensityMatrix DetectionOutcome::to_density_matrix() const {
  if (post_components.empty()) {
    throw EvaluationError("detection outcome '" + label + "' has no post-state");
  }
  // Basis: the (sorted, deduplicated) occupation support of the mixture.
  std::set<OccupationVector> support;
  for (const auto& [weight, state] : post_components) {
    for (const auto& [occ, amp] : state.terms()) support.insert(occ);
  }
  std::vector<OccupationVector> basis(support.begin(), support.end());
  std::map<OccupationVector, int> position;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    position[basis[i]] = static_cast<int>(i);
    labels.push_back(occupation_to_string(basis[i]));
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis.size()),
                                                static_cast<Eigen::Index>(basis.size()));
  for (const auto& [weight, state] : post_components) {
    for (const auto& [occ_i, amp_i] : state.terms()) {
      for (const auto& [occ_j, amp_j] : state.terms()) {
        rho(position[occ_i], position[occ_j]) += weight * amp_i * std::conj(amp_j);
      }
    }
  }
  return DensityMatrix(std::move(rho), std::move(labels));
}

double DetectionResult::total_probability() const {
  double total = no_click.probability;
  for (const auto& outcome : clicks) total += outcome.probability;
  return total;
}

DetectionResult condition_on_detection(const PureState& state,
                                       const std::vector<int>& detector_modes,
                                       bool frequency_blind,
                                       const ModeNamer& namer) {
  const auto& registry = state.registry();
  if (detector_modes.empty()) {
    throw ValidationError("detector watches no modes");
  }
  if (state.empty()) {
    throw ValidationError("cannot condition an empty state");
  }
  state.validate();
  for (int idx : detector_modes) {
    if (idx < 0 || idx >= registry->size()) {
      throw ValidationError("detector mode index " + std::to_string(idx) + " is not in the registry");
    }
  }
  ModeNamer name = namer ? namer : [&registry](int i) { return default_mode_name(*registry, i); };

  // Group terms by the occupation pattern restricted to the watched modes.
  // A projective detector resolves exactly this pattern; coherence in the
  // remainder survives.
  std::map<OccupationVector, std::vector<std::pair<OccupationVector, std::complex<double>>>> groups;
  for (const auto& [occ, amp] : state.terms()) {
    OccupationVector pattern;
    pattern.reserve(detector_modes.size());
    for (int idx : detector_modes) pattern.push_back(occ[static_cast<std::size_t>(idx)]);
    groups[pattern].emplace_back(occ, amp);
  }

  struct PatternOutcome {
    OccupationVector pattern;
    double probability;
    PureState post;
  };
  std::vector<PatternOutcome> patterns;
  DetectionResult result;
  result.no_click.label = "none";
  result.no_click.probability = 0.0;

  for (const auto& [pattern, terms] : groups) {
    double probability = 0.0;
    for (const auto& [occ, amp] : terms) probability += std::norm(amp);
    PureState post(registry, state.allow_mixed_sectors());
    const double scale = 1.0 / std::sqrt(probability);
    for (const auto& [occ, amp] : terms) {
      OccupationVector remainder = occ;
      for (int idx : detector_modes) remainder[static_cast<std::size_t>(idx)] = 0;
      post.add_term(remainder, amp * scale);
    }
    if (total_photons(pattern) == 0) {
      result.no_click.probability = probability;
      result.no_click.post_components = {{1.0, std::move(post)}};
    } else {
      patterns.push_back({pattern, probability, std::move(post)});
    }
  }

  auto pattern_label = [&](const OccupationVector& pattern) {
    std::string out;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (pattern[i] == 0) continue;
      if (!out.empty()) out += "+";
      out += name(detector_modes[i]) + ":" + std::to_string(pattern[i]);
    }
    return out;
  };

  if (!frequency_blind) {
    for (auto& p : patterns) {
      DetectionOutcome outcome;
      outcome.label = pattern_label(p.pattern);
      outcome.probability = p.probability;
      outcome.post_components = {{1.0, std::move(p.post)}};
      result.clicks.push_back(std::move(outcome));
    }
    return result;
  }

  // Frequency-blind merge: patterns that differ only in the frequency bin of
  // the detected photons collapse into one outcome; the merged post-state is
  // an incoherent mixture (a bin-insensitive detector constitutes a trace).
  auto blind_signature = [&](const OccupationVector& pattern) {
    std::map<std::pair<std::string, Polarization>, int> counts;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (pattern[i] == 0) continue;
      const Mode& mode = registry->mode(detector_modes[i]);
      counts[{mode.path, mode.polarization}] += pattern[i];
    }
    return counts;
  };

  std::map<std::map<std::pair<std::string, Polarization>, int>, std::vector<PatternOutcome>> merged;
  for (auto& p : patterns) merged[blind_signature(p.pattern)].push_back(std::move(p));

  for (auto& [signature, group] : merged) {
    DetectionOutcome outcome;
    std::string label;
    for (const auto& [key, count] : signature) {
      if (!label.empty()) label += "+";
      label += key.first;
      if (key.second != Polarization::None) label += "/" + to_string(key.second);
      label += ":" + std::to_string(count);
    }
    outcome.label = label;
    for (const auto& p : group) outcome.probability += p.probability;
    for (auto& p : group) {
      outcome.post_components.emplace_back(p.probability / outcome.probability, std::move(p.post));
    }
    result.clicks.push_back(std::move(outcome));
  }
  return result;
}

namespace {

const std::vector<std::string>& labels_for(QubitLabeling labeling) {
  static const std::vector<std::string> polarization_labels = {"x", "y"};
  static const std::vector<std::string> occupation_labels = {"0", "1"};
  return labeling == QubitLabeling::Polarization ? polarization_labels : occupation_labels;
}

struct Classified {
  int basis_index = 0;       // row in the product basis
  std::string residual_key;  // frequency/path content traced out
};

Classified classify_term(const OccupationVector& occ, const SubsystemSelector& selector,
                         const ModeRegistry& registry) {
  Classified out;
  OccupationVector leftover = occ;
  for (const auto& qubit : selector.qubits) {
    int label_index = 0;
    if (qubit.labeling == QubitLabeling::Occupation) {
      const int mode = qubit.modes.front();
      const int count = occ[static_cast<std::size_t>(mode)];
      if (count > 1) {
        throw EvaluationError("occupation " + occupation_to_string(occ) + ": qubit '" + qubit.name +
                              "' holds " + std::to_string(count) + " photons, expected 0 or 1");
      }
      label_index = count;
      leftover[static_cast<std::size_t>(mode)] = 0;
    } else {
      int found_mode = -1;
      int found_photons = 0;
      for (int mode : qubit.modes) {
        const int count = occ[static_cast<std::size_t>(mode)];
        if (count > 0) {
          found_photons += count;
          found_mode = mode;
        }
      }
      if (found_photons != 1) {
        throw EvaluationError("occupation " + occupation_to_string(occ) + ": qubit '" + qubit.name +
                              "' holds " + std::to_string(found_photons) + " photons, expected exactly 1");
      }
      const Mode& mode = registry.mode(found_mode);
      switch (mode.polarization) {
        case Polarization::X: label_index = 0; break;
        case Polarization::Y: label_index = 1; break;
        case Polarization::None:
          throw EvaluationError("occupation " + occupation_to_string(occ) + ": qubit '" + qubit.name +
                                "' photon sits in unpolarized mode " + mode.label());
      }
      // The photon's path and bin are not part of the qubit; they belong to
      // the traced environment and gate which terms stay coherent.
      out.residual_key += mode.path + "#" + std::to_string(mode.bin_id) + ";";
      leftover[static_cast<std::size_t>(found_mode)] = 0;
    }
    out.basis_index = out.basis_index * 2 + label_index;
  }
  out.residual_key += "|" + occupation_to_string(leftover);
  return out;
}

void validate_selector(const SubsystemSelector& selector, const ModeRegistry& registry) {
  if (selector.qubits.empty()) {
    throw ValidationError("subsystem selector declares no qubits");
  }
  std::set<int> seen;
  for (const auto& qubit : selector.qubits) {
    if (qubit.modes.empty()) {
      throw ValidationError("qubit '" + qubit.name + "' lists no modes");
    }
    if (qubit.labeling == QubitLabeling::Occupation && qubit.modes.size() != 1) {
      throw ValidationError("occupation-labeled qubit '" + qubit.name + "' must list exactly one mode");
    }
    for (int mode : qubit.modes) {
      if (mode < 0 || mode >= registry.size()) {
        throw ValidationError("qubit '" + qubit.name + "' references mode index " +
                              std::to_string(mode) + " outside the registry");
      }
      if (!seen.insert(mode).second) {
        throw ValidationError("mode index " + std::to_string(mode) + " appears in two qubits");
      }
    }
  }
}

std::vector<std::string> product_basis(const SubsystemSelector& selector) {
  std::vector<std::string> labels = {""};
  for (const auto& qubit : selector.qubits) {
    std::vector<std::string> next;
    for (const auto& prefix : labels) {
      for (const auto& l : labels_for(qubit.labeling)) next.push_back(prefix + l);
    }
    labels = std::move(next);
  }
  return labels;
}

void accumulate_partial_trace(Eigen::MatrixXcd& rho, const PureState& state, double weight,
                              const SubsystemSelector& selector) {
  const ModeRegistry& registry = *state.registry();
  std::vector<std::pair<Classified, std::complex<double>>> classified;
  classified.reserve(state.terms().size());
  for (const auto& [occ, amp] : state.terms()) {
    classified.emplace_back(classify_term(occ, selector, registry), amp);
  }
  for (const auto& [ci, ai] : classified) {
    for (const auto& [cj, aj] : classified) {
      if (ci.residual_key != cj.residual_key) continue;
      rho(ci.basis_index, cj.basis_index) += weight * ai * std::conj(aj);
    }
  }
}

} // namespace

DensityMatrix partial_trace(const PureState& state, const SubsystemSelector& selector) {
  return partial_trace(StateMixture{{1.0, state}}, selector);
}

DensityMatrix partial_trace(const StateMixture& mixture, const SubsystemSelector& selector) {
  if (mixture.empty()) {
    throw ValidationError("partial trace of an empty mixture");
  }
  validate_selector(selector, *mixture.front().second.registry());
  std::vector<std::string> labels = product_basis(selector);
  const auto dim = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [weight, state] : mixture) {
    accumulate_partial_trace(rho, state, weight, selector);
  }
  return DensityMatrix(std::move(rho), std::move(labels));
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dimension() != 4) {
    throw ValidationError("concurrence requires a two-qubit (4x4) density matrix, got dimension " +
                          std::to_string(rho.dimension()));
  }
  Eigen::Matrix4cd sysy = Eigen::Matrix4cd::Zero();
  sysy(0, 3) = -1.0;
  sysy(1, 2) = 1.0;
  sysy(2, 1) = 1.0;
  sysy(3, 0) = -1.0;
  // The lambda_i are the square roots of the eigenvalues of rho*rho~, which
  // equal the singular values of sqrt(rho)*(sy x sy)*conj(sqrt(rho)). The
  // SVD route stays accurate for near-pure states where the non-Hermitian
  // eigenproblem is defective.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.matrix());
  if (es.info() != Eigen::Success) {
    throw EvaluationError("concurrence eigenvalue computation failed");
  }
  Eigen::Vector4d d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd sqrt_rho =
      es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::Matrix4cd a = sqrt_rho * sysy * sqrt_rho.conjugate();
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(a);
  const Eigen::Vector4d lambdas = svd.singularValues(); // descending
  const double c = lambdas(0) - lambdas(1) - lambdas(2) - lambdas(3);
  return std::clamp(c, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& target) {
  if (target.size() != rho.dimension()) {
    throw ValidationError("fidelity target dimension " + std::to_string(target.size()) +
                          " does not match density matrix dimension " +
                          std::to_string(rho.dimension()));
  }
  const double target_norm = target.norm();
  if (std::abs(target_norm - 1.0) > kNormTol) {
    throw ValidationError("fidelity target is not normalized");
  }
  const std::complex<double> value = target.adjoint() * rho.matrix() * target;
  return std::clamp(value.real(), 0.0, 1.0);
}

} // namespace fbsim
