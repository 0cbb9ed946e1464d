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

#include "fbsim/pure_state.hpp"

#include <cmath>

#include "fbsim/errors.hpp"

namespace fbsim {

int total_photons(const OccupationVector& occupation) {
  int total = 0;
  for (int n : occupation) total += n;
  return total;
}

std::string occupation_to_string(const OccupationVector& occupation) {
  std::string out = "[";
  for (std::size_t i = 0; i < occupation.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(occupation[i]);
  }
  out += "]";
  return out;
}

PureState::PureState(std::shared_ptr<const ModeRegistry> registry, bool allow_mixed_sectors)
    : registry_(std::move(registry)), allow_mixed_sectors_(allow_mixed_sectors) {
  if (!registry_) {
    throw ValidationError("pure state requires a registry");
  }
}

PureState PureState::single_term(std::shared_ptr<const ModeRegistry> registry,
                                 const OccupationVector& occupation,
                                 std::complex<double> amplitude) {
  PureState state(std::move(registry));
  state.add_term(occupation, amplitude);
  return state;
}

void PureState::add_term(const OccupationVector& occupation, std::complex<double> amplitude) {
  if (static_cast<int>(occupation.size()) != registry_->size()) {
    throw ValidationError("occupation length " + std::to_string(occupation.size()) +
                          " does not match registry size " + std::to_string(registry_->size()));
  }
  for (int n : occupation) {
    if (n < 0) throw ValidationError("negative photon count in " + occupation_to_string(occupation));
  }
  if (total_photons(occupation) > registry_->max_photons()) {
    throw ValidationError("occupation " + occupation_to_string(occupation) + " exceeds the maximum of " +
                          std::to_string(registry_->max_photons()) + " photons");
  }
  auto [it, inserted] = terms_.emplace(occupation, amplitude);
  if (!inserted) it->second += amplitude;
}

std::complex<double> PureState::amplitude(const OccupationVector& occupation) const {
  auto it = terms_.find(occupation);
  return it == terms_.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

double PureState::squared_norm() const {
  double total = 0.0;
  for (const auto& [occ, amp] : terms_) total += std::norm(amp);
  return total;
}

double PureState::norm() const { return std::sqrt(squared_norm()); }

void PureState::normalize() {
  double n = norm();
  if (n <= 0.0) {
    throw EvaluationError("cannot normalize a zero state");
  }
  for (auto& [occ, amp] : terms_) amp /= n;
}

void PureState::prune(double floor) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < floor) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

void PureState::validate() const {
  if (std::abs(squared_norm() - 1.0) > kNormTol) {
    throw ValidationError("state is not normalized: |psi|^2 = " + std::to_string(squared_norm()));
  }
  if (!allow_mixed_sectors_ && !terms_.empty()) {
    int sector = total_photons(terms_.begin()->first);
    for (const auto& [occ, amp] : terms_) {
      if (total_photons(occ) != sector) {
        throw ValidationError("terms span several photon-number sectors (" +
                              occupation_to_string(terms_.begin()->first) + " vs " +
                              occupation_to_string(occ) +
                              "); construct the state with allow_mixed_sectors to permit this");
      }
    }
  }
}

int PureState::photon_number() const {
  if (terms_.empty()) return 0;
  int sector = total_photons(terms_.begin()->first);
  for (const auto& [occ, amp] : terms_) {
    if (total_photons(occ) != sector) return -1;
  }
  return sector;
}

std::complex<double> inner_product(const PureState& a, const PureState& b) {
  if (a.registry() != b.registry()) {
    throw ValidationError("inner product requires states over the same registry");
  }
  std::complex<double> total = 0.0;
  const auto& smaller = a.terms().size() <= b.terms().size() ? a : b;
  const auto& larger = a.terms().size() <= b.terms().size() ? b : a;
  for (const auto& [occ, amp] : smaller.terms()) {
    auto it = larger.terms().find(occ);
    if (it == larger.terms().end()) continue;
    // conj always applies to the bra side, i.e. to a.
    if (&smaller == &a) {
      total += std::conj(amp) * it->second;
    } else {
      total += std::conj(it->second) * amp;
    }
  }
  return total;
}

} // namespace fbsim
