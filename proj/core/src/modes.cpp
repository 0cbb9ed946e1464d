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

#include "fbsim/modes.hpp"

namespace fbsim {

std::string to_string(Polarization p) {
  switch (p) {
    case Polarization::None: return "none";
    case Polarization::X: return "x";
    case Polarization::Y: return "y";
  }
  return "none";
}

Polarization polarization_from_string(std::string_view s) {
  if (s == "none") return Polarization::None;
  if (s == "x") return Polarization::X;
  if (s == "y") return Polarization::Y;
  throw ValidationError("unknown polarization '" + std::string(s) + "' (expected none, x, or y)");
}

std::string Mode::label() const {
  std::string out = path + "@" + std::to_string(bin_id);
  if (polarization != Polarization::None) {
    out += "/" + to_string(polarization);
  }
  return out;
}

ModeRegistry::ModeRegistry(int max_photons) : max_photons_(max_photons) {
  if (max_photons < 1) {
    throw ValidationError("registry maximum photon number must be at least 1");
  }
}

void ModeRegistry::add_bin(const FrequencyBin& bin) {
  if (bin.center_frequency_hz <= 0.0) {
    throw ValidationError("bin " + std::to_string(bin.id) + ": center frequency must be positive");
  }
  if (bins_.count(bin.id) != 0) {
    throw ValidationError("duplicate frequency bin id " + std::to_string(bin.id));
  }
  bins_[bin.id] = bin;
}

int ModeRegistry::add_mode(const Mode& mode) {
  if (bins_.count(mode.bin_id) == 0) {
    throw ValidationError("mode " + mode.label() + ": unknown frequency bin " +
                          std::to_string(mode.bin_id));
  }
  auto [it, inserted] = index_.emplace(key_of(mode), size());
  if (!inserted) {
    throw ValidationError("duplicate mode " + mode.label());
  }
  modes_.push_back(mode);
  return it->second;
}

bool ModeRegistry::has_bin(int id) const { return bins_.count(id) != 0; }

const FrequencyBin& ModeRegistry::bin(int id) const {
  auto it = bins_.find(id);
  if (it == bins_.end()) {
    throw ValidationError("unknown frequency bin " + std::to_string(id));
  }
  return it->second;
}

const Mode& ModeRegistry::mode(int index) const {
  if (index < 0 || index >= size()) {
    throw ValidationError("mode index " + std::to_string(index) + " out of range");
  }
  return modes_[static_cast<std::size_t>(index)];
}

double ModeRegistry::mode_frequency_hz(int index) const {
  return bin(mode(index).bin_id).center_frequency_hz;
}

int ModeRegistry::index_of(const Mode& mode) const {
  auto it = index_.find(key_of(mode));
  return it == index_.end() ? -1 : it->second;
}

int ModeRegistry::require_index(const Mode& mode) const {
  int idx = index_of(mode);
  if (idx < 0) {
    throw ValidationError("mode " + mode.label() + " is not registered");
  }
  return idx;
}

std::vector<int> ModeRegistry::modes_on_path(const std::string& path) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (modes_[static_cast<std::size_t>(i)].path == path) out.push_back(i);
  }
  return out;
}

ModeRegistry::Key ModeRegistry::key_of(const Mode& mode) {
  return {mode.path, mode.bin_id, static_cast<int>(mode.polarization)};
}

} // namespace fbsim
