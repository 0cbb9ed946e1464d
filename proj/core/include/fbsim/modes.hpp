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

#ifndef FBSIM_MODES_HPP
#define FBSIM_MODES_HPP

#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fbsim/errors.hpp"

namespace fbsim {

enum class Polarization { None, X, Y };

std::string to_string(Polarization p);
Polarization polarization_from_string(std::string_view s);

/// A discrete monochromatic frequency label. Photons carry a bin id, never a
/// continuous frequency.
struct FrequencyBin {
  int id = 0;
  double center_frequency_hz = 0.0;
};

/// The single-particle basis element: a (path, frequency bin, polarization)
/// triple. Paths are free-form labels (spatial directions, emitter markers,
/// loss environments).
struct Mode {
  std::string path;
  int bin_id = 0;
  Polarization polarization = Polarization::None;

  friend bool operator==(const Mode&, const Mode&) = default;
  std::string label() const;
};

/// Ordered mode set with stable contiguous indices and the bin table.
/// Registries are built once, then treated as immutable by all operations.
class ModeRegistry {
 public:
  explicit ModeRegistry(int max_photons = 4);

  void add_bin(const FrequencyBin& bin);
  int add_mode(const Mode& mode);

  bool has_bin(int id) const;
  const FrequencyBin& bin(int id) const;

  int size() const { return static_cast<int>(modes_.size()); }
  int max_photons() const { return max_photons_; }

  const Mode& mode(int index) const;
  double mode_frequency_hz(int index) const;

  /// Registry index of the mode, or -1 when absent.
  int index_of(const Mode& mode) const;
  /// Registry index of the mode; throws ValidationError when absent.
  int require_index(const Mode& mode) const;

  std::vector<int> modes_on_path(const std::string& path) const;
  const std::vector<Mode>& modes() const { return modes_; }

 private:
  using Key = std::tuple<std::string, int, int>;
  static Key key_of(const Mode& mode);

  int max_photons_;
  std::vector<Mode> modes_;
  std::map<Key, int> index_;
  std::map<int, FrequencyBin> bins_;
};

} // namespace fbsim

#endif
