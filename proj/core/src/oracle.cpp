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

#include "fbsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fbsim/errors.hpp"

namespace fbsim {

std::complex<double> permanent(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("permanent requires a square matrix");
  }
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;

  std::vector<int> row(static_cast<std::size_t>(n));
  std::iota(row.begin(), row.end(), 0);
  std::complex<double> total = 0.0;
  do {
    std::complex<double> term = 1.0;
    for (int col = 0; col < n; ++col) {
      term *= m(row[static_cast<std::size_t>(col)], col);
    }
    total += term;
  } while (std::next_permutation(row.begin(), row.end()));
  return total;
}

std::complex<double> transition_amplitude_oracle(const OccupationVector& in,
                                                 const OccupationVector& out,
                                                 const ModeUnitary& u) {
  const auto n_modes = static_cast<std::size_t>(u.dimension());
  if (in.size() != n_modes || out.size() != n_modes) {
    throw ValidationError("occupation length does not match the unitary dimension");
  }
  const int photons = total_photons(in);
  if (photons != total_photons(out)) {
    return 0.0; // passive optics conserves photon number
  }
  if (photons > 4) {
    throw ValidationError("oracle supports at most 4 photons, got " + std::to_string(photons));
  }
  if (photons == 0) return 1.0;

  // Column list repeats input modes by occupation, row list output modes.
  std::vector<int> cols;
  std::vector<int> rows;
  for (std::size_t k = 0; k < n_modes; ++k) {
    for (int i = 0; i < in[k]; ++i) cols.push_back(static_cast<int>(k));
    for (int i = 0; i < out[k]; ++i) rows.push_back(static_cast<int>(k));
  }
  Eigen::MatrixXcd sub(photons, photons);
  for (int r = 0; r < photons; ++r) {
    for (int c = 0; c < photons; ++c) {
      sub(r, c) = u.entry(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
    }
  }
  double normalization = 1.0;
  for (std::size_t k = 0; k < n_modes; ++k) {
    for (int i = 2; i <= in[k]; ++i) normalization *= i;
    for (int i = 2; i <= out[k]; ++i) normalization *= i;
  }
  return permanent(sub) / std::sqrt(normalization);
}

} // namespace fbsim
