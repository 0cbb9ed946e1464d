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

#ifndef FBSIM_MODE_UNITARY_HPP
#define FBSIM_MODE_UNITARY_HPP

#include <Eigen/Dense>

namespace fbsim {

/// Square complex matrix acting on the single-particle mode space. All
/// passive components compile to one of these. Construction enforces
/// U·U† = I entrywise within kUnitarityTol, so a held ModeUnitary is
/// always safe to lift to multi-photon states.
///
/// Convention: column k lists the image of mode k, i.e. a†_k -> Σ_j U(j,k) a†_j.
class ModeUnitary {
 public:
  static ModeUnitary identity(int dimension);

  /// Validates unitarity; throws ValidationError otherwise.
  static ModeUnitary from_matrix(Eigen::MatrixXcd matrix);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::complex<double> entry(int row, int col) const { return matrix_(row, col); }

 private:
  explicit ModeUnitary(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {}
  Eigen::MatrixXcd matrix_;
};

/// Applying `first`, then `second`  ==  applying compose(second, first).
ModeUnitary compose(const ModeUnitary& second, const ModeUnitary& first);

} // namespace fbsim

#endif
