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

#include "fbsim/mode_unitary.hpp"

#include <string>

#include "fbsim/errors.hpp"
#include "fbsim/tolerances.hpp"

namespace fbsim {

ModeUnitary ModeUnitary::identity(int dimension) {
  if (dimension < 1) throw ValidationError("unitary dimension must be positive");
  return ModeUnitary(Eigen::MatrixXcd::Identity(dimension, dimension));
}

ModeUnitary ModeUnitary::from_matrix(Eigen::MatrixXcd matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    throw ValidationError("mode unitary must be a non-empty square matrix");
  }
  Eigen::MatrixXcd defect = matrix * matrix.adjoint() -
                            Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  double worst = defect.cwiseAbs().maxCoeff();
  if (worst > kUnitarityTol) {
    throw ValidationError("matrix is not unitary: max |U*U^dag - I| = " + std::to_string(worst));
  }
  return ModeUnitary(std::move(matrix));
}

ModeUnitary compose(const ModeUnitary& second, const ModeUnitary& first) {
  if (second.dimension() != first.dimension()) {
    throw ValidationError("cannot compose unitaries of dimensions " +
                          std::to_string(second.dimension()) + " and " +
                          std::to_string(first.dimension()));
  }
  return ModeUnitary::from_matrix(second.matrix() * first.matrix());
}

} // namespace fbsim
