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

#ifndef FBSIM_DENSITY_MATRIX_HPP
#define FBSIM_DENSITY_MATRIX_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fbsim {

/// Hermitian, unit-trace, positive-semidefinite operator over a declared
/// subsystem basis (e.g. {"xx","xy","yx","yy"} for two polarization qubits,
/// or stringified occupation vectors for detection mixtures). The invariants
/// are enforced at construction.
class DensityMatrix {
 public:
  DensityMatrix(Eigen::MatrixXcd matrix, std::vector<std::string> basis_labels);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::vector<std::string>& basis_labels() const { return basis_labels_; }

  std::complex<double> entry(int row, int col) const { return matrix_(row, col); }

 private:
  Eigen::MatrixXcd matrix_;
  std::vector<std::string> basis_labels_;
};

} // namespace fbsim

#endif
