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

#include "fbsim/density_matrix.hpp"

#include <string>

#include "fbsim/errors.hpp"
#include "fbsim/tolerances.hpp"

namespace fbsim {

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, std::vector<std::string> basis_labels)
    : matrix_(std::move(matrix)), basis_labels_(std::move(basis_labels)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw ValidationError("density matrix must be a non-empty square matrix");
  }
  if (static_cast<int>(basis_labels_.size()) != matrix_.rows()) {
    throw ValidationError("density matrix has " + std::to_string(matrix_.rows()) +
                          " rows but " + std::to_string(basis_labels_.size()) + " basis labels");
  }
  double herm_defect = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_defect > kHermitianTol) {
    throw ValidationError("density matrix is not Hermitian: max |rho - rho^dag| = " +
                          std::to_string(herm_defect));
  }
  double trace_defect = std::abs(matrix_.trace() - std::complex<double>(1.0, 0.0));
  if (trace_defect > kTraceTol) {
    throw ValidationError("density matrix trace deviates from 1 by " + std::to_string(trace_defect));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw EvaluationError("density matrix eigenvalue computation failed");
  }
  double smallest = solver.eigenvalues().minCoeff();
  if (smallest < kEigenvalueFloor) {
    throw ValidationError("density matrix has a negative eigenvalue: " + std::to_string(smallest));
  }
}

} // namespace fbsim
