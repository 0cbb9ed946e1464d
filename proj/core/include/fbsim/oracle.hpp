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

#ifndef FBSIM_ORACLE_HPP
#define FBSIM_ORACLE_HPP

#include <complex>

#include <Eigen/Dense>

#include "fbsim/mode_unitary.hpp"
#include "fbsim/pure_state.hpp"

namespace fbsim {

/// Permanent by direct expansion over all permutations. Intentionally the
/// slow textbook sum: this routine backs the verification oracle and must
/// stay independent of any clever evolution code. Dimensions up to ~8 only.
std::complex<double> permanent(const Eigen::MatrixXcd& m);

/// Independent transition amplitude ⟨out|φ(U)|in⟩ for passive linear optics:
/// per(U_sub)/√(Π n_i! Π m_j!) with rows/columns of U repeated by occupation.
/// Returns 0 when photon numbers differ (passive optics conserves photons).
std::complex<double> transition_amplitude_oracle(const OccupationVector& in,
                                                 const OccupationVector& out,
                                                 const ModeUnitary& u);

} // namespace fbsim

#endif
