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

#ifndef FBSIM_TOLERANCES_HPP
#define FBSIM_TOLERANCES_HPP

namespace fbsim {

/// Numeric tolerances shared across the library. These are contract values:
/// changing them changes which states/matrices are accepted.
inline constexpr double kUnitarityTol = 1e-12;      ///< entrywise bound on |U·U† − I|
inline constexpr double kHermitianTol = 1e-12;      ///< entrywise bound on |ρ − ρ†|
inline constexpr double kTraceTol = 1e-9;           ///< |tr ρ − 1| bound
inline constexpr double kEigenvalueFloor = -1e-9;   ///< smallest admissible ρ eigenvalue
inline constexpr double kNormTol = 1e-9;            ///< |‖ψ‖² − 1| bound for normalized states
inline constexpr double kAmplitudeFloor = 1e-14;    ///< amplitudes below this are pruned
inline constexpr double kFrequencyRelTol = 1e-9;    ///< relative tolerance on frequency-gap checks
inline constexpr double kModulationWarningHz = 3e9; ///< drives above this raise a feasibility warning

} // namespace fbsim

#endif
