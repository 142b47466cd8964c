// Copyright 2026 The randstruct Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>

namespace randstruct::tol {

// Central tolerance table. Every numerical comparison in the library and
// its test suites draws from here.

/// Relative error of a fast transform against the quadratic-time sum.
inline constexpr double kTransformRel = 1e-9;
/// Absolute per-entry error of inverse_dft(dft(f)) against f.
inline constexpr double kRoundTripAbs = 1e-9;
/// Derived identities (convolution theorem, Plancherel on random inputs).
inline constexpr double kIdentityAbs = 1e-8;
/// Pointwise additivity f = f1 + f2 and mean preservation.
inline constexpr double kAdditivityAbs = 1e-9;
/// Slack granted to proven inequalities evaluated in floating point.
inline constexpr double kCertificateAbs = 1e-9;
/// Relative slack for L2 sums on Bohr sets against direct summation.
inline constexpr double kL2Rel = 1e-6;
/// Values this far below zero produced by transforms are snapped to 0 when a
/// nonnegative function is expected.
inline constexpr double kNonNegativeSnap = 1e-9;
/// Relative slack for threshold tests on convolution values.
inline constexpr double kThresholdRel = 1e-9;

/// Largest modulus for which Bohr sets are materialized.
inline constexpr std::size_t kMaxBohrModulus = std::size_t{1} << 22;

}  // namespace randstruct::tol
