// SPDX-License-Identifier: Apache-2.0
//
// psa-secure: polarization sensitive array secure beamforming
// Copyright (C) 2026 psa-secure contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef PSA_BISECTION_HPP
#define PSA_BISECTION_HPP

#include <functional>

namespace psa
{
    // Largest gamma in [lo, hi] with feasible(gamma), assuming a single true-to-false switch.
    // hi is tried first and returned directly when feasible. Throws InvalidBracket if lo fails.
    double bisection(double lo, double hi, const std::function<bool(double)> &feasible, double tol);

    // Default tolerance: 1e-4 of the bracket width.
    inline double default_bisection_tol(double lo, double hi) { return 1e-4 * (hi - lo); }

} // namespace psa

#endif
