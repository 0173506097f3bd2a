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

#include "psa/bisection.hpp"

#include "psa/errors.hpp"

namespace psa
{
    double bisection(double lo, double hi, const std::function<bool(double)> &feasible, double tol)
    {
        if (!(hi >= lo))
            throw InvalidBracket("hi < lo");
        if (!feasible(lo))
            throw InvalidBracket("predicate false at the lower end");
        if (hi == lo || feasible(hi))
            return hi;
        while (hi - lo > tol)
        {
            const double mid = 0.5 * (lo + hi);
            if (feasible(mid))
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

} // namespace psa
