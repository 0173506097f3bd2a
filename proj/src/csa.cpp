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
#include <algorithm>
#include <cmath>

#include "psa/experiments.hpp"

namespace psa
{
    Vec csa_pointing(const ScenarioConfig &c)
    {
        const double te = deg2rad(c.csa_theta_e), pe = deg2rad(c.csa_phi_e);
        const Eigen::Vector3d d(std::sin(pe) * std::cos(te), std::sin(pe) * std::sin(te), std::cos(pe));
        return uniform_pointing(c.n_antennas, d);
    }

    CsaSimoResult csa_power_min(const SimoScenario &sc, const Vec &pointing, double r_sec_0)
    {
        CsaSimoResult r;
        r.pointing = pointing;
        r.allocation = min_total_power_search(sc, pointing, r_sec_0);
        r.secrecy_rate = std::max(0.0, r_sec_0);
        return r;
    }

    CsaSimoResult csa_rate_max(const SimoScenario &sc, const Vec &pointing, double p_max)
    {
        const RateMaxResult rm = max_secrecy_rate_search(sc, pointing, p_max);
        return {pointing, rm.allocation, rm.rate};
    }

} // namespace psa
