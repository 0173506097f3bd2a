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
#include <cmath>

#include "psa/experiments.hpp"

namespace psa
{
    std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial)
    {
        std::seed_seq seq{(std::uint32_t)seed, (std::uint32_t)(seed >> 32), (std::uint32_t)trial,
                          (std::uint32_t)(trial >> 32)};
        return std::mt19937_64(seq);
    }

    CVec draw_cn(std::mt19937_64 &rng, int n, double variance)
    {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5 * variance));
        CVec v(n);
        for (int i = 0; i < n; ++i)
        {
            const double re = g(rng);
            const double im = g(rng);
            v(i) = cd(re, im);
        }
        return v;
    }

    SimoScenario sample_simo(const ScenarioConfig &c, std::mt19937_64 &rng)
    {
        const double var = c.channel_variance;
        SimoScenario sc;
        sc.n_d = c.n_antennas;
        sc.n_e = c.n_e;
        sc.spacing = c.spacing;
        sc.desired = c.desired();
        sc.jammer = c.jammer();
        sc.h_sd = draw_cn(rng, 1, var)(0);
        sc.h_jd = draw_cn(rng, 1, var)(0);
        sc.h_se = draw_cn(rng, c.n_e, var);
        sc.h_je = draw_cn(rng, c.n_e, var);
        sc.sigma2 = c.sigma2;
        sc.sigma_e2 = c.sigma_e2;
        return sc;
    }

    RelayScenario sample_relay(const ScenarioConfig &c, std::mt19937_64 &rng)
    {
        const double var = c.channel_variance;
        auto db = [](double x) { return std::pow(10.0, x / 10.0); };
        RelayScenario sc;
        sc.n_r = c.n_antennas;
        sc.spacing = c.spacing;
        sc.desired = c.desired();
        sc.jammer = c.jammer();
        sc.h_sr = draw_cn(rng, 1, var)(0);
        sc.h_jr = draw_cn(rng, 1, var)(0);
        sc.h_se = draw_cn(rng, 1, var)(0);
        sc.h_je = draw_cn(rng, 1, var)(0);
        sc.h_jd = draw_cn(rng, 1, var)(0);
        sc.h_rd = draw_cn(rng, c.n_antennas, var);
        sc.h_re = draw_cn(rng, c.n_antennas, var);
        sc.corr_p = c.corr_p;
        sc.sigma_r2 = c.sigma_r2;
        sc.sigma_d2 = c.sigma_d2;
        sc.sigma_e2 = c.sigma_e2;
        sc.p_s = db(c.p_s_db);
        sc.p_r_max = db(c.p_r_max_db);
        sc.p_j_max = db(c.p_j_max_db);
        sc.ke_noise = c.ke_noise;
        return sc;
    }

    Vec random_pointing(std::mt19937_64 &rng, int n_antennas)
    {
        std::normal_distribution<double> g(0.0, 1.0);
        Vec p(3 * n_antennas);
        for (int i = 0; i < n_antennas; ++i)
        {
            Eigen::Vector3d v;
            do
            {
                const double x = g(rng), y = g(rng), z = g(rng);
                v = Eigen::Vector3d(x, y, z);
            } while (v.norm() < 1e-12);
            set_element_block(p, i, v.normalized());
        }
        return p;
    }

    std::vector<Vec> relay_starts(const ScenarioConfig &c, std::mt19937_64 &rng)
    {
        std::vector<Vec> s{uniform_pointing(c.n_antennas, {0.0, 0.0, 1.0})};
        for (int k = 0; k < c.random_starts; ++k)
            s.push_back(random_pointing(rng, c.n_antennas));
        return s;
    }

} // namespace psa
