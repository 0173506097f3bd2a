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

#ifndef PSA_SIMO_HPP
#define PSA_SIMO_HPP

#include <string>
#include <utility>
#include <vector>

#include "psa/em_core.hpp"
#include "psa/rank1.hpp"

namespace psa
{
    // Single-antenna source and jammer, N_D-element PSA destination, N_E-antenna eavesdropper.
    struct SimoScenario
    {
        int n_d = 8;
        int n_e = 6;
        double spacing = 0.5;
        DoaPoa desired;
        DoaPoa jammer;
        cd h_sd{1.0, 0.0};
        cd h_jd{1.0, 0.0};
        CVec h_se; // N_E
        CVec h_je; // N_E
        double sigma2 = 1.0;
        double sigma_e2 = 1.0;

        void validate() const; // throws std::invalid_argument
        ManifoldMatrix q_d() const { return manifold_matrix(desired, n_d, spacing); }
        ManifoldMatrix q_j() const { return manifold_matrix(jammer, n_d, spacing); }
    };

    struct PowerAllocation
    {
        double p_s = 0.0;
        double p_j = 0.0;

        double total() const { return p_s + p_j; }
    };

    enum class PowerCase
    {
        zero_rate,
        source_only,  // rate at or below R1, no jamming
        jammer_aided, // R1 < rate < R2
        infeasible    // rate at or above R2
    };

    const char *power_case_name(PowerCase c);

    struct SimoDiagnostics
    {
        double rank1_gap = 0.0;
        double gamma_star = 0.0;
        double gamma_up = 0.0;
        int penalty_iterations = 0;
        std::vector<double> f_trace;
        double null_residual = 0.0;  // ||Q_j p||^2
        double norm_deviation = 0.0; // max | ||p_n|| - 1 | before block renormalization
        std::string case_label;
    };

    struct SimoDesign
    {
        Vec pointing;
        CVec dest_beamformer;
        CVec eve_beamformer;
        PowerAllocation allocation;
        double secrecy_rate = 0.0;
        SimoDiagnostics diagnostics;
    };

    using PointingOptions = Rank1SearchOptions;

    struct PointingResult
    {
        Vec p;
        double gamma_star = 0.0; // certified lower level of ||Q_d p||^2
        double gamma_up = 0.0;   // relaxed optimum
        Rank1Result rank1;
        double null_residual = 0.0;
        double norm_deviation = 0.0;
    };

    // Receive filter maximizing the eavesdropper SINR.
    CVec eve_beamformer(const SimoScenario &sc, double p_j);

    // Destination SINR for the design's pointing, beamformer and powers.
    double sinr_destination(const SimoScenario &sc, const SimoDesign &design);
    double sinr_destination(const SimoScenario &sc, const Vec &pointing, const CVec &w, double p_s, double p_j);

    // Eavesdropper SINR with its optimal filter.
    double sinr_eve(const SimoScenario &sc, double p_s, double p_j);

    double secrecy_from_sinr(double sinr_d, double sinr_e);
    double secrecy_rate(const SimoScenario &sc, const SimoDesign &design);

    // Pointing with the jammer nulled and ||Q_d p||^2 maximized (relaxation, penalty loop, bisection).
    PointingResult optimize_pointing(const SimoScenario &sc, const PointingOptions &opt = {});

    // Q_d p / ||Q_d p||.
    CVec dest_beamformer(const Vec &pointing, const ManifoldMatrix &q_d);

    // Interference-whitened matched filter against the jammer's response.
    CVec mvdr_beamformer(const SimoScenario &sc, const Vec &pointing, double p_j);

    // sigma^-2 |h_SD|^2 ||Q_d p||^2.
    double dest_gain(const SimoScenario &sc, const Vec &pointing);

    // Rate ceilings without (r1) and with unlimited (r2) jamming, bits.
    std::pair<double, double> rate_bounds(const SimoScenario &sc, const Vec &pointing);

    // Minimal P_S + P_J meeting r_sec_0 with the jammer nulled at the destination.
    // Throws Infeasible when r_sec_0 >= R2.
    PowerAllocation min_total_power(const SimoScenario &sc, const Vec &pointing, double r_sec_0,
                                    PowerCase *which = nullptr);

    struct RateMaxResult
    {
        PowerAllocation allocation;
        double rate = 0.0;
        bool fallback = false; // stationary root beaten by an endpoint or the other root
    };

    // Best split of p_max between source and jammer with the jammer nulled at the destination.
    RateMaxResult max_secrecy_rate(const SimoScenario &sc, const Vec &pointing, double p_max);

    // Objective of the split, (1 + SINR_D) / (1 + SINR_E) at P_S and P_J = p_max - P_S.
    double rate_ratio(const SimoScenario &sc, const Vec &pointing, double p_s, double p_max);

    // Same two problems without assuming a null: the destination uses the MVDR filter and the
    // powers are found by one-dimensional search. Used for fixed-orientation arrays.
    PowerAllocation min_total_power_search(const SimoScenario &sc, const Vec &pointing, double r_sec_0);
    RateMaxResult max_secrecy_rate_search(const SimoScenario &sc, const Vec &pointing, double p_max);

    // Full pipeline for one scenario.
    SimoDesign design_power_min(const SimoScenario &sc, double r_sec_0, const PointingOptions &opt = {});
    SimoDesign design_rate_max(const SimoScenario &sc, double p_max, const PointingOptions &opt = {});

} // namespace psa

#endif
