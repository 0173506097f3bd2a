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

#ifndef PSA_RELAY_HPP
#define PSA_RELAY_HPP

#include <array>
#include <ostream>
#include <random>
#include <vector>

#include "psa/em_core.hpp"
#include "psa/rank1.hpp"

namespace psa
{
    // Noise term closing the eavesdropper's second-phase variance.
    enum class KeNoise
    {
        sigma_d, // as printed in the model
        sigma_e  // eavesdropper's own noise
    };

    // Two-hop amplify-and-forward network with an N_R-element PSA relay and single-antenna
    // source, destination, eavesdropper and jammer.
    struct RelayScenario
    {
        int n_r = 8;
        double spacing = 0.5;
        DoaPoa desired;
        DoaPoa jammer;
        cd h_sr{1.0, 0.0};
        cd h_jr{1.0, 0.0};
        cd h_se{1.0, 0.0};
        cd h_je{1.0, 0.0};
        cd h_jd{1.0, 0.0};
        CVec h_rd; // entries of the 1 x N_R row
        CVec h_re; // entries of the 1 x N_R row
        double corr_p = 0.5;
        double sigma_r2 = 1.0;
        double sigma_d2 = 1.0;
        double sigma_e2 = 1.0;
        double p_s = 1.0;
        double p_r_max = 1.0;
        double p_j_max = 1.0;
        KeNoise ke_noise = KeNoise::sigma_d;

        void validate() const; // throws std::invalid_argument
        ManifoldMatrix q_d() const { return manifold_matrix(desired, n_r, spacing); }
        ManifoldMatrix q_j() const { return manifold_matrix(jammer, n_r, spacing); }
    };

    struct CorrelationMatrix
    {
        CMat r;
        CMat sqrt; // principal root, sqrt * sqrt^H = r
    };

    // R[n, m] = corr_p^|n - m|.
    CorrelationMatrix exp_correlation(int n, double corr_p);

    struct RelayCovariances
    {
        CMat o_e;   // 2 x 2
        double o_d; // destination interference plus noise
        CVec h_e;   // 2-vector
    };

    RelayCovariances relay_covariances(const RelayScenario &sc, const CMat &w, const Vec &pointing, double p_j1,
                                       double p_j2);

    // Relay transmit power.
    double relay_power(const RelayScenario &sc, const CMat &w, const Vec &pointing, double p_j1);

    // General secrecy rate with the 2 x 2 determinant at the eavesdropper.
    double relay_secrecy_rate(const RelayScenario &sc, const CMat &w, const Vec &pointing, double p_j1, double p_j2);

    // Objective of the nulled design: log2 of (1 + SNR_D) / (1 + SNR_E) with P_J^(1) = P_J^max and
    // P_J^(2) = 0, assuming both nulls hold. May be negative.
    double relay_nulled_objective(const RelayScenario &sc, const CMat &w, const Vec &pointing);

    // Rate when the relay's pointing is realized as p_act. The destination sees the forwarded jammer
    // leak; the eavesdropper combines both phases incoherently (cross term dropped), which reduces to
    // the nulled objective when the leaks vanish. Clamped at zero.
    double relay_realized_rate(const RelayScenario &sc, const CMat &w, const Vec &p_act);

    // |h_RD R^1/2 W Q_j p| and |h_RE R^1/2 W Q_d p|.
    std::array<double, 2> relay_null_residuals(const RelayScenario &sc, const CMat &w, const Vec &pointing);

    struct RelayDiagnostics
    {
        std::array<double, 4> residuals{}; // W-step pair against the previous pointing, p-step pair against the final one
        double relay_power = 0.0;
        int outer_iterations = 0;
        bool converged = false;
        double rank1_gap = 0.0;
        int start_index = 0; // winning start of a multistart run
    };

    struct RelayDesign
    {
        CMat w;
        Vec pointing;
        double secrecy_rate = 0.0;            // clamped nulled objective
        std::vector<double> objective_trace;  // nulled objective after every outer iteration
        RelayDiagnostics diagnostics;
    };

    // Closed-form W for a fixed pointing, both nulls exact and relay power at the budget.
    // Throws DegenerateNullspace when the nulls leave no path to the destination.
    CMat optimize_w_given_p(const RelayScenario &sc, const Vec &pointing);

    struct PStepResult
    {
        Vec p;
        double gamma_star = 0.0;
        double gamma_up = 0.0;
        double rank1_gap = 0.0;
        std::vector<double> f_trace;
    };

    // Pointing for a fixed W: nulls via a real null-space parametrization, relay power as a
    // trace constraint, destination gain maximized by relaxation, penalty loop and bisection.
    // start, when it meets every constraint of the step, seeds the search as a certified point.
    PStepResult optimize_p_given_w(const RelayScenario &sc, const CMat &w, const Rank1SearchOptions &opt = {},
                                   const Vec *start = nullptr);

    struct AlternatingOptions
    {
        int max_outer = 10;
        double rel_tol = 1e-3;
        Rank1SearchOptions pstep;
        std::ostream *trace = nullptr; // outer_iter, objective, four residuals, relay power
    };

    RelayDesign alternating_secrecy_max(const RelayScenario &sc, const Vec &p0, const AlternatingOptions &opt = {});

    // Runs the alternating scheme from every start and keeps the best final objective. Starts
    // that fail are skipped; if all fail the first failure is rethrown.
    RelayDesign alternating_multistart(const RelayScenario &sc, const std::vector<Vec> &starts,
                                       const AlternatingOptions &opt = {});

    // Fixed-orientation array: only the W-step runs.
    RelayDesign fixed_pointing_design(const RelayScenario &sc, const Vec &pointing);

    // {dp : dp' C dp <= 1} for the real pointing error.
    struct ErrorEllipsoid
    {
        Mat c;

        void validate() const; // throws std::invalid_argument unless C is symmetric positive definite
        static ErrorEllipsoid scaled_identity(int dim, double s) { return {s * Mat::Identity(dim, dim)}; }
        // Uniform on the surface or in the interior.
        Vec sample(std::mt19937_64 &rng, bool on_surface) const;
    };

    struct RobustOptions
    {
        double gamma_resolution = 1e-3; // bits
        PenaltyOptions penalty{1e-6, 60, {1e-9, 200, nullptr}, nullptr};
        double null_rtol = 1e-10;
    };

    struct RobustDesign
    {
        CMat w_rb;
        double worst_case_rate = 0.0; // certified gamma-bar
        double u1 = 0.0;
        double u2 = 0.0;
        double leakage_residual = 0.0; // max |h_RE R^1/2 W_rb Q_d|
        double rank1_gap = 0.0;        // on the lifted variable normalized by P_R^max / sigma_r^2
        double gamma_up = 0.0;
        int feasibility_tests = 0;
    };

    // Worst-case design over the ellipsoid via two S-procedure LMIs on the lifted vec(W).
    // gamma-bar is bisected on [0, nominal secrecy rate]. Throws Infeasible if gamma-bar = 0 fails.
    RobustDesign robust_beamformer(const RelayScenario &sc, const RelayDesign &nominal, const ErrorEllipsoid &ellipsoid,
                                   const RobustOptions &opt = {});

} // namespace psa

#endif
