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

#ifndef PSA_RANK1_HPP
#define PSA_RANK1_HPP

#include <functional>
#include <vector>

#include "psa/sdp.hpp"

namespace psa
{
    struct Rank1Result
    {
        CMat matrix;   // final PSD iterate
        CVec vector;   // sqrt(lambda_max) times the phase-fixed top eigenvector
        double gap = 0.0;
        int iterations = 0;
        std::vector<double> f_trace; // tr - lambda_max for every iterate, starting with x0
    };

    // Constraint set of one penalty step given the previous iterate and its top eigenvector.
    // The loop adds I - v v^H to whatever objective the template returns and minimizes.
    using PenaltyTemplate = std::function<SdpProblem(const CMat &prev, const CVec &v_max)>;

    struct PenaltyOptions
    {
        double rank1_tol = 1e-6;
        int max_iter = 50;
        SdpOptions sdp{1e-9, 150, nullptr};
        std::ostream *trace = nullptr; // penalty_iter, f, lambda_max, sdp iterations
        // On a stall the linearization point is moved to signed sums of the significant eigenvectors;
        // this many sign patterns are tried before giving up.
        int escape_tries = 8;
    };

    // Iterates X <- argmin tr(X) - <v v^H, X> over the template's feasible set.
    // Stops once tr(X) - lambda_max(X) <= rank1_tol; throws Stalled when the gap stops shrinking
    // and no escape direction lowers it.
    Rank1Result rank1_penalty_loop(const PenaltyTemplate &tmpl, const CMat &x0, const PenaltyOptions &opt = {});

    struct Rank1MaxResult
    {
        Rank1Result rank1;
        double gamma_star = 0.0; // certified level tr(R X) >= gamma_star with X rank one
        double gamma_up = 0.0;   // relaxed optimum
        CMat relaxed;            // relaxed maximizer, start point of every penalty run
    };

    // Maximizes tr(R X) over the problem's constraints with X rank one: solves the relaxation,
    // then bisects gamma in [0, gamma_up] where each test runs the penalty loop with the extra
    // constraint tr(R X) >= gamma. The problem's objective is R and its sense is ignored.
    // Throws Infeasible if the relaxation is infeasible or no rank-one point is found at gamma = 0.
    struct Rank1SearchOptions
    {
        PenaltyOptions penalty;
        SdpOptions relaxed{1e-9, 150, nullptr};
        double bisection_rel_tol = 1e-4; // of gamma_up
        double null_rtol = 1e-10;        // rank cut for null-space parametrizations done by callers
    };

    // feasible, when given, is a rank-one point v (X = v v^H) known to satisfy the constraints. Its
    // level starts the bisection and it is returned if no penalty run does better.
    Rank1MaxResult maximize_rank1(const SdpProblem &problem, const Rank1SearchOptions &opt = {},
                                  const CVec *feasible = nullptr);

} // namespace psa

#endif
