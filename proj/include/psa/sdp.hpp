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

#ifndef PSA_SDP_HPP
#define PSA_SDP_HPP

#include <functional>
#include <ostream>
#include <vector>

#include "psa/cone_program.hpp"
#include "psa/linalg.hpp"

namespace psa
{
    enum class Sense
    {
        minimize,
        maximize
    };

    // Single Hermitian matrix variable X >= 0 with trace constraints.
    struct SdpProblem
    {
        int dim = 0;
        CMat objective;
        Sense sense = Sense::minimize;
        std::vector<std::pair<CMat, double>> eq;   // tr(A X) = b
        std::vector<std::pair<CMat, double>> ineq; // tr(B X) <= c

        void add_eq(const CMat &a, double b) { eq.emplace_back(a, b); }
        void add_ineq(const CMat &a, double c) { ineq.emplace_back(a, c); }
        void validate() const; // Hermitian data, matching sizes
        bool is_real() const;  // all data has zero imaginary part
    };

    struct SdpSolution
    {
        CMat x;
        double objective_value = 0.0;
        SolveStatus status = SolveStatus::max_iterations;
        double primal_residual = 0.0;
        double dual_residual = 0.0;
        double gap = 0.0;
        double primal_objective = 0.0; // in the minimization form actually solved
        double dual_objective = 0.0;
        int iterations = 0;
    };

    struct SdpOptions
    {
        double tol = 1e-7;
        int max_iter = 120;
        std::ostream *trace = nullptr;
    };

    // Real data stays real; complex data goes through the [Re, -Im; Im, Re] embedding.
    // Throws MaxIterations when neither convergence nor infeasibility is established.
    SdpSolution solve_sdp(const SdpProblem &problem, const SdpOptions &opt = {});

    // Same problem as a real cone program; exposed for tests.
    ConeProgram to_cone_program(const SdpProblem &problem, bool &embedded);

} // namespace psa

#endif
