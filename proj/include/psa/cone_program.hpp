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

#ifndef PSA_CONE_PROGRAM_HPP
#define PSA_CONE_PROGRAM_HPP

#include <ostream>
#include <vector>

#include "psa/em_core.hpp"

namespace psa
{
    // Real standard-form cone program
    //   minimize   sum_b <C_b, X_b> + c_lp' x_lp
    //   subject to sum_b <A_ib, X_b> + a_i' x_lp = b_i,   X_b PSD,  x_lp >= 0.
    // Coefficient matrices are symmetric; a sparse entry (r, c, v) sets both (r, c) and (c, r).
    struct ConeProgram
    {
        struct SparseEntry
        {
            int block;
            int r;
            int c;
            double v;
        };

        struct Row
        {
            std::vector<std::pair<int, Mat>> dense; // (block, symmetric matrix)
            std::vector<SparseEntry> sparse;
            std::vector<std::pair<int, double>> lp; // (lp index, coefficient)
            double rhs = 0.0;
        };

        std::vector<int> psd_dims;
        int lp_dim = 0;
        std::vector<Mat> c_psd; // empty matrix means zero
        Vec c_lp;
        std::vector<Row> rows;

        int add_psd_block(int dim);
        int add_lp_vars(int count);
        Row &add_row(double rhs);
        void finalize(); // sizes the objective containers
    };

    enum class SolveStatus
    {
        optimal,
        primal_infeasible,
        dual_infeasible,
        max_iterations
    };

    const char *status_name(SolveStatus s);

    struct ConeSolution
    {
        std::vector<Mat> x_psd;
        Vec x_lp;
        Vec y;
        std::vector<Mat> z_psd;
        Vec z_lp;
        double primal_objective = 0.0;
        double dual_objective = 0.0;
        double primal_residual = 0.0; // relative
        double dual_residual = 0.0;   // relative
        double gap = 0.0;             // relative
        int iterations = 0;
        SolveStatus status = SolveStatus::max_iterations;
    };

    struct IpmOptions
    {
        double tol = 1e-8;
        int max_iter = 120;
        std::ostream *trace = nullptr; // tab-separated, one line per iteration
    };

    // Mehrotra predictor-corrector with Nesterov-Todd scaling, infeasible start.
    ConeSolution solve_cone_program(const ConeProgram &prog, const IpmOptions &opt = {});

    // Row activity sum_b <A_ib, X_b> + a_i' x_lp for a candidate point.
    Vec cone_row_values(const ConeProgram &prog, const std::vector<Mat> &x_psd, const Vec &x_lp);

} // namespace psa

#endif
