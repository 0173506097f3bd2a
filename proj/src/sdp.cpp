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

#include "psa/sdp.hpp"

#include <stdexcept>

namespace psa
{
    namespace
    {
        bool imag_free(const CMat &a) { return a.size() == 0 || a.imag().cwiseAbs().maxCoeff() == 0.0; }
    } // namespace

    void SdpProblem::validate() const
    {
        auto check = [&](const CMat &a, const char *what) {
            if (a.rows() != dim || a.cols() != dim)
                throw std::invalid_argument(std::string("SdpProblem: bad size for ") + what);
            const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
            if (hermitian_defect(a) > 1e-10 * scale)
                throw std::invalid_argument(std::string("SdpProblem: non-Hermitian ") + what);
        };
        if (dim < 1)
            throw std::invalid_argument("SdpProblem: dim must be >= 1");
        check(objective, "objective");
        for (const auto &[a, b] : eq)
            check(a, "equality");
        for (const auto &[a, c] : ineq)
            check(a, "inequality");
    }

    bool SdpProblem::is_real() const
    {
        if (!imag_free(objective))
            return false;
        for (const auto &[a, b] : eq)
            if (!imag_free(a))
                return false;
        for (const auto &[a, c] : ineq)
            if (!imag_free(a))
                return false;
        return true;
    }

    ConeProgram to_cone_program(const SdpProblem &pr, bool &embedded)
    {
        pr.validate();
        embedded = !pr.is_real();
        const double sgn = (pr.sense == Sense::maximize) ? -1.0 : 1.0;
        // tr(A X) = 0.5 tr(emb(A) emb(X)) for Hermitian A, X.
        auto lift = [&](const CMat &a) -> Mat {
            const CMat h = 0.5 * (a + a.adjoint());
            return embedded ? Mat(0.5 * embed_hermitian(h)) : Mat(h.real());
        };
        ConeProgram cp;
        cp.add_psd_block(embedded ? 2 * pr.dim : pr.dim);
        const int nin = (int)pr.ineq.size();
        if (nin > 0)
            cp.add_lp_vars(nin);
        cp.c_psd.push_back(sgn * lift(pr.objective));
        for (const auto &[a, b] : pr.eq)
        {
            auto &row = cp.add_row(b);
            row.dense.emplace_back(0, lift(a));
        }
        for (int k = 0; k < nin; ++k)
        {
            auto &row = cp.add_row(pr.ineq[k].second);
            row.dense.emplace_back(0, lift(pr.ineq[k].first));
            row.lp.emplace_back(k, 1.0);
        }
        cp.finalize();
        return cp;
    }

    SdpSolution solve_sdp(const SdpProblem &problem, const SdpOptions &opt)
    {
        bool embedded = false;
        const ConeProgram cp = to_cone_program(problem, embedded);
        IpmOptions io;
        io.tol = opt.tol;
        io.max_iter = opt.max_iter;
        io.trace = opt.trace;
        const ConeSolution cs = solve_cone_program(cp, io);

        SdpSolution out;
        out.status = cs.status;
        out.primal_residual = cs.primal_residual;
        out.dual_residual = cs.dual_residual;
        out.gap = cs.gap;
        out.iterations = cs.iterations;
        out.primal_objective = cs.primal_objective;
        out.dual_objective = cs.dual_objective;
        if (embedded)
            out.x = extract_hermitian(cs.x_psd[0]);
        else
            out.x = (0.5 * (cs.x_psd[0] + cs.x_psd[0].transpose())).cast<cd>();
        out.objective_value = (problem.objective * out.x).trace().real();
        if (cs.status == SolveStatus::max_iterations)
            throw MaxIterations("SDP did not converge (primal " + std::to_string(cs.primal_residual) +
                                ", dual " + std::to_string(cs.dual_residual) + ", gap " + std::to_string(cs.gap) + ")");
        return out;
    }

} // namespace psa
