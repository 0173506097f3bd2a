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

#include "psa/rank1.hpp"

#include <cmath>
#include <iomanip>

#include "psa/bisection.hpp"

namespace psa
{
    namespace
    {
        Rank1Result finish(const CMat &x, double gap, int iterations, std::vector<double> trace)
        {
            Rank1Result r;
            r.matrix = x;
            auto [lmax, v] = top_eig(x);
            r.vector = std::sqrt(std::max(0.0, lmax)) * v;
            r.gap = gap;
            r.iterations = iterations;
            r.f_trace = std::move(trace);
            return r;
        }
        // sum_k s_k sqrt(lambda_k) v_k over eigenpairs above a relative floor, with s_0 = 1 and the
        // remaining signs taken from the bits of pattern (pattern 0: all +1).
        CVec merged_direction(const CMat &x, unsigned pattern)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(x);
            const Vec &lam = es.eigenvalues();
            const Eigen::Index n = lam.size();
            const double floor = 1e-9 * std::max(lam(n - 1), 1e-300);
            CVec u = CVec::Zero(x.rows());
            unsigned bit = 0;
            for (Eigen::Index k = n - 1; k >= 0 && lam(k) > floor; --k)
            {
                const double sign = (k == n - 1 || !((pattern >> bit++) & 1u)) ? 1.0 : -1.0;
                u += sign * std::sqrt(lam(k)) * es.eigenvectors().col(k);
            }
            const double nu = u.norm();
            return nu > 0.0 ? CVec(u / nu) : CVec(es.eigenvectors().col(n - 1));
        }

    } // namespace

    Rank1Result rank1_penalty_loop(const PenaltyTemplate &tmpl, const CMat &x0, const PenaltyOptions &opt)
    {
        CMat x = 0.5 * (x0 + x0.adjoint());
        const Eigen::Index n = x.rows();
        double gap = rank1_gap(x);
        std::vector<double> trace{gap};
        if (opt.trace)
            *opt.trace << "penalty_iter\tf\tlambda_max\tsdp_iters\n";

        for (int t = 1; t <= opt.max_iter; ++t)
        {
            if (gap <= opt.rank1_tol)
                return finish(x, gap, t, trace);

            auto step = [&](const CVec &v) {
                SdpProblem pr = tmpl(x, v);
                if (pr.objective.size() == 0)
                    pr.objective = CMat::Zero(n, n);
                pr.objective += CMat::Identity(n, n) - v * v.adjoint();
                pr.sense = Sense::minimize;
                const SdpSolution sol = solve_sdp(pr, opt.sdp);
                if (sol.status != SolveStatus::optimal)
                    throw Infeasible(std::string("penalty step: ") + status_name(sol.status));
                return sol;
            };
            SdpSolution sol = step(top_eig(x).second);
            double gn = rank1_gap(sol.x);
            // The linearized surrogate is stationary when the leftover eigenvectors sit on parts of
            // the variable the top one does not touch. Relinearizing at a merged direction lets the
            // next iterate combine them; only strict decreases are accepted.
            for (int k = 0; gn > opt.rank1_tol && gap - gn < 1e-12 && k < opt.escape_tries; ++k)
            {
                try
                {
                    SdpSolution alt = step(merged_direction(x, (unsigned)k));
                    const double ga = rank1_gap(alt.x);
                    if (ga < gn)
                    {
                        sol = std::move(alt);
                        gn = ga;
                    }
                }
                catch (const Infeasible &)
                {
                }
            }
            trace.push_back(gn);
            if (opt.trace)
                *opt.trace << t << '\t' << std::setprecision(12) << gn << '\t' << top_eig(sol.x).first << '\t'
                           << sol.iterations << '\n';
            if (gn > opt.rank1_tol && gap - gn < 1e-12)
                throw Stalled("penalty gap stuck at " + std::to_string(gn));
            x = sol.x;
            gap = gn;
        }
        return finish(x, gap, opt.max_iter, trace);
    }

    Rank1MaxResult maximize_rank1(const SdpProblem &problem, const Rank1SearchOptions &opt, const CVec *feasible)
    {
        const PenaltyOptions &penalty = opt.penalty;
        SdpProblem rel = problem;
        rel.sense = Sense::maximize;
        SdpSolution sol;
        try
        {
            sol = solve_sdp(rel, opt.relaxed);
        }
        catch (const MaxIterations &e)
        {
            throw Infeasible(std::string("relaxation: ") + e.what());
        }
        if (sol.status != SolveStatus::optimal)
            throw Infeasible(std::string("relaxation: ") + status_name(sol.status));

        Rank1MaxResult out;
        out.gamma_up = std::max(0.0, sol.objective_value);
        out.relaxed = sol.x;
        bool have = false;
        auto attempt = [&](double gamma) {
            auto tmpl = [&](const CMat &, const CVec &) {
                SdpProblem pr;
                pr.dim = problem.dim;
                pr.eq = problem.eq;
                pr.ineq = problem.ineq;
                if (gamma > 0.0)
                    pr.add_ineq(-problem.objective, -gamma); // tr(R X) >= gamma
                return pr;
            };
            try
            {
                Rank1Result res = rank1_penalty_loop(tmpl, out.relaxed, penalty);
                if (res.gap > penalty.rank1_tol)
                    return false;
                if (!have || gamma >= out.gamma_star)
                {
                    out.rank1 = std::move(res);
                    out.gamma_star = gamma;
                    have = true;
                }
                return true;
            }
            catch (const PsaError &)
            {
                return false;
            }
        };

        double lo = 0.0;
        if (feasible)
        {
            const CMat x = (*feasible) * feasible->adjoint();
            lo = std::max(0.0, (problem.objective * x).trace().real());
            out.rank1 = finish(x, 0.0, 0, {0.0});
            out.gamma_star = lo;
            have = true;
        }
        const double lo_known = lo;
        auto pred = [&](double g) { return (feasible && g <= lo_known) || attempt(g); };

        const double tol = std::max(opt.bisection_rel_tol * out.gamma_up, 1e-14);
        try
        {
            // The exact relaxed optimum leaves no interior, so the top of the bracket sits just below it.
            bisection(lo, std::max(lo, out.gamma_up - 0.5 * tol), pred, tol);
        }
        catch (const InvalidBracket &)
        {
            throw Infeasible("no rank-one point found even without the objective constraint");
        }
        return out;
    }

} // namespace psa
