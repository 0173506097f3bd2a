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
#include <limits>
#include <vector>

#include "psa/errors.hpp"
#include "psa/simo.hpp"

namespace psa
{
    namespace
    {
        constexpr double inf = std::numeric_limits<double>::infinity();

        struct EveTerms
        {
            double h = 0.0; // ||h_SE||^2
            double j = 0.0; // ||h_JE||^2
            double a = 0.0; // ||h_SE||^2 ||h_JE||^2 - |h_SE^H h_JE|^2
        };

        EveTerms eve_terms(const SimoScenario &sc)
        {
            EveTerms t;
            t.h = sc.h_se.squaredNorm();
            t.j = sc.h_je.squaredNorm();
            t.a = std::max(0.0, t.h * t.j - std::norm(sc.h_se.dot(sc.h_je)));
            return t;
        }

        // SINR_E / P_S as a function of P_J (Sherman-Morrison).
        double eve_coef(const SimoScenario &sc, const EveTerms &t, double p_j)
        {
            const double s = sc.sigma_e2;
            return (s * t.h + p_j * t.a) / (s * (s + p_j * t.j));
        }

        // SINR_D / P_S under the MVDR filter, as a function of P_J.
        struct DestTerms
        {
            double dd = 0.0, jj = 0.0, dj2 = 0.0, g_sd = 0.0, g_jd = 0.0, s2 = 1.0;

            double coef(double p_j) const
            {
                const double c = p_j * g_jd;
                return g_sd * (dd - c * dj2 / (s2 + c * jj)) / s2;
            }
        };

        DestTerms dest_terms(const SimoScenario &sc, const Vec &pointing)
        {
            const CVec ad = sc.q_d().apply(pointing);
            const CVec aj = sc.q_j().apply(pointing);
            DestTerms d;
            d.dd = ad.squaredNorm();
            d.jj = aj.squaredNorm();
            d.dj2 = std::norm(aj.dot(ad));
            d.g_sd = std::norm(sc.h_sd);
            d.g_jd = std::norm(sc.h_jd);
            d.s2 = sc.sigma2;
            return d;
        }

        // Golden-section minimization of a unimodal f on [lo, hi].
        template <class F>
        double golden_min(F f, double lo, double hi, int iters = 200)
        {
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
            double fc = f(c), fd = f(d);
            for (int i = 0; i < iters && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++i)
            {
                if (fc < fd)
                {
                    hi = d;
                    d = c;
                    fd = fc;
                    c = hi - g * (hi - lo);
                    fc = f(c);
                }
                else
                {
                    lo = c;
                    c = d;
                    fc = fd;
                    d = lo + g * (hi - lo);
                    fd = f(d);
                }
            }
            return fc < fd ? c : d;
        }

        SimoDesign assemble(const SimoScenario &sc, const PointingResult &pr, PowerAllocation alloc)
        {
            SimoDesign d;
            d.pointing = pr.p;
            d.dest_beamformer = dest_beamformer(pr.p, sc.q_d());
            d.eve_beamformer = eve_beamformer(sc, alloc.p_j);
            d.allocation = alloc;
            d.secrecy_rate = secrecy_rate(sc, d);
            d.diagnostics.rank1_gap = pr.rank1.gap;
            d.diagnostics.gamma_star = pr.gamma_star;
            d.diagnostics.gamma_up = pr.gamma_up;
            d.diagnostics.penalty_iterations = pr.rank1.iterations;
            d.diagnostics.f_trace = pr.rank1.f_trace;
            d.diagnostics.null_residual = pr.null_residual;
            d.diagnostics.norm_deviation = pr.norm_deviation;
            return d;
        }
    } // namespace

    const char *power_case_name(PowerCase c)
    {
        switch (c)
        {
        case PowerCase::zero_rate: return "zero_rate";
        case PowerCase::source_only: return "source_only";
        case PowerCase::jammer_aided: return "jammer_aided";
        case PowerCase::infeasible: return "infeasible";
        }
        return "unknown";
    }

    std::pair<double, double> rate_bounds(const SimoScenario &sc, const Vec &pointing)
    {
        const double x = dest_gain(sc, pointing);
        const EveTerms t = eve_terms(sc);
        const double s = sc.sigma_e2;
        const double r1 = t.h > 0.0 ? std::log2(x * s / t.h) : inf;
        double r2;
        if (t.j <= 1e-15 * std::max(1.0, t.h))
            r2 = r1; // a jammer invisible to eve cannot lift the ceiling
        else if (t.a <= 1e-15 * std::max(1.0, t.h * t.j))
            r2 = inf;
        else
            r2 = std::log2(x * s * t.j / t.a);
        return {r1, r2};
    }

    PowerAllocation min_total_power(const SimoScenario &sc, const Vec &pointing, double r_sec_0, PowerCase *which)
    {
        if (r_sec_0 <= 0.0)
        {
            if (which)
                *which = PowerCase::zero_rate;
            return {};
        }
        const auto [r1, r2] = rate_bounds(sc, pointing);
        if (r_sec_0 >= r2)
        {
            if (which)
                *which = PowerCase::infeasible;
            throw Infeasible("required rate " + std::to_string(r_sec_0) + " is at or above R2 = " +
                             std::to_string(r2));
        }

        // Rate constraint: alpha + beta P_S + (delta - gamma P_S) P_J <= 0.
        const double x = dest_gain(sc, pointing);
        const EveTerms t = eve_terms(sc);
        const double s = sc.sigma_e2;
        const double tr = std::exp2(r_sec_0);
        const double alpha = s * (tr - 1.0);
        const double beta = tr * t.h - s * x;
        const double gamma = x * t.j - tr * t.a / s;
        const double delta = (tr - 1.0) * t.j;

        PowerAllocation best{inf, inf};
        if (beta < 0.0)
            best = {alpha / -beta, 0.0};

        // Jammer-aided branch: P_J(P_S) = (alpha + beta P_S) / (gamma P_S - delta), convex in P_S.
        if (gamma > 0.0)
        {
            const double k = alpha + beta * delta / gamma;
            if (k > 0.0)
            {
                const double ps = (delta + std::sqrt(k * gamma)) / gamma;
                const double pj = (alpha + beta * ps) / (gamma * ps - delta);
                if (pj > 0.0 && ps + pj < best.total())
                    best = {ps, pj};
            }
        }
        if (!std::isfinite(best.total()))
        {
            if (which)
                *which = PowerCase::infeasible;
            throw Infeasible("no finite power pair reaches the required rate");
        }
        if (which)
            *which = best.p_j > 0.0 ? PowerCase::jammer_aided : PowerCase::source_only;
        (void)r1;
        return best;
    }

    double rate_ratio(const SimoScenario &sc, const Vec &pointing, double p_s, double p_max)
    {
        const double x = dest_gain(sc, pointing);
        return (1.0 + x * p_s) / (1.0 + sinr_eve(sc, p_s, p_max - p_s));
    }

    RateMaxResult max_secrecy_rate(const SimoScenario &sc, const Vec &pointing, double p_max)
    {
        if (!(p_max > 0.0))
            throw std::invalid_argument("p_max must be positive");
        const double x = dest_gain(sc, pointing);
        const EveTerms t = eve_terms(sc);
        const double s = sc.sigma_e2;
        const double ap = t.a / s;
        const double l1 = s + p_max * t.j;
        const double l2 = t.h - t.j + p_max * ap;
        const double l3 = ap;
        const double l4 = x * (p_max * t.j + s) - t.j;
        const double l5 = x * t.j;
        auto f = [&](double p) { return rate_ratio(sc, pointing, p, p_max); };

        // Stationarity: l1 (l4 - l2) + 2 l1 (l3 - l5) P + (l3 l4 - l5 l2) P^2 = 0.
        const double qa = l3 * l4 - l5 * l2;
        const double qb = 2.0 * l1 * (l3 - l5);
        const double qc = l1 * (l4 - l2);
        std::vector<double> roots;
        double closed = 0.0;
        bool have_closed = false;
        const double scale = std::abs(l3 * l4) + std::abs(l5 * l2) + 1e-300;
        if (std::abs(qa) > 1e-12 * scale)
        {
            const double disc = l1 * l1 * (l3 - l5) * (l3 - l5) - l1 * qa * (l4 - l2);
            if (disc >= 0.0)
            {
                const double sq = std::sqrt(disc);
                closed = (-l1 * (l3 - l5) + sq) / qa;
                have_closed = true;
                roots = {closed, (-l1 * (l3 - l5) - sq) / qa};
            }
        }
        else if (qb != 0.0)
        {
            roots = {-qc / qb};
        }

        RateMaxResult res;
        double p_best;
        if (have_closed)
            p_best = std::clamp(closed, 0.0, p_max);
        else
        {
            p_best = p_max;
            res.fallback = true;
        }
        double f_best = f(p_best);
        std::vector<double> cand{0.0, p_max};
        for (double r : roots)
            if (r >= 0.0 && r <= p_max)
                cand.push_back(r);
        for (double c : cand)
        {
            const double fc = f(c);
            if (fc > f_best * (1.0 + 1e-13))
            {
                f_best = fc;
                p_best = c;
                res.fallback = true;
            }
        }
        res.allocation = {p_best, p_max - p_best};
        res.rate = std::max(0.0, std::log2(f_best));
        return res;
    }

    PowerAllocation min_total_power_search(const SimoScenario &sc, const Vec &pointing, double r_sec_0)
    {
        if (r_sec_0 <= 0.0)
            return {};
        const DestTerms d = dest_terms(sc, pointing);
        const EveTerms t = eve_terms(sc);
        const double tr = std::exp2(r_sec_0);
        auto ps_of = [&](double pj) {
            const double den = d.coef(pj) - tr * eve_coef(sc, t, pj);
            return den > 0.0 ? (tr - 1.0) / den : inf;
        };
        auto total = [&](double pj) { return pj + ps_of(pj); };

        // P_J = 0 plus a log grid, then golden refinement around the best grid point.
        std::vector<double> grid{0.0};
        for (int i = 0; i <= 240; ++i)
            grid.push_back(std::pow(10.0, -4.0 + 12.0 * i / 240.0));
        std::size_t ib = 0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (total(grid[i]) < total(grid[ib]))
                ib = i;
        if (!std::isfinite(total(grid[ib])))
            throw Infeasible("no jammer power on the search grid reaches the required rate");
        const double lo = grid[ib == 0 ? 0 : ib - 1];
        const double hi = grid[std::min(ib + 1, grid.size() - 1)];
        double pj = golden_min(total, lo, hi);
        if (total(grid[ib]) < total(pj))
            pj = grid[ib];
        return {ps_of(pj), pj};
    }

    RateMaxResult max_secrecy_rate_search(const SimoScenario &sc, const Vec &pointing, double p_max)
    {
        if (!(p_max > 0.0))
            throw std::invalid_argument("p_max must be positive");
        const DestTerms d = dest_terms(sc, pointing);
        const EveTerms t = eve_terms(sc);
        auto neg_ratio = [&](double ps) {
            const double pj = p_max - ps;
            return -(1.0 + ps * d.coef(pj)) / (1.0 + ps * eve_coef(sc, t, pj));
        };
        const int n = 2000;
        int ib = 0;
        double vb = neg_ratio(0.0);
        for (int i = 1; i <= n; ++i)
        {
            const double v = neg_ratio(p_max * i / n);
            if (v < vb)
            {
                vb = v;
                ib = i;
            }
        }
        const double lo = p_max * std::max(0, ib - 1) / n;
        const double hi = p_max * std::min(n, ib + 1) / n;
        double ps = golden_min(neg_ratio, lo, hi);
        if (neg_ratio(ps) > vb)
            ps = p_max * ib / n;
        RateMaxResult r;
        r.allocation = {ps, p_max - ps};
        r.rate = std::max(0.0, std::log2(-neg_ratio(ps)));
        return r;
    }

    SimoDesign design_power_min(const SimoScenario &sc, double r_sec_0, const PointingOptions &opt)
    {
        const PointingResult pr = optimize_pointing(sc, opt);
        PowerCase pc;
        const PowerAllocation alloc = min_total_power(sc, pr.p, r_sec_0, &pc);
        SimoDesign d = assemble(sc, pr, alloc);
        d.diagnostics.case_label = power_case_name(pc);
        return d;
    }

    SimoDesign design_rate_max(const SimoScenario &sc, double p_max, const PointingOptions &opt)
    {
        const PointingResult pr = optimize_pointing(sc, opt);
        const RateMaxResult rm = max_secrecy_rate(sc, pr.p, p_max);
        SimoDesign d = assemble(sc, pr, rm.allocation);
        d.diagnostics.case_label = rm.fallback ? "rate_max_fallback" : "rate_max";
        return d;
    }

} // namespace psa
