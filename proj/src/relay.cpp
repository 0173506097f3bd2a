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

#include "psa/relay.hpp"

#include <cmath>
#include <exception>
#include <iomanip>
#include <optional>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "psa/errors.hpp"
#include "psa/linalg.hpp"

namespace psa
{
    namespace
    {
        // Row channels folded with the correlation root, stored as the entries of h R^1/2.
        struct Folded
        {
            CVec d; // h_RD R^1/2
            CVec e; // h_RE R^1/2
        };

        Folded fold(const RelayScenario &sc)
        {
            const CMat s = exp_correlation(sc.n_r, sc.corr_p).sqrt;
            return {s.transpose() * sc.h_rd, s.transpose() * sc.h_re};
        }

        cd row_w_col(const CVec &row, const CMat &w, const CVec &col) { return (row.transpose() * w * col)(0, 0); }

        double rowsq(const CVec &row, const CMat &w) { return (row.transpose() * w).squaredNorm(); }

        double ke_noise(const RelayScenario &sc) { return sc.ke_noise == KeNoise::sigma_d ? sc.sigma_d2 : sc.sigma_e2; }

        CMat unvec(const CVec &v, int n) { return Eigen::Map<const CMat>(v.data(), n, n); }

        double eve_phase1_snr(const RelayScenario &sc)
        {
            return sc.p_s * std::norm(sc.h_se) / (sc.sigma_e2 + sc.p_j_max * std::norm(sc.h_je));
        }
    } // namespace

    void RelayScenario::validate() const
    {
        if (n_r < 1)
            throw std::invalid_argument("n_r must be positive");
        if (!(corr_p >= 0.0 && corr_p < 1.0))
            throw std::invalid_argument("corr_p must lie in [0, 1)");
        if (!(sigma_r2 > 0.0 && sigma_d2 > 0.0 && sigma_e2 > 0.0))
            throw std::invalid_argument("noise powers must be positive");
        if (!(p_s >= 0.0 && p_r_max >= 0.0 && p_j_max >= 0.0))
            throw std::invalid_argument("power budgets must be nonnegative");
        if (h_rd.size() != n_r || h_re.size() != n_r)
            throw std::invalid_argument("relay channel rows must have n_r entries");
        if (!(spacing > 0.0))
            throw std::invalid_argument("spacing must be positive");
    }

    CorrelationMatrix exp_correlation(int n, double corr_p)
    {
        if (!(corr_p >= 0.0 && corr_p < 1.0))
            throw std::invalid_argument("corr_p must lie in [0, 1)");
        CorrelationMatrix out;
        out.r = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.r(i, j) = std::pow(corr_p, std::abs(i - j));
        out.sqrt = hermitian_sqrt(out.r);
        return out;
    }

    RelayCovariances relay_covariances(const RelayScenario &sc, const CMat &w, const Vec &pointing, double p_j1,
                                       double p_j2)
    {
        const Folded f = fold(sc);
        const CVec ad = sc.q_d().apply(pointing);
        const CVec aj = sc.q_j().apply(pointing);
        const cd ej = row_w_col(f.e, w, aj);
        const cd dj = row_w_col(f.d, w, aj);
        const double ke = p_j2 * std::norm(sc.h_je) + sc.sigma_r2 * rowsq(f.e, w) + ke_noise(sc);

        RelayCovariances c;
        c.o_e = CMat(2, 2);
        c.o_e(0, 0) = sc.sigma_e2 + p_j1 * std::norm(sc.h_je);
        c.o_e(0, 1) = p_j1 * sc.h_je * std::conj(sc.h_jr) * std::conj(ej);
        c.o_e(1, 0) = std::conj(c.o_e(0, 1));
        c.o_e(1, 1) = p_j1 * std::norm(sc.h_jr) * std::norm(ej) + ke;
        c.o_d = p_j1 * std::norm(sc.h_jr) * std::norm(dj) + p_j2 * std::norm(sc.h_jd) + sc.sigma_r2 * rowsq(f.d, w) +
                sc.sigma_d2;
        c.h_e = CVec(2);
        c.h_e << sc.h_se, row_w_col(f.e, w, ad) * sc.h_sr;
        return c;
    }

    double relay_power(const RelayScenario &sc, const CMat &w, const Vec &pointing, double p_j1)
    {
        const CVec ad = sc.q_d().apply(pointing);
        const CVec aj = sc.q_j().apply(pointing);
        return sc.p_s * std::norm(sc.h_sr) * (w * ad).squaredNorm() +
               p_j1 * std::norm(sc.h_jr) * (w * aj).squaredNorm() + sc.sigma_r2 * w.squaredNorm();
    }

    double relay_secrecy_rate(const RelayScenario &sc, const CMat &w, const Vec &pointing, double p_j1, double p_j2)
    {
        const RelayCovariances c = relay_covariances(sc, w, pointing, p_j1, p_j2);
        const Folded f = fold(sc);
        const CVec ad = sc.q_d().apply(pointing);
        const double i_d = std::log2(1.0 + sc.p_s * std::norm(sc.h_sr) * std::norm(row_w_col(f.d, w, ad)) / c.o_d);
        // Rank-one H_E: det(I + P_S H H^H O^-1) = 1 + P_S H^H O^-1 H.
        const double q = c.h_e.dot(c.o_e.ldlt().solve(c.h_e)).real();
        const double i_e = std::log2(1.0 + sc.p_s * q);
        return std::max(0.0, i_d - i_e);
    }

    double relay_nulled_objective(const RelayScenario &sc, const CMat &w, const Vec &pointing)
    {
        const Folded f = fold(sc);
        const CVec ad = sc.q_d().apply(pointing);
        const double snr_d = sc.p_s * std::norm(sc.h_sr) * std::norm(row_w_col(f.d, w, ad)) /
                             (sc.sigma_d2 + sc.sigma_r2 * rowsq(f.d, w));
        return std::log2(1.0 + snr_d) - std::log2(1.0 + eve_phase1_snr(sc));
    }

    double relay_realized_rate(const RelayScenario &sc, const CMat &w, const Vec &p_act)
    {
        const Folded f = fold(sc);
        const CVec ad = sc.q_d().apply(p_act);
        const CVec aj = sc.q_j().apply(p_act);
        const double gs = sc.p_s * std::norm(sc.h_sr);
        const double gj = sc.p_j_max * std::norm(sc.h_jr);
        const double snr_d = gs * std::norm(row_w_col(f.d, w, ad)) /
                             (gj * std::norm(row_w_col(f.d, w, aj)) + sc.sigma_r2 * rowsq(f.d, w) + sc.sigma_d2);
        const double ke = sc.sigma_r2 * rowsq(f.e, w) + ke_noise(sc);
        const double snr_e =
            eve_phase1_snr(sc) + gs * std::norm(row_w_col(f.e, w, ad)) / (gj * std::norm(row_w_col(f.e, w, aj)) + ke);
        return std::max(0.0, std::log2(1.0 + snr_d) - std::log2(1.0 + snr_e));
    }

    std::array<double, 2> relay_null_residuals(const RelayScenario &sc, const CMat &w, const Vec &pointing)
    {
        const Folded f = fold(sc);
        return {std::abs(row_w_col(f.d, w, sc.q_j().apply(pointing))),
                std::abs(row_w_col(f.e, w, sc.q_d().apply(pointing)))};
    }

    CMat optimize_w_given_p(const RelayScenario &sc, const Vec &pointing)
    {
        sc.validate();
        const int n = sc.n_r;
        const Folded f = fold(sc);
        const CVec ad = sc.q_d().apply(pointing);
        const CVec aj = sc.q_j().apply(pointing);
        if (sc.p_r_max == 0.0)
            return CMat::Zero(n, n);

        // g^H vec(W) = x W a for g = conj(a) (x) conj(x).
        auto g_of = [](const CVec &a, const CVec &x) -> CVec { return Eigen::kroneckerProduct(a.conjugate(), x.conjugate()); };
        const CVec gd = g_of(ad, f.d);
        const CVec gj = g_of(aj, f.d);
        const CVec ge = g_of(ad, f.e);
        CMat gje(2, n * n);
        gje.row(0) = gj.adjoint();
        gje.row(1) = ge.adjoint();
        const CMat b = null_space(gje);
        if (b.cols() == 0)
            throw DegenerateNullspace("relay nulls leave no beamforming freedom");
        const CVec bg = b.adjoint() * gd;
        if (bg.norm() <= 1e-12 * std::max(gd.norm(), 1e-300))
            throw DegenerateNullspace("relay nulls also cancel the desired signal at the destination");

        const CMat id = CMat::Identity(n, n);
        const CMat rd = Eigen::kroneckerProduct(CMat(ad.conjugate() * ad.transpose()), id);
        const CMat rj = Eigen::kroneckerProduct(CMat(aj.conjugate() * aj.transpose()), id);
        const CMat gb = Eigen::kroneckerProduct(id, CMat(f.d.conjugate() * f.d.transpose()));
        const CMat k = sc.p_s * std::norm(sc.h_sr) * rd + sc.p_j_max * std::norm(sc.h_jr) * rj +
                       sc.sigma_r2 * CMat::Identity(n * n, n * n);
        // The power constraint is active at the optimum, so the constant sigma_d^2 becomes sigma_d^2 w^H K w / P_R.
        const CMat m = k + (sc.p_r_max * sc.sigma_r2 / sc.sigma_d2) * gb;
        const CMat bmb = b.adjoint() * m * b;
        const CVec mu = bmb.ldlt().solve(bg);
        CVec omega = b * mu;
        const double pw = omega.dot(k * omega).real();
        omega *= std::sqrt(sc.p_r_max / pw);
        return unvec(omega, n);
    }

    PStepResult optimize_p_given_w(const RelayScenario &sc, const CMat &w, const Rank1SearchOptions &opt,
                                   const Vec *start)
    {
        sc.validate();
        const int n = sc.n_r;
        const Folded f = fold(sc);
        const CMat qd = sc.q_d().entries;
        const CMat qj = sc.q_j().entries;

        CMat pje(2, 3 * n);
        pje.row(0) = f.d.transpose() * w * qj;
        pje.row(1) = f.e.transpose() * w * qd;
        const Mat b = real_null_space(pje, opt.null_rtol);
        const int r = (int)b.cols();
        if (r == 0)
            throw Infeasible("relay pointing nulls leave no freedom");

        const double budget = sc.p_r_max - sc.sigma_r2 * w.squaredNorm();
        if (budget < 0.0)
            throw Infeasible("relay noise alone exceeds the power budget");

        const CMat dq = f.d.transpose() * w * qd;
        const CMat wqd = w * qd;
        const CMat wqj = w * qj;
        const Mat rd = b.transpose() * (dq.adjoint() * dq).real() * b;
        const Mat gpow = b.transpose() *
                         (sc.p_s * std::norm(sc.h_sr) * (wqd.adjoint() * wqd).real() +
                          sc.p_j_max * std::norm(sc.h_jr) * (wqj.adjoint() * wqj).real()) *
                         b;

        SdpProblem pr;
        pr.dim = r;
        pr.objective = rd.cast<cd>();
        for (int i = 0; i < n; ++i)
        {
            const Mat bi = (Mat(3, r) << b.row(i), b.row(n + i), b.row(2 * n + i)).finished();
            if (bi.squaredNorm() <= 1e-20)
                throw Infeasible("relay antenna " + std::to_string(i) + " has no admissible pointing");
            pr.add_eq((bi.transpose() * bi).cast<cd>(), 1.0);
        }
        pr.add_ineq(gpow.cast<cd>(), budget);

        std::optional<CVec> hint;
        if (start && start->size() == 3 * n)
        {
            const Vec c = b.transpose() * *start;
            const double scale = std::max(1.0, budget);
            if ((b * c - *start).norm() <= 1e-9 * start->norm() && c.dot(gpow * c) <= budget + 1e-9 * scale)
                hint = c.cast<cd>();
        }
        Rank1MaxResult mr = maximize_rank1(pr, opt, hint ? &*hint : nullptr);
        PStepResult out;
        out.p = b * mr.rank1.vector.real();
        out.gamma_star = mr.gamma_star;
        out.gamma_up = mr.gamma_up;
        out.rank1_gap = mr.rank1.gap;
        out.f_trace = mr.rank1.f_trace;
        return out;
    }

    RelayDesign alternating_secrecy_max(const RelayScenario &sc, const Vec &p0, const AlternatingOptions &opt)
    {
        sc.validate();
        if (p0.size() != 3 * sc.n_r)
            throw std::invalid_argument("initial pointing has the wrong length");
        for (int i = 0; i < sc.n_r; ++i)
            if (std::abs(element_block(p0, i).norm() - 1.0) > 1e-6)
                throw std::invalid_argument("initial pointing must have unit per-antenna blocks");

        const Folded f = fold(sc);
        const CMat qd = sc.q_d().entries;
        auto dest_gain = [&](const CMat &w, const Vec &p) { return std::norm(row_w_col(f.d, w, qd * p)); };

        if (opt.trace)
            *opt.trace << "outer_iter\tobjective\tres_w_jam\tres_w_leak\tres_p_jam\tres_p_leak\trelay_power\n";

        RelayDesign d;
        Vec p = p0;
        Vec p_prev = p0;
        CMat w;
        for (int l = 1; l <= opt.max_outer; ++l)
        {
            w = optimize_w_given_p(sc, p);
            p_prev = p;
            const PStepResult ps = optimize_p_given_w(sc, w, opt.pstep, &p_prev);
            // p_prev is feasible for this step; keep it if the new pointing does not improve the gain.
            if (dest_gain(w, ps.p) >= dest_gain(w, p_prev))
            {
                p = ps.p;
                d.diagnostics.rank1_gap = ps.rank1_gap;
            }
            const double obj = relay_nulled_objective(sc, w, p);
            d.objective_trace.push_back(obj);
            d.diagnostics.outer_iterations = l;

            const auto rw = relay_null_residuals(sc, w, p_prev);
            const auto rp = relay_null_residuals(sc, w, p);
            d.diagnostics.residuals = {rw[0], rw[1], rp[0], rp[1]};
            d.diagnostics.relay_power = relay_power(sc, w, p, sc.p_j_max);
            if (opt.trace)
                *opt.trace << l << '\t' << std::setprecision(12) << obj << '\t' << rw[0] << '\t' << rw[1] << '\t'
                           << rp[0] << '\t' << rp[1] << '\t' << d.diagnostics.relay_power << '\n';

            if (l >= 2)
            {
                const double prev = d.objective_trace[l - 2];
                if (std::abs(obj - prev) < opt.rel_tol * std::max(std::abs(prev), 1e-12))
                {
                    d.diagnostics.converged = true;
                    break;
                }
            }
        }
        d.w = w;
        d.pointing = p;
        d.secrecy_rate = std::max(0.0, d.objective_trace.back());
        return d;
    }

    RelayDesign alternating_multistart(const RelayScenario &sc, const std::vector<Vec> &starts,
                                       const AlternatingOptions &opt)
    {
        if (starts.empty())
            throw std::invalid_argument("multistart needs at least one start");
        std::optional<RelayDesign> best;
        std::exception_ptr first_error;
        for (std::size_t i = 0; i < starts.size(); ++i)
        {
            try
            {
                RelayDesign d = alternating_secrecy_max(sc, starts[i], opt);
                d.diagnostics.start_index = (int)i;
                if (!best || d.objective_trace.back() > best->objective_trace.back())
                    best = std::move(d);
            }
            catch (const PsaError &)
            {
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
        if (!best)
            std::rethrow_exception(first_error);
        return *best;
    }

    RelayDesign fixed_pointing_design(const RelayScenario &sc, const Vec &pointing)
    {
        RelayDesign d;
        d.w = optimize_w_given_p(sc, pointing);
        d.pointing = pointing;
        const double obj = relay_nulled_objective(sc, d.w, pointing);
        d.objective_trace = {obj};
        d.secrecy_rate = std::max(0.0, obj);
        const auto r = relay_null_residuals(sc, d.w, pointing);
        d.diagnostics.residuals = {r[0], r[1], r[0], r[1]};
        d.diagnostics.relay_power = relay_power(sc, d.w, pointing, sc.p_j_max);
        d.diagnostics.outer_iterations = 1;
        d.diagnostics.converged = true;
        return d;
    }

} // namespace psa
