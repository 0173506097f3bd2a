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
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "psa/bisection.hpp"
#include "psa/cone_program.hpp"
#include "psa/errors.hpp"
#include "psa/linalg.hpp"
#include "psa/relay.hpp"

namespace psa
{
    void ErrorEllipsoid::validate() const
    {
        if (c.rows() != c.cols() || c.rows() == 0)
            throw std::invalid_argument("ellipsoid shape must be square");
        if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, c.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("ellipsoid shape must be symmetric");
        if (!(lambda_min(c) > 0.0))
            throw std::invalid_argument("ellipsoid shape must be positive definite");
    }

    Vec ErrorEllipsoid::sample(std::mt19937_64 &rng, bool on_surface) const
    {
        const int d = (int)c.rows();
        std::normal_distribution<double> nd(0.0, 1.0);
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        Vec z(d);
        for (int i = 0; i < d; ++i)
            z(i) = nd(rng);
        z.normalize();
        if (!on_surface)
            z *= std::pow(ud(rng), 1.0 / d);
        // C = L L^T, dp = L^-T z gives dp' C dp = |z|^2.
        const Eigen::LLT<Mat> llt(c);
        return llt.matrixU().solve(z);
    }

    namespace
    {
        // One LMI entry as tr(H X) + coef_u * u + constant, X the lifted Hermitian variable.
        struct Entry
        {
            CMat h;
            double coef_u = 0.0;
            double constant = 0.0;
        };

        struct Lmi
        {
            int dim = 0;
            std::vector<Entry> entries; // upper triangle, row-major over (m <= n)
            Entry &at(int m, int n) { return entries[m * dim - m * (m - 1) / 2 + (n - m)]; }
        };

        CMat herm_part(const CMat &a) { return 0.5 * (a + a.adjoint()); }

        struct RobustModel
        {
            int r = 0;        // reduced dimension of vec(W)
            double scale = 1; // X = scale * X'
            CMat basis;       // vec(W) = basis * w
            Lmi lmi1, lmi2;
        };

        // Real parts of (A^H A)_{mn} for A = M w, as Hermitian forms in X = w w^H, with p folded in.
        struct QuadRows
        {
            std::vector<CMat> rows; // rows of M (1 x r each) or blocks T_m (N x r)
            CMat pfold;             // sum_n p_n rows[n]
        };

        CMat pair_form(const CMat &a, const CMat &b) { return herm_part(a.adjoint() * b); }

        RobustModel build(const RelayScenario &sc, const Vec &p, const Mat &cshape, double gamma, double null_rtol)
        {
            const int n = sc.n_r;
            const int d = 3 * n;
            const CMat s = exp_correlation(n, sc.corr_p).sqrt;
            const CVec xd = s.transpose() * sc.h_rd;
            const CVec xe = s.transpose() * sc.h_re;
            const CMat qd = sc.q_d().entries;
            const CMat qj = sc.q_j().entries;

            RobustModel m;
            const CMat leak = Eigen::kroneckerProduct(CMat(qd.transpose()), CMat(xe.transpose()));
            m.basis = null_space(leak, null_rtol);
            m.r = (int)m.basis.cols();
            if (m.r == 0)
                throw Infeasible("leakage null leaves no relay freedom");
            m.scale = sc.p_r_max / sc.sigma_r2;

            const CMat id = CMat::Identity(n, n);
            auto scalar_rows = [&](const CMat &q) {
                QuadRows qr;
                const CMat mm = CMat(Eigen::kroneckerProduct(CMat(q.transpose()), CMat(xd.transpose()))) * m.basis;
                for (int i = 0; i < d; ++i)
                    qr.rows.push_back(mm.row(i));
                qr.pfold = p.cast<cd>().transpose() * mm;
                return qr;
            };
            auto block_rows = [&](const CMat &q) {
                QuadRows qr;
                for (int i = 0; i < d; ++i)
                    qr.rows.push_back(CMat(Eigen::kroneckerProduct(CMat(q.col(i).transpose()), id)) * m.basis);
                const CVec qp = q * p.cast<cd>();
                qr.pfold = CMat(Eigen::kroneckerProduct(CMat(qp.transpose()), id)) * m.basis;
                return qr;
            };
            const QuadRows ad = scalar_rows(qd), aj = scalar_rows(qj);
            const QuadRows td = block_rows(qd), tj = block_rows(qj);

            const double gs = sc.p_s * std::norm(sc.h_sr);
            const double gj = sc.p_j_max * std::norm(sc.h_jr);
            const double eve = sc.p_s * std::norm(sc.h_se) / (sc.sigma_e2 + sc.p_j_max * std::norm(sc.h_je));
            const double a = std::exp2(gamma) * (1.0 + eve) - 1.0;
            const CMat gb = Eigen::kroneckerProduct(id, CMat(xd.conjugate() * xd.transpose()));
            const CMat gbr = m.basis.adjoint() * gb * m.basis;
            const CMat bb = m.basis.adjoint() * m.basis;

            for (Lmi *l : {&m.lmi1, &m.lmi2})
            {
                l->dim = d + 1;
                l->entries.assign((d + 1) * (d + 2) / 2, Entry{CMat::Zero(m.r, m.r), 0.0, 0.0});
            }
            for (int i = 0; i < d; ++i)
            {
                for (int k = i; k < d; ++k)
                {
                    Entry &e1 = m.lmi1.at(i, k);
                    e1.h = gs * pair_form(ad.rows[i], ad.rows[k]) - a * gj * pair_form(aj.rows[i], aj.rows[k]);
                    e1.coef_u = cshape(i, k);
                    Entry &e2 = m.lmi2.at(i, k);
                    e2.h = -(gs * pair_form(td.rows[i], td.rows[k]) + gj * pair_form(tj.rows[i], tj.rows[k]));
                    e2.coef_u = cshape(i, k);
                }
                m.lmi1.at(i, d).h = gs * pair_form(ad.rows[i], ad.pfold) - a * gj * pair_form(aj.rows[i], aj.pfold);
                m.lmi2.at(i, d).h = -(gs * pair_form(td.rows[i], td.pfold) + gj * pair_form(tj.rows[i], tj.pfold));
            }
            Entry &c1 = m.lmi1.at(d, d);
            c1.h = gs * pair_form(ad.pfold, ad.pfold) - a * gj * pair_form(aj.pfold, aj.pfold) - a * sc.sigma_r2 * herm_part(gbr);
            c1.coef_u = -1.0;
            c1.constant = -a * sc.sigma_d2;
            Entry &c2 = m.lmi2.at(d, d);
            c2.h = -(gs * pair_form(td.pfold, td.pfold) + gj * pair_form(tj.pfold, tj.pfold)) - sc.sigma_r2 * herm_part(bb);
            c2.coef_u = -1.0;
            c2.constant = sc.p_r_max;
            return m;
        }

        // Blocks: 0 = embedded X', 1 = Z1, 2 = Z2; LP: u1, u2 and, in phase one, the margin t.
        ConeProgram to_cone(const RobustModel &m, bool phase_one, double shift, const CMat &penalty)
        {
            ConeProgram cp;
            cp.add_psd_block(2 * m.r);
            cp.add_psd_block(m.lmi1.dim);
            cp.add_psd_block(m.lmi2.dim);
            cp.add_lp_vars(phase_one ? 3 : 2);
            int bi = 1;
            for (const Lmi *l : {&m.lmi1, &m.lmi2})
            {
                const int u = bi - 1;
                int idx = 0;
                for (int i = 0; i < l->dim; ++i)
                    for (int k = i; k < l->dim; ++k, ++idx)
                    {
                        const Entry &e = l->entries[idx];
                        // Z_ik - tr(H X) - coef_u u [+ t delta_ik] = constant [+ shift delta_ik]
                        const Mat hy = -0.5 * m.scale * embed_hermitian(e.h);
                        const double rn = std::max(1.0, hy.cwiseAbs().maxCoeff());
                        auto &row = cp.add_row((e.constant + ((phase_one && i == k) ? shift : 0.0)) / rn);
                        row.sparse.push_back({bi, i, k, (i == k ? 1.0 : 0.5) / rn});
                        row.dense.emplace_back(0, hy / rn);
                        if (e.coef_u != 0.0)
                            row.lp.emplace_back(u, -e.coef_u / rn);
                        if (phase_one && i == k)
                            row.lp.emplace_back(2, 1.0 / rn);
                    }
                ++bi;
            }
            cp.finalize();
            if (phase_one)
                cp.c_lp(2) = -1.0;
            else
                cp.c_psd[0] = 0.5 * embed_hermitian(penalty);
            return cp;
        }

        struct Attempt
        {
            bool ok = false;
            CMat x; // normalized lifted variable
            double u1 = 0.0, u2 = 0.0, gap = 0.0;
        };

        Attempt try_gamma(const RelayScenario &sc, const Vec &p, const Mat &cshape, double gamma,
                          const RobustOptions &opt)
        {
            Attempt at;
            const RobustModel m = build(sc, p, cshape, gamma, opt.null_rtol);
            const double eve = sc.p_s * std::norm(sc.h_se) / (sc.sigma_e2 + sc.p_j_max * std::norm(sc.h_je));
            const double a = std::exp2(gamma) * (1.0 + eve) - 1.0;
            const double shift = a * sc.sigma_d2 + 1.0;

            IpmOptions io;
            io.tol = opt.penalty.sdp.tol;
            io.max_iter = opt.penalty.sdp.max_iter;
            const ConeSolution ph = solve_cone_program(to_cone(m, true, shift, CMat()), io);
            if (ph.status != SolveStatus::optimal || ph.x_lp(2) < shift - 1e-7 * (1.0 + shift))
                return at;

            CMat x = extract_hermitian(ph.x_psd[0]);
            double gap = rank1_gap(x);
            double u1 = ph.x_lp(0), u2 = ph.x_lp(1);
            for (int t = 0; t < opt.penalty.max_iter && gap > opt.penalty.rank1_tol; ++t)
            {
                const CVec v = top_eig(x).second;
                const CMat pen = CMat::Identity(m.r, m.r) - v * v.adjoint();
                const ConeSolution cs = solve_cone_program(to_cone(m, false, 0.0, pen), io);
                if (cs.status != SolveStatus::optimal)
                    return at;
                const CMat xn = extract_hermitian(cs.x_psd[0]);
                const double gn = rank1_gap(xn);
                if (gn > opt.penalty.rank1_tol && gap - gn < 1e-12)
                    return at;
                x = xn;
                gap = gn;
                u1 = cs.x_lp(0);
                u2 = cs.x_lp(1);
            }
            if (gap > opt.penalty.rank1_tol)
                return at;
            at.ok = true;
            at.x = x;
            at.u1 = u1;
            at.u2 = u2;
            at.gap = gap;
            return at;
        }
    } // namespace

    RobustDesign robust_beamformer(const RelayScenario &sc, const RelayDesign &nominal, const ErrorEllipsoid &ellipsoid,
                                   const RobustOptions &opt)
    {
        sc.validate();
        ellipsoid.validate();
        const Vec &p = nominal.pointing;
        if (ellipsoid.c.rows() != p.size())
            throw std::invalid_argument("ellipsoid dimension must match the pointing vector");

        RobustDesign out;
        out.gamma_up = std::max(0.0, nominal.secrecy_rate);
        Attempt best;
        auto feasible = [&](double g) {
            ++out.feasibility_tests;
            Attempt at = try_gamma(sc, p, ellipsoid.c, g, opt);
            if (at.ok && (!best.ok || g >= out.worst_case_rate))
            {
                best = at;
                out.worst_case_rate = g;
            }
            return at.ok;
        };
        try
        {
            bisection(0.0, out.gamma_up, feasible, opt.gamma_resolution);
        }
        catch (const InvalidBracket &)
        {
            throw Infeasible("robust constraints admit no rank-one point even at zero secrecy rate");
        }

        const RobustModel m = build(sc, p, ellipsoid.c, out.worst_case_rate, opt.null_rtol);
        auto [lmax, v] = top_eig(best.x);
        const CVec w = std::sqrt(std::max(0.0, lmax) * m.scale) * v;
        const CVec omega = m.basis * w;
        out.w_rb = Eigen::Map<const CMat>(omega.data(), sc.n_r, sc.n_r);
        out.u1 = best.u1;
        out.u2 = best.u2;
        out.rank1_gap = best.gap;
        const CMat s = exp_correlation(sc.n_r, sc.corr_p).sqrt;
        const CVec xe = s.transpose() * sc.h_re;
        out.leakage_residual = (xe.transpose() * out.w_rb * sc.q_d().entries).cwiseAbs().maxCoeff();
        return out;
    }

} // namespace psa
