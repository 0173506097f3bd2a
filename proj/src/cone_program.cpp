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

#include "psa/cone_program.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace psa
{
    int ConeProgram::add_psd_block(int dim)
    {
        psd_dims.push_back(dim);
        return (int)psd_dims.size() - 1;
    }

    int ConeProgram::add_lp_vars(int count)
    {
        const int first = lp_dim;
        lp_dim += count;
        return first;
    }

    ConeProgram::Row &ConeProgram::add_row(double rhs)
    {
        rows.emplace_back();
        rows.back().rhs = rhs;
        return rows.back();
    }

    void ConeProgram::finalize()
    {
        c_psd.resize(psd_dims.size());
        for (size_t b = 0; b < psd_dims.size(); ++b)
            if (c_psd[b].size() == 0)
                c_psd[b] = Mat::Zero(psd_dims[b], psd_dims[b]);
        if (c_lp.size() != lp_dim)
        {
            Vec c = Vec::Zero(lp_dim);
            for (Eigen::Index i = 0; i < std::min<Eigen::Index>(c_lp.size(), lp_dim); ++i)
                c(i) = c_lp(i);
            c_lp = c;
        }
    }

    const char *status_name(SolveStatus s)
    {
        switch (s)
        {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::primal_infeasible: return "primal_infeasible";
        case SolveStatus::dual_infeasible: return "dual_infeasible";
        case SolveStatus::max_iterations: return "max_iterations";
        }
        return "unknown";
    }

    namespace
    {
        struct Coef
        {
            int row = 0;
            const Mat *dense = nullptr;
            std::vector<ConeProgram::SparseEntry> sparse;
        };

        double inner(const Coef &a, const Mat &s)
        {
            double v = 0.0;
            if (a.dense)
                v += a.dense->cwiseProduct(s).sum();
            for (const auto &e : a.sparse)
                v += (e.r == e.c) ? e.v * s(e.r, e.c) : e.v * (s(e.r, e.c) + s(e.c, e.r));
            return v;
        }

        void add_scaled(Mat &out, const Coef &a, double t)
        {
            if (a.dense)
                out.noalias() += t * (*a.dense);
            for (const auto &e : a.sparse)
            {
                out(e.r, e.c) += t * e.v;
                if (e.r != e.c)
                    out(e.c, e.r) += t * e.v;
            }
        }

        Mat w_a_w(const Coef &a, const Mat &w)
        {
            const Eigen::Index n = w.rows();
            Mat out = Mat::Zero(n, n);
            if (a.dense)
                out.noalias() = w * (*a.dense) * w;
            for (const auto &e : a.sparse)
            {
                if (e.r == e.c)
                    out.noalias() += e.v * w.col(e.r) * w.row(e.r);
                else
                {
                    out.noalias() += e.v * w.col(e.r) * w.row(e.c);
                    out.noalias() += e.v * w.col(e.c) * w.row(e.r);
                }
            }
            return out;
        }

        Mat sym(const Mat &m) { return 0.5 * (m + m.transpose()); }

        struct Scaling
        {
            Mat g, ginv, w;
            Vec lam;
        };

        bool nt_scaling(const Mat &x, const Mat &z, Scaling &s)
        {
            Eigen::LLT<Mat> lx(x), lz(z);
            if (lx.info() != Eigen::Success || lz.info() != Eigen::Success)
                return false;
            const Mat Lx = lx.matrixL();
            const Mat Lz = lz.matrixL();
            Eigen::JacobiSVD<Mat> svd(Lz.transpose() * Lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const Vec sv = svd.singularValues();
            if (sv.minCoeff() <= 0.0)
                return false;
            const Mat &V = svd.matrixV();
            const Vec isq = sv.cwiseSqrt().cwiseInverse();
            s.g = Lx * V * isq.asDiagonal();
            const Mat lxinv = Lx.triangularView<Eigen::Lower>().solve(Mat::Identity(x.rows(), x.cols()));
            s.ginv = sv.cwiseSqrt().asDiagonal() * V.transpose() * lxinv;
            s.w = s.g * s.g.transpose();
            s.lam = sv;
            return true;
        }

        // Largest step in [0, inf) keeping diag(lam) + a*d PSD.
        double max_step(const Vec &lam, const Mat &d)
        {
            const Vec is = lam.cwiseSqrt().cwiseInverse();
            Mat m = is.asDiagonal() * sym(d) * is.asDiagonal();
            Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
            const double mn = es.eigenvalues()(0);
            return (mn >= 0.0) ? std::numeric_limits<double>::infinity() : -1.0 / mn;
        }

        double max_step_lp(const Vec &x, const Vec &dx)
        {
            double a = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < x.size(); ++i)
                if (dx(i) < 0.0)
                    a = std::min(a, -x(i) / dx(i));
            return a;
        }

        struct Solver
        {
            const ConeProgram &p;
            int m = 0, nb = 0, nl = 0;
            std::vector<std::vector<Coef>> blk;
            std::vector<std::vector<std::pair<int, double>>> lpc; // per row
            Vec b;

            explicit Solver(const ConeProgram &prog) : p(prog)
            {
                m = (int)p.rows.size();
                nb = (int)p.psd_dims.size();
                nl = p.lp_dim;
                blk.assign(nb, {});
                lpc.assign(m, {});
                b.resize(m);
                for (int i = 0; i < m; ++i)
                {
                    const auto &row = p.rows[i];
                    b(i) = row.rhs;
                    std::vector<int> slot(nb, -1);
                    auto get = [&](int bi) -> Coef & {
                        if (bi < 0 || bi >= nb)
                            throw std::invalid_argument("ConeProgram: block index out of range");
                        if (slot[bi] < 0)
                        {
                            slot[bi] = (int)blk[bi].size();
                            blk[bi].push_back(Coef{});
                            blk[bi].back().row = i;
                        }
                        return blk[bi][slot[bi]];
                    };
                    for (const auto &[bi, mat] : row.dense)
                    {
                        Coef &c = get(bi);
                        if (c.dense)
                            throw std::invalid_argument("ConeProgram: duplicate dense coefficient");
                        c.dense = &mat;
                    }
                    for (const auto &e : row.sparse)
                        get(e.block).sparse.push_back(e);
                    for (const auto &[k, v] : row.lp)
                    {
                        if (k < 0 || k >= nl)
                            throw std::invalid_argument("ConeProgram: lp index out of range");
                        lpc[i].push_back({k, v});
                    }
                }
            }

            Vec apply_a(const std::vector<Mat> &x, const Vec &xl) const
            {
                Vec r = Vec::Zero(m);
                for (int bi = 0; bi < nb; ++bi)
                    for (const auto &c : blk[bi])
                        r(c.row) += inner(c, x[bi]);
                for (int i = 0; i < m; ++i)
                    for (const auto &[k, v] : lpc[i])
                        r(i) += v * xl(k);
                return r;
            }

            void apply_at(const Vec &y, std::vector<Mat> &out, Vec &outl) const
            {
                out.resize(nb);
                for (int bi = 0; bi < nb; ++bi)
                {
                    out[bi] = Mat::Zero(p.psd_dims[bi], p.psd_dims[bi]);
                    for (const auto &c : blk[bi])
                        add_scaled(out[bi], c, y(c.row));
                }
                outl = Vec::Zero(nl);
                for (int i = 0; i < m; ++i)
                    for (const auto &[k, v] : lpc[i])
                        outl(k) += v * y(i);
            }
        };
    } // namespace

    Vec cone_row_values(const ConeProgram &prog, const std::vector<Mat> &x_psd, const Vec &x_lp)
    {
        Solver s(prog);
        return s.apply_a(x_psd, x_lp);
    }

    ConeSolution solve_cone_program(const ConeProgram &prog_in, const IpmOptions &opt)
    {
        ConeProgram prog = prog_in;
        prog.finalize();
        Solver S(prog);
        const int m = S.m, nb = S.nb, nl = S.nl;
        const auto &dims = prog.psd_dims;

        double nu = nl;
        for (int d : dims)
            nu += d;

        // Norms for scaling the start point and stopping tests.
        const double bnorm = S.b.norm();
        double cnorm2 = prog.c_lp.squaredNorm();
        for (const auto &c : prog.c_psd)
            cnorm2 += c.squaredNorm();
        const double cnorm = std::sqrt(cnorm2);

        ConeSolution sol;
        std::vector<Mat> X(nb), Z(nb);
        Vec xl(nl), zl(nl);
        Vec y = Vec::Zero(m);
        for (int bi = 0; bi < nb; ++bi)
        {
            const double n = dims[bi];
            double xi = std::max(10.0, std::sqrt(n)), eta = std::max(10.0, std::sqrt(n));
            for (const auto &c : S.blk[bi])
            {
                double na = c.dense ? c.dense->norm() : 0.0;
                for (const auto &e : c.sparse)
                    na += std::abs(e.v) * (e.r == e.c ? 1.0 : std::sqrt(2.0));
                xi = std::max(xi, n * (1.0 + std::abs(S.b(c.row))) / (1.0 + na));
                eta = std::max(eta, na);
            }
            eta = std::max(eta, prog.c_psd[bi].norm());
            X[bi] = xi * Mat::Identity(dims[bi], dims[bi]);
            Z[bi] = eta * Mat::Identity(dims[bi], dims[bi]);
        }
        if (nl > 0)
        {
            Vec colnorm = Vec::Zero(nl);
            for (int i = 0; i < m; ++i)
                for (const auto &[k, v] : S.lpc[i])
                    colnorm(k) = std::max(colnorm(k), std::abs(v));
            for (int k = 0; k < nl; ++k)
            {
                double xi = 10.0, eta = std::max(10.0, std::abs(prog.c_lp(k)));
                for (int i = 0; i < m; ++i)
                    for (const auto &[kk, v] : S.lpc[i])
                        if (kk == k)
                            xi = std::max(xi, (1.0 + std::abs(S.b(i))) / (1.0 + std::abs(v)));
                eta = std::max(eta, colnorm(k));
                xl(k) = xi;
                zl(k) = eta;
            }
        }

        if (opt.trace)
            *opt.trace << "ipm_iter\tprimal_obj\tdual_obj\tgap\tprimal_res\tdual_res\tmu\n";

        std::vector<Mat> aty;
        Vec atyl;
        int stall = 0;
        SolveStatus status = SolveStatus::max_iterations;
        int it = 0;
        for (; it <= opt.max_iter; ++it)
        {
            // Residuals.
            const Vec ax = S.apply_a(X, xl);
            const Vec rp = S.b - ax;
            S.apply_at(y, aty, atyl);
            std::vector<Mat> Rd(nb);
            double rdn2 = 0.0;
            double pobj = 0.0, comp = 0.0;
            for (int bi = 0; bi < nb; ++bi)
            {
                Rd[bi] = prog.c_psd[bi] - aty[bi] - Z[bi];
                rdn2 += Rd[bi].squaredNorm();
                pobj += prog.c_psd[bi].cwiseProduct(X[bi]).sum();
                comp += X[bi].cwiseProduct(Z[bi]).sum();
            }
            Vec rdl = prog.c_lp - atyl - zl;
            rdn2 += rdl.squaredNorm();
            pobj += prog.c_lp.dot(xl);
            comp += xl.dot(zl);
            const double dobj = S.b.dot(y);
            const double mu = comp / nu;
            const double pres = rp.norm() / (1.0 + bnorm);
            const double dres = std::sqrt(rdn2) / (1.0 + cnorm);
            const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

            sol.primal_objective = pobj;
            sol.dual_objective = dobj;
            sol.primal_residual = pres;
            sol.dual_residual = dres;
            sol.gap = gap;

            if (opt.trace)
                *opt.trace << it << '\t' << std::setprecision(12) << pobj << '\t' << dobj << '\t' << gap << '\t'
                           << pres << '\t' << dres << '\t' << mu << '\n';

            if (pres <= opt.tol && dres <= opt.tol && gap <= opt.tol)
            {
                status = SolveStatus::optimal;
                break;
            }
            // Certificates of infeasibility.
            if (dobj > 0.0)
            {
                double r2 = atyl.size() ? (atyl + zl).squaredNorm() : 0.0;
                for (int bi = 0; bi < nb; ++bi)
                    r2 += (aty[bi] + Z[bi]).squaredNorm();
                if (std::sqrt(r2) / dobj < 1e-8 && dobj > 1e6 * (1.0 + cnorm))
                {
                    status = SolveStatus::primal_infeasible;
                    break;
                }
            }
            if (pobj < 0.0)
            {
                const double r = ax.norm() / (-pobj);
                if (r < 1e-8 && -pobj > 1e6 * (1.0 + bnorm))
                {
                    status = SolveStatus::dual_infeasible;
                    break;
                }
            }
            if (it == opt.max_iter)
                break;

            // Scaling.
            std::vector<Scaling> sc(nb);
            bool ok = true;
            for (int bi = 0; bi < nb && ok; ++bi)
                ok = nt_scaling(X[bi], Z[bi], sc[bi]);
            if (!ok)
                break;
            const Vec wl = xl.cwiseQuotient(zl);
            const Vec gl = wl.cwiseSqrt();
            const Vec laml = xl.cwiseProduct(zl).cwiseSqrt();

            // Schur complement.
            Mat M = Mat::Zero(m, m);
            for (int bi = 0; bi < nb; ++bi)
            {
                const auto &list = S.blk[bi];
                const Mat &W = sc[bi].w;
                for (size_t q = 0; q < list.size(); ++q)
                {
                    const Mat sq = w_a_w(list[q], W);
                    for (size_t pi = 0; pi <= q; ++pi)
                    {
                        const double v = inner(list[pi], sq);
                        const int i = list[pi].row, j = list[q].row;
                        M(i, j) += v;
                        if (i != j)
                            M(j, i) += v;
                    }
                }
            }
            for (int i = 0; i < m; ++i)
                for (const auto &[k, v] : S.lpc[i])
                    for (int j = 0; j < m; ++j)
                        for (const auto &[kk, vv] : S.lpc[j])
                            if (kk == k)
                                M(i, j) += v * wl(k) * vv;

            Eigen::LLT<Mat> llt(M);
            Eigen::LDLT<Mat> ldlt;
            bool use_llt = llt.info() == Eigen::Success;
            if (!use_llt)
            {
                Mat Mr = M;
                Mr.diagonal().array() += 1e-13 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
                llt.compute(Mr);
                use_llt = llt.info() == Eigen::Success;
                if (!use_llt)
                    ldlt.compute(Mr);
            }
            auto schur_solve = [&](const Vec &r) -> Vec { return use_llt ? Vec(llt.solve(r)) : Vec(ldlt.solve(r)); };

            // One Newton solve for a given scaled complementarity right-hand side.
            struct Dir
            {
                std::vector<Mat> dx, dz, dxs, dzs;
                Vec dxl, dzl;
                Vec dy;
            };
            auto direction = [&](const std::vector<Mat> &Rc, const Vec &Rcl) -> Dir {
                Dir d;
                std::vector<Mat> H(nb);
                Vec hl(nl);
                for (int bi = 0; bi < nb; ++bi)
                {
                    const Vec &lam = sc[bi].lam;
                    Mat D = Rc[bi];
                    for (Eigen::Index r = 0; r < D.rows(); ++r)
                        for (Eigen::Index c = 0; c < D.cols(); ++c)
                            D(r, c) = 2.0 * D(r, c) / (lam(r) + lam(c));
                    H[bi] = sc[bi].g * D * sc[bi].g.transpose() - sc[bi].w * Rd[bi] * sc[bi].w;
                }
                Vec dl(nl);
                for (int k = 0; k < nl; ++k)
                {
                    dl(k) = Rcl(k) / laml(k);
                    hl(k) = gl(k) * dl(k) - wl(k) * rdl(k);
                }
                const Vec rhs = rp - S.apply_a(H, hl);
                d.dy = schur_solve(rhs);
                std::vector<Mat> atdy;
                Vec atdyl;
                S.apply_at(d.dy, atdy, atdyl);
                d.dx.resize(nb);
                d.dz.resize(nb);
                d.dxs.resize(nb);
                d.dzs.resize(nb);
                for (int bi = 0; bi < nb; ++bi)
                {
                    d.dz[bi] = Rd[bi] - atdy[bi];
                    d.dx[bi] = sym(H[bi] + sc[bi].w * atdy[bi] * sc[bi].w);
                    d.dxs[bi] = sym(sc[bi].ginv * d.dx[bi] * sc[bi].ginv.transpose());
                    d.dzs[bi] = sym(sc[bi].g.transpose() * d.dz[bi] * sc[bi].g);
                }
                d.dzl = rdl - atdyl;
                d.dxl = hl + wl.cwiseProduct(atdyl);
                return d;
            };

            auto steps = [&](const Dir &d, double &ap, double &ad) {
                ap = std::numeric_limits<double>::infinity();
                ad = ap;
                for (int bi = 0; bi < nb; ++bi)
                {
                    ap = std::min(ap, max_step(sc[bi].lam, d.dxs[bi]));
                    ad = std::min(ad, max_step(sc[bi].lam, d.dzs[bi]));
                }
                if (nl > 0)
                {
                    ap = std::min(ap, max_step_lp(xl, d.dxl));
                    ad = std::min(ad, max_step_lp(zl, d.dzl));
                }
            };

            // Predictor.
            std::vector<Mat> Rc(nb);
            for (int bi = 0; bi < nb; ++bi)
                Rc[bi] = -Mat(sc[bi].lam.cwiseAbs2().asDiagonal());
            Vec Rcl = -laml.cwiseAbs2();
            Dir pred = direction(Rc, Rcl);
            double ap, ad;
            steps(pred, ap, ad);
            ap = std::min(1.0, ap);
            ad = std::min(1.0, ad);
            double comp_aff = 0.0;
            for (int bi = 0; bi < nb; ++bi)
                comp_aff += (X[bi] + ap * pred.dx[bi]).cwiseProduct(Z[bi] + ad * pred.dz[bi]).sum();
            if (nl > 0)
                comp_aff += (xl + ap * pred.dxl).dot(zl + ad * pred.dzl);
            const double mu_aff = comp_aff / nu;
            double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3.0);
            sigma = std::clamp(sigma, 0.0, 1.0);

            // Corrector.
            for (int bi = 0; bi < nb; ++bi)
            {
                Mat t = pred.dxs[bi] * pred.dzs[bi];
                Rc[bi] = sigma * mu * Mat::Identity(dims[bi], dims[bi]) - Mat(sc[bi].lam.cwiseAbs2().asDiagonal()) - sym(t);
            }
            for (int k = 0; k < nl; ++k)
                Rcl(k) = sigma * mu - laml(k) * laml(k) - pred.dxl(k) * pred.dzl(k);
            Dir corr = direction(Rc, Rcl);
            steps(corr, ap, ad);
            const double tau = std::max(0.9, 0.99 - 0.5 * sigma); // closer to the boundary late in the run
            ap = std::min(1.0, tau * ap);
            ad = std::min(1.0, tau * ad);

            for (int bi = 0; bi < nb; ++bi)
            {
                X[bi] = sym(X[bi] + ap * corr.dx[bi]);
                Z[bi] = sym(Z[bi] + ad * corr.dz[bi]);
            }
            if (nl > 0)
            {
                xl += ap * corr.dxl;
                zl += ad * corr.dzl;
            }
            y += ad * corr.dy;

            if (ap < 1e-9 && ad < 1e-9)
            {
                if (++stall >= 3)
                    break;
            }
            else
                stall = 0;
        }

        sol.x_psd = X;
        sol.z_psd = Z;
        sol.x_lp = xl;
        sol.z_lp = zl;
        sol.y = y;
        sol.iterations = it;
        sol.status = status;
        return sol;
    }

} // namespace psa
