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

#include "psa/simo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "psa/errors.hpp"
#include "psa/linalg.hpp"

namespace psa
{
    void SimoScenario::validate() const
    {
        if (n_d < 1 || n_e < 1)
            throw std::invalid_argument("antenna counts must be positive");
        if (!(sigma2 > 0.0) || !(sigma_e2 > 0.0))
            throw std::invalid_argument("noise powers must be positive");
        if (h_se.size() != n_e || h_je.size() != n_e)
            throw std::invalid_argument("eavesdropper channels must have n_e entries");
        if (!(spacing > 0.0))
            throw std::invalid_argument("spacing must be positive");
    }

    CVec eve_beamformer(const SimoScenario &sc, double p_j)
    {
        const CMat k = p_j * sc.h_je * sc.h_je.adjoint() + sc.sigma_e2 * CMat::Identity(sc.n_e, sc.n_e);
        CVec w = k.ldlt().solve(sc.h_se);
        const double nw = w.norm();
        if (nw == 0.0)
            return CVec::Unit(sc.n_e, 0);
        w /= nw;
        fix_phase(w);
        return w;
    }

    double sinr_eve(const SimoScenario &sc, double p_s, double p_j)
    {
        if (p_s == 0.0)
            return 0.0;
        const CMat k = p_j * sc.h_je * sc.h_je.adjoint() + sc.sigma_e2 * CMat::Identity(sc.n_e, sc.n_e);
        return p_s * sc.h_se.dot(k.ldlt().solve(sc.h_se)).real();
    }

    double sinr_destination(const SimoScenario &sc, const Vec &pointing, const CVec &w, double p_s, double p_j)
    {
        const CVec ad = sc.q_d().apply(pointing);
        const CVec aj = sc.q_j().apply(pointing);
        const double sig = p_s * std::norm(sc.h_sd) * std::norm(w.dot(ad));
        const double intf = p_j * std::norm(sc.h_jd) * std::norm(w.dot(aj)) + sc.sigma2 * w.squaredNorm();
        return sig / intf;
    }

    double sinr_destination(const SimoScenario &sc, const SimoDesign &design)
    {
        return sinr_destination(sc, design.pointing, design.dest_beamformer, design.allocation.p_s,
                                design.allocation.p_j);
    }

    double secrecy_from_sinr(double sinr_d, double sinr_e)
    {
        return std::max(0.0, std::log2(1.0 + sinr_d) - std::log2(1.0 + sinr_e));
    }

    double secrecy_rate(const SimoScenario &sc, const SimoDesign &design)
    {
        return secrecy_from_sinr(sinr_destination(sc, design),
                                 sinr_eve(sc, design.allocation.p_s, design.allocation.p_j));
    }

    CVec dest_beamformer(const Vec &pointing, const ManifoldMatrix &q_d)
    {
        CVec a = q_d.apply(pointing);
        const double na = a.norm();
        if (na <= 1e-12)
            throw DegenerateManifold("||Q_d p|| vanishes");
        return a / na;
    }

    CVec mvdr_beamformer(const SimoScenario &sc, const Vec &pointing, double p_j)
    {
        const CVec ad = sc.q_d().apply(pointing);
        const CVec aj = sc.q_j().apply(pointing);
        if (ad.norm() <= 1e-12)
            throw DegenerateManifold("||Q_d p|| vanishes");
        const CMat k = p_j * std::norm(sc.h_jd) * aj * aj.adjoint() + sc.sigma2 * CMat::Identity(sc.n_d, sc.n_d);
        CVec w = k.ldlt().solve(ad);
        return w / w.norm();
    }

    double dest_gain(const SimoScenario &sc, const Vec &pointing)
    {
        return std::norm(sc.h_sd) * sc.q_d().apply(pointing).squaredNorm() / sc.sigma2;
    }

    PointingResult optimize_pointing(const SimoScenario &sc, const PointingOptions &opt)
    {
        sc.validate();
        const int n = sc.n_d;
        const CMat qd = sc.q_d().entries;
        const CMat qj = sc.q_j().entries;

        // p = B p_hat keeps Q_j p = 0 exactly; the SDP lives on the reduced coordinates.
        const Mat b = real_null_space(qj, opt.null_rtol);
        const int r = (int)b.cols();
        if (r == 0)
            throw Infeasible("jammer null leaves no pointing freedom");
        for (int i = 0; i < n; ++i)
        {
            const double rows = b.row(i).squaredNorm() + b.row(n + i).squaredNorm() + b.row(2 * n + i).squaredNorm();
            if (rows <= 1e-20)
                throw Infeasible("antenna " + std::to_string(i) + " cannot null the jammer with a unit pointing");
        }

        const Mat rd = b.transpose() * (qd.adjoint() * qd).real() * b;
        const CMat rdc = rd.cast<cd>();
        std::vector<CMat> fn(n);
        for (int i = 0; i < n; ++i)
        {
            const Mat bi = (Mat(3, r) << b.row(i), b.row(n + i), b.row(2 * n + i)).finished();
            fn[i] = (bi.transpose() * bi).cast<cd>();
        }

        SdpProblem base;
        base.dim = r;
        base.objective = rdc;
        for (int i = 0; i < n; ++i)
            base.add_eq(fn[i], 1.0);
        Rank1MaxResult mr = maximize_rank1(base, opt);

        PointingResult out;
        out.gamma_up = mr.gamma_up;
        out.gamma_star = mr.gamma_star;
        out.rank1 = std::move(mr.rank1);

        // Per-antenna blocks stay in the per-antenna null planes, so renormalizing them keeps the null exact.
        Vec phat = out.rank1.vector.real();
        Vec p = b * phat;
        for (int i = 0; i < n; ++i)
        {
            Eigen::Vector3d v = element_block(p, i);
            out.norm_deviation = std::max(out.norm_deviation, std::abs(v.norm() - 1.0));
            set_element_block(p, i, v.normalized());
        }
        out.p = p;
        out.null_residual = (qj * p).squaredNorm();
        return out;
    }

} // namespace psa
