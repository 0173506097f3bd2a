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
#ifndef PSA_TEST_SUPPORT_HPP
#define PSA_TEST_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "psa/em_core.hpp"
#include "psa/simo.hpp"

// Helpers shared by the unit tests and the acceptance binary. Everything here is written from the
// model definitions and does not call into the library's numerics.
namespace psa_test
{
    using cd = std::complex<double>;
    using psa::CMat;
    using psa::CVec;
    using psa::Mat;
    using psa::Vec;

    inline cd cn(std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        const double re = g(rng);
        const double im = g(rng);
        return {re, im};
    }

    inline CVec cn_vec(std::mt19937_64 &rng, int n)
    {
        CVec v(n);
        for (int i = 0; i < n; ++i)
            v(i) = cn(rng);
        return v;
    }

    inline double uniform(std::mt19937_64 &rng, double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }

    // Electric part of the incident field for (theta, phi, alpha, beta) in radians, built from the
    // field basis vectors directly.
    inline Eigen::Vector3cd electric_field(double theta, double phi, double alpha, double beta)
    {
        const Eigen::Vector3d eh(-std::sin(theta), std::cos(theta), 0.0);
        const Eigen::Vector3d ev(std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta), -std::sin(phi));
        const cd l1 = std::cos(beta), l2 = cd(0.0, std::sin(beta));
        const cd c1 = std::cos(alpha) * l1 - std::sin(alpha) * l2;
        const cd c2 = std::sin(alpha) * l1 + std::cos(alpha) * l2;
        return eh.cast<cd>() * c1 + ev.cast<cd>() * c2;
    }

    // Array response element by element: phase of element n times the dipole projection.
    inline CVec response(double theta, double phi, double alpha, double beta, const Vec &p, double spacing = 0.5)
    {
        const int n = (int)p.size() / 3;
        const Eigen::Vector3cd e = electric_field(theta, phi, alpha, beta);
        CVec a(n);
        for (int i = 0; i < n; ++i)
        {
            const Eigen::Vector3d pn(p(i), p(n + i), p(2 * n + i));
            const cd u = std::polar(1.0, 2.0 * psa::pi * spacing * i * std::sin(phi) * std::sin(theta));
            a(i) = u * (pn.cast<cd>().transpose() * e)(0); // sum_k p_k e_k
        }
        return a;
    }

    // Largest per-element gain |e_d . v|^2 over unit real v orthogonal to Re e_j and Im e_j.
    inline double nulled_element_gain(const Eigen::Vector3cd &ed, const Eigen::Vector3cd &ej)
    {
        Eigen::Matrix<double, 2, 3> a;
        a.row(0) = ej.real().transpose();
        a.row(1) = ej.imag().transpose();
        Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(a, Eigen::ComputeFullV);
        const auto &s = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < 2; ++i)
            if (s(i) > 1e-12 * std::max(1.0, s(0)))
                ++rank;
        const Eigen::MatrixXd nb = svd.matrixV().rightCols(3 - rank);
        const Eigen::MatrixXd m = nb.transpose() * (ed.conjugate() * ed.transpose()).real() * nb;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        return es.eigenvalues()(es.eigenvalues().size() - 1);
    }

    // Scalar SIMO model with the jammer nulled at the destination, written out directly.
    struct SimoOracle
    {
        double x;  // SINR_D / P_S
        double h;  // ||h_SE||^2
        double j;  // ||h_JE||^2
        double c2; // |h_SE^H h_JE|^2
        double se; // sigma_e^2

        SimoOracle(const psa::SimoScenario &sc, const Vec &p)
        {
            const CVec a = response(sc.desired.theta, sc.desired.phi, sc.desired.alpha, sc.desired.beta, p, sc.spacing);
            x = std::norm(sc.h_sd) * a.squaredNorm() / sc.sigma2;
            h = sc.h_se.squaredNorm();
            j = sc.h_je.squaredNorm();
            c2 = std::norm(sc.h_se.dot(sc.h_je));
            se = sc.sigma_e2;
        }
        double sinr_e(double ps, double pj) const { return ps / se * (h - pj * c2 / (se + pj * j)); }
        double rate(double ps, double pj) const { return std::log2((1.0 + ps * x) / (1.0 + sinr_e(ps, pj))); }
        double r2() const { return std::log2(x * se / (h - c2 / j)); }
    };

    // Smallest P_S + P_J over a 400 x 400 log grid meeting the rate, or +inf.
    inline double grid_min(const SimoOracle &o, double r, double ps_lo, double ps_hi, double pj_lo, double pj_hi,
                           bool pj_zero, double *best_ps = nullptr, double *best_pj = nullptr)
    {
        const int n = 400;
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < n; ++a)
        {
            const double ps = ps_lo * std::pow(ps_hi / ps_lo, a / (n - 1.0));
            for (int b = -1; b < n; ++b)
            {
                if (b < 0 && !pj_zero)
                    continue;
                const double pj = b < 0 ? 0.0 : pj_lo * std::pow(pj_hi / pj_lo, b / (n - 1.0));
                if (ps + pj < best && o.rate(ps, pj) >= r)
                {
                    best = ps + pj;
                    if (best_ps)
                        *best_ps = ps;
                    if (best_pj)
                        *best_pj = pj;
                }
            }
        }
        return best;
    }

    // Coarse grid over a wide box, then a second grid zoomed on the coarse winner.
    inline double refined_grid_min(const SimoOracle &o, double r)
    {
        double ps = 0.0, pj = 0.0;
        const double coarse = grid_min(o, r, 1e-4, 1e8, 1e-4, 1e8, true, &ps, &pj);
        if (!std::isfinite(coarse))
            return coarse;
        const double f = 1.2;
        const double pj_lo = pj > 0.0 ? pj / f : 1e-4, pj_hi = pj > 0.0 ? pj * f : 1e-4 * f;
        return std::min(coarse, grid_min(o, r, ps / f, ps * f, pj_lo, pj_hi, true));
    }
} // namespace psa_test

#endif
