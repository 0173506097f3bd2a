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

#include "psa/em_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psa
{
    DoaPoa DoaPoa::degrees(double theta, double phi, double alpha, double beta)
    {
        return DoaPoa{deg2rad(theta), deg2rad(phi), deg2rad(alpha), deg2rad(beta)};
    }

    bool DoaPoa::in_range() const
    {
        const double eps = 1e-12;
        return theta >= -eps && theta <= pi + eps && phi >= -eps && phi <= pi + eps &&
               std::abs(alpha) <= pi / 2 + eps && std::abs(beta) <= pi / 4 + eps;
    }

    void PsaGeometry::validate() const
    {
        if (n_antennas < 1)
            throw std::invalid_argument("PsaGeometry: n_antennas must be >= 1");
        if (!(spacing > 0.0))
            throw std::invalid_argument("PsaGeometry: spacing must be > 0");
        if ((int)pointing_angles.size() != n_antennas)
            throw std::invalid_argument("PsaGeometry: need one pointing pair per antenna");
    }

    Mat62 steering_matrix(const DoaPoa &doa)
    {
        const double st = std::sin(doa.theta), ct = std::cos(doa.theta);
        const double sp = std::sin(doa.phi), cp = std::cos(doa.phi);
        Mat62 xi;
        xi << -st, cp * ct,
            ct, cp * st,
            0.0, -sp,
            cp * ct, st,
            cp * st, -ct,
            -sp, 0.0;
        return xi;
    }

    Eigen::Vector2cd polarization_vector(double alpha, double beta)
    {
        Eigen::Matrix2d r;
        r << std::cos(alpha), -std::sin(alpha),
            std::sin(alpha), std::cos(alpha);
        Eigen::Vector2cd l(cd(std::cos(beta), 0.0), cd(0.0, std::sin(beta)));
        return r.cast<cd>() * l;
    }

    CVec6 em_signal_vector(const DoaPoa &doa)
    {
        return steering_matrix(doa).cast<cd>() * polarization_vector(doa.alpha, doa.beta);
    }

    CMat space_phase(const DoaPoa &doa, int n_antennas, double spacing)
    {
        CMat u = CMat::Zero(n_antennas, n_antennas);
        const double k = pi * (spacing / 0.5) * std::sin(doa.phi) * std::sin(doa.theta);
        for (int n = 0; n < n_antennas; ++n)
            u(n, n) = std::polar(1.0, k * n);
        return u;
    }

    ManifoldMatrix manifold_matrix(const DoaPoa &doa, int n_antennas, double spacing)
    {
        const CVec6 s = em_signal_vector(doa);
        const CMat u = space_phase(doa, n_antennas, spacing);
        ManifoldMatrix q;
        q.source = doa;
        q.entries = CMat::Zero(n_antennas, 3 * n_antennas);
        for (int b = 0; b < 3; ++b)
            q.entries.block(0, b * n_antennas, n_antennas, n_antennas) = u * s(b);
        return q;
    }

    Vec pointing_to_p(const PsaGeometry &geometry)
    {
        geometry.validate();
        const int n = geometry.n_antennas;
        Vec p(3 * n);
        for (int i = 0; i < n; ++i)
        {
            const auto [te, pe] = geometry.pointing_angles[i];
            p(i) = geometry.gain * std::sin(pe) * std::cos(te);
            p(n + i) = geometry.gain * std::sin(pe) * std::sin(te);
            p(2 * n + i) = geometry.gain * std::cos(pe);
        }
        return p;
    }

    std::vector<std::pair<double, double>> p_to_angles(const Vec &p)
    {
        if (p.size() % 3 != 0)
            throw std::invalid_argument("p_to_angles: length must be a multiple of 3");
        const int n = (int)p.size() / 3;
        std::vector<std::pair<double, double>> out(n);
        for (int i = 0; i < n; ++i)
        {
            const Eigen::Vector3d v = element_block(p, i).normalized();
            const double phi = std::acos(std::clamp(v.z(), -1.0, 1.0));
            const double theta = (std::hypot(v.x(), v.y()) > 1e-14) ? std::atan2(v.y(), v.x()) : 0.0;
            out[i] = {theta, phi};
        }
        return out;
    }

    Vec uniform_pointing(int n_antennas, const Eigen::Vector3d &direction)
    {
        const Eigen::Vector3d d = direction.normalized();
        Vec p(3 * n_antennas);
        for (int i = 0; i < n_antennas; ++i)
            set_element_block(p, i, d);
        return p;
    }

    Eigen::Vector3d element_block(const Vec &p, int n)
    {
        const int N = (int)p.size() / 3;
        return Eigen::Vector3d(p(n), p(N + n), p(2 * N + n));
    }

    void set_element_block(Vec &p, int n, const Eigen::Vector3d &v)
    {
        const int N = (int)p.size() / 3;
        p(n) = v.x();
        p(N + n) = v.y();
        p(2 * N + n) = v.z();
    }

    PointingConstraintSet constraint_matrices(int n_antennas)
    {
        if (n_antennas < 1)
            throw std::invalid_argument("constraint_matrices: n_antennas must be >= 1");
        PointingConstraintSet set;
        set.matrices.reserve(n_antennas);
        for (int n = 0; n < n_antennas; ++n)
        {
            Mat f = Mat::Zero(3 * n_antennas, 3 * n_antennas);
            for (int b = 0; b < 3; ++b)
                f(b * n_antennas + n, b * n_antennas + n) = 1.0;
            set.matrices.push_back(std::move(f));
        }
        return set;
    }

    double polarization_distance(const DoaPoa &a, const DoaPoa &b)
    {
        const double c = std::cos(2 * a.beta) * std::cos(2 * b.beta) * std::cos(2 * (a.alpha - b.alpha)) +
                         std::sin(2 * a.beta) * std::sin(2 * b.beta);
        return std::acos(std::clamp(c, -1.0, 1.0));
    }

    double spatial_distance(const DoaPoa &a, const DoaPoa &b)
    {
        return std::abs(a.theta - b.theta);
    }

} // namespace psa
