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

#ifndef PSA_EM_CORE_HPP
#define PSA_EM_CORE_HPP

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace psa
{
    using cd = std::complex<double>;
    using Mat = Eigen::MatrixXd;
    using Vec = Eigen::VectorXd;
    using CMat = Eigen::MatrixXcd;
    using CVec = Eigen::VectorXcd;
    using Mat62 = Eigen::Matrix<double, 6, 2>;
    using CVec6 = Eigen::Matrix<cd, 6, 1>;

    constexpr double pi = 3.141592653589793238462643383279502884;

    inline double deg2rad(double d) { return d * pi / 180.0; }
    inline double rad2deg(double r) { return r * 180.0 / pi; }

    // Direction (theta azimuth, phi elevation) and polarization (alpha orientation,
    // beta ellipticity) of an incident plane wave. Radians.
    struct DoaPoa
    {
        double theta = 0.0;
        double phi = 0.0;
        double alpha = 0.0;
        double beta = 0.0;

        static DoaPoa degrees(double theta, double phi, double alpha, double beta);
        bool in_range() const; // theta, phi in [0, pi]; alpha in [-pi/2, pi/2]; beta in [-pi/4, pi/4]
    };

    // Uniform linear array of short dipoles along the y-axis.
    struct PsaGeometry
    {
        int n_antennas = 1;
        double spacing = 0.5; // in wavelengths
        double gain = 1.0;    // matched-polarization gain G_e
        std::vector<std::pair<double, double>> pointing_angles; // (theta_e, phi_e) per element, radians

        void validate() const; // throws std::invalid_argument
    };

    // Array response map Q with a = Q p for the real pointing vector p.
    struct ManifoldMatrix
    {
        CMat entries; // N x 3N
        DoaPoa source;

        int n_antennas() const { return (int)entries.rows(); }
        CVec apply(const Vec &p) const { return entries * p; }
    };

    struct PointingConstraintSet
    {
        std::vector<Mat> matrices; // F_n, 3N x 3N each

        int n_antennas() const { return (int)matrices.size(); }
    };

    Mat62 steering_matrix(const DoaPoa &doa);

    Eigen::Vector2cd polarization_vector(double alpha, double beta);

    CVec6 em_signal_vector(const DoaPoa &doa);

    // Diagonal space-phase matrix; spacing other than half a wavelength scales the exponent.
    CMat space_phase(const DoaPoa &doa, int n_antennas, double spacing = 0.5);

    ManifoldMatrix manifold_matrix(const DoaPoa &doa, int n_antennas, double spacing = 0.5);

    // Stacks per-element unit vectors as [x_0..x_{N-1}, y_0..y_{N-1}, z_0..z_{N-1}].
    Vec pointing_to_p(const PsaGeometry &geometry);

    // Inverse of pointing_to_p for unit blocks; theta in (-pi, pi], phi in [0, pi].
    std::vector<std::pair<double, double>> p_to_angles(const Vec &p);

    // All elements share one orientation (unit 3-vector, normalized internally).
    Vec uniform_pointing(int n_antennas, const Eigen::Vector3d &direction);

    // Per-element 3-vector of p.
    Eigen::Vector3d element_block(const Vec &p, int n);
    void set_element_block(Vec &p, int n, const Eigen::Vector3d &v);

    PointingConstraintSet constraint_matrices(int n_antennas);

    double polarization_distance(const DoaPoa &a, const DoaPoa &b);

    // |theta_a - theta_b|. Elevation is ignored.
    double spatial_distance(const DoaPoa &a, const DoaPoa &b);

} // namespace psa

#endif
