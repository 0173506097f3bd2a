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

#ifndef PSA_LINALG_HPP
#define PSA_LINALG_HPP

#include "psa/em_core.hpp"
#include "psa/errors.hpp"

namespace psa
{
    struct GenEig
    {
        double value = 0.0;
        CVec vector; // unit norm, phase fixed
    };

    // Largest lambda with a v = lambda b v for Hermitian a and Hermitian positive definite b.
    GenEig max_generalized_eig(const CMat &a, const CMat &b);

    // Rotates v so its largest-magnitude entry is real and nonnegative.
    void fix_phase(CVec &v);

    // Orthonormal basis of the null space, rank decided at rtol * sigma_max.
    Mat null_space(const Mat &a, double rtol = 1e-10);
    CMat null_space(const CMat &a, double rtol = 1e-10);

    // Real basis of {p real : a p = 0} for complex a, via the stacked [Re a; Im a].
    Mat real_null_space(const CMat &a, double rtol = 1e-10);

    // [Re, -Im; Im, Re] and its inverse (averaging the redundant blocks).
    Mat embed_hermitian(const CMat &x);
    CMat extract_hermitian(const Mat &y);

    double hermitian_defect(const CMat &a); // max |a - a^H|

    // Principal square root of a Hermitian PSD matrix.
    CMat hermitian_sqrt(const CMat &a);

    // Largest eigenpair of a symmetric / Hermitian matrix.
    std::pair<double, Vec> top_eig(const Mat &a);
    std::pair<double, CVec> top_eig(const CMat &a);

    double lambda_min(const Mat &a);
    double lambda_min(const CMat &a);

    // tr(a) - lambda_max(a) for a Hermitian PSD matrix.
    double rank1_gap(const CMat &a);

} // namespace psa

#endif
