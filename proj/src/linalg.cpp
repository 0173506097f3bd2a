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

#include "psa/linalg.hpp"

#include <cmath>

namespace psa
{
    void fix_phase(CVec &v)
    {
        if (v.size() == 0)
            return;
        Eigen::Index k = 0;
        v.cwiseAbs().maxCoeff(&k);
        const double m = std::abs(v(k));
        if (m == 0.0)
            return;
        v *= std::conj(v(k)) / m;
        v(k) = cd(std::abs(v(k)), 0.0);
    }

    GenEig max_generalized_eig(const CMat &a, const CMat &b)
    {
        if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
            throw std::invalid_argument("max_generalized_eig: dimension mismatch");
        const CMat bh = 0.5 * (b + b.adjoint());
        Eigen::SelfAdjointEigenSolver<CMat> eb(bh, Eigen::EigenvaluesOnly);
        if (!(eb.eigenvalues().minCoeff() > 1e-12))
            throw SingularB("b is not positive definite");

        Eigen::LLT<CMat> llt(bh);
        const CMat ah = 0.5 * (a + a.adjoint());
        // c = L^-1 a L^-H
        CMat t = llt.matrixL().solve(ah);
        CMat c = llt.matrixL().solve(t.adjoint()).adjoint();
        c = 0.5 * (c + c.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMat> ec(c);
        const Eigen::Index n = c.rows();
        GenEig out;
        out.value = ec.eigenvalues()(n - 1);
        CVec y = ec.eigenvectors().col(n - 1);
        out.vector = llt.matrixU().solve(y);
        out.vector.normalize();
        fix_phase(out.vector);
        return out;
    }

    Mat null_space(const Mat &a, double rtol)
    {
        const Eigen::Index n = a.cols();
        if (a.rows() == 0)
            return Mat::Identity(n, n);
        Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
        const Vec s = svd.singularValues();
        const double smax = s.size() ? s(0) : 0.0;
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > rtol * smax && s(i) > 0.0)
                ++r;
        return svd.matrixV().rightCols(n - r);
    }

    CMat null_space(const CMat &a, double rtol)
    {
        const Eigen::Index n = a.cols();
        if (a.rows() == 0)
            return CMat::Identity(n, n);
        Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
        const Vec s = svd.singularValues();
        const double smax = s.size() ? s(0) : 0.0;
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > rtol * smax && s(i) > 0.0)
                ++r;
        return svd.matrixV().rightCols(n - r);
    }

    Mat real_null_space(const CMat &a, double rtol)
    {
        Mat stacked(2 * a.rows(), a.cols());
        stacked << a.real(), a.imag();
        return null_space(stacked, rtol);
    }

    Mat embed_hermitian(const CMat &x)
    {
        const Eigen::Index n = x.rows();
        Mat y(2 * n, 2 * n);
        y.topLeftCorner(n, n) = x.real();
        y.topRightCorner(n, n) = -x.imag();
        y.bottomLeftCorner(n, n) = x.imag();
        y.bottomRightCorner(n, n) = x.real();
        return y;
    }

    CMat extract_hermitian(const Mat &y)
    {
        const Eigen::Index n = y.rows() / 2;
        const Mat re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
        const Mat im = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
        CMat x(n, n);
        x.real() = 0.5 * (re + re.transpose());
        x.imag() = 0.5 * (im - im.transpose());
        return x;
    }

    double hermitian_defect(const CMat &a)
    {
        if (a.size() == 0)
            return 0.0;
        return (a - a.adjoint()).cwiseAbs().maxCoeff();
    }

    CMat hermitian_sqrt(const CMat &a)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (a + a.adjoint()));
        Vec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return es.eigenvectors() * d.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
    }

    std::pair<double, Vec> top_eig(const Mat &a)
    {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
        const Eigen::Index n = a.rows();
        Vec v = es.eigenvectors().col(n - 1);
        Eigen::Index k = 0;
        v.cwiseAbs().maxCoeff(&k);
        if (v(k) < 0)
            v = -v;
        return {es.eigenvalues()(n - 1), v};
    }

    std::pair<double, CVec> top_eig(const CMat &a)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (a + a.adjoint()));
        const Eigen::Index n = a.rows();
        CVec v = es.eigenvectors().col(n - 1);
        fix_phase(v);
        return {es.eigenvalues()(n - 1), v};
    }

    double lambda_min(const Mat &a)
    {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }

    double lambda_min(const CMat &a)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }

    double rank1_gap(const CMat &a)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().sum() - es.eigenvalues()(a.rows() - 1);
    }

} // namespace psa
