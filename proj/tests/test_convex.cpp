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
#include <doctest.h>

#include <random>

#include "psa/bisection.hpp"
#include "psa/rank1.hpp"
#include "support.hpp"

using namespace psa;
using psa_test::cn_vec;

namespace
{
    Mat random_sym(std::mt19937_64 &rng, int n)
    {
        std::normal_distribution<double> g;
        Mat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = g(rng);
        return 0.5 * (a + a.transpose());
    }

    CMat random_herm(std::mt19937_64 &rng, int n)
    {
        CMat a(n, n);
        for (int j = 0; j < n; ++j)
            a.col(j) = cn_vec(rng, n);
        return 0.5 * (a + a.adjoint());
    }

    CMat random_hpd(std::mt19937_64 &rng, int n)
    {
        CMat a(n, n);
        for (int j = 0; j < n; ++j)
            a.col(j) = cn_vec(rng, n);
        return a * a.adjoint() + 0.1 * CMat::Identity(n, n);
    }

    // max tr(C V V') with unit rows in V, full-width factor, by a shifted minorize-maximize iteration.
    double unit_diag_max_oracle(const Mat &c)
    {
        const int n = (int)c.rows();
        Eigen::SelfAdjointEigenSolver<Mat> es(c);
        const double shift = std::max(0.0, -es.eigenvalues()(0)) + 1.0;
        const Mat cs = c + shift * Mat::Identity(n, n);
        std::mt19937_64 rng(99);
        std::normal_distribution<double> g;
        Mat v(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                v(i, j) = g(rng);
        v.rowwise().normalize();
        for (int it = 0; it < 200000; ++it)
        {
            Mat nv = cs * v;
            nv.rowwise().normalize();
            const double d = (nv - v).norm();
            v = nv;
            if (d < 1e-14)
                break;
        }
        return (c * v * v.transpose()).trace();
    }

    // Picks block n (indices n, N + n, 2N + n) out of a 3N vector.
    Mat selector(int n, int N)
    {
        Mat s = Mat::Zero(3, 3 * N);
        for (int k = 0; k < 3; ++k)
            s(k, k * N + n) = 1.0;
        return s;
    }
} // namespace

TEST_CASE("generalized eigenvalue matches the Cholesky-whitened problem")
{
    std::mt19937_64 rng(1);
    for (int n : {1, 3, 6})
    {
        const CMat a = random_herm(rng, n);
        const CMat b = random_hpd(rng, n);
        const GenEig ge = max_generalized_eig(a, b);
        Eigen::LLT<CMat> llt(b);
        const CMat li = llt.matrixL().solve(CMat::Identity(n, n));
        Eigen::SelfAdjointEigenSolver<CMat> es(li * a * li.adjoint());
        CHECK(ge.value == doctest::Approx(es.eigenvalues()(n - 1)).epsilon(1e-10));
        CHECK((a * ge.vector - ge.value * b * ge.vector).norm() < 1e-9 * (1.0 + a.norm()));
        CHECK(ge.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("singular b is rejected")
{
    CMat b = CMat::Zero(2, 2);
    b(0, 0) = 1.0;
    CHECK_THROWS_AS(max_generalized_eig(CMat::Identity(2, 2), b), SingularB);
}

TEST_CASE("null space bases are orthonormal and annihilated")
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    Mat a(2, 5);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 5; ++j)
            a(i, j) = g(rng);
    const Mat n = null_space(a);
    REQUIRE(n.cols() == 3);
    CHECK((n.transpose() * n - Mat::Identity(3, 3)).norm() < 1e-12);
    CHECK((a * n).norm() < 1e-12);

    CMat c(1, 4);
    c.row(0) = cn_vec(rng, 4).transpose();
    const Mat rn = real_null_space(c);
    REQUIRE(rn.cols() == 2);
    CHECK((c * rn.cast<cd>()).norm() < 1e-12);
    CHECK((rn.transpose() * rn - Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("hermitian helpers")
{
    std::mt19937_64 rng(3);
    const CMat a = random_hpd(rng, 4);
    const CMat s = hermitian_sqrt(a);
    CHECK((s * s - a).norm() < 1e-10 * a.norm());
    CHECK((extract_hermitian(embed_hermitian(a)) - a).norm() < 1e-14);
    CHECK(hermitian_defect(a) < 1e-14);
    const CVec v = cn_vec(rng, 4);
    CHECK(rank1_gap(v * v.adjoint()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(top_eig(CMat(v * v.adjoint())).first == doctest::Approx(v.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("cone program solves a small LP")
{
    ConeProgram p;
    p.add_lp_vars(2);
    auto &r = p.add_row(1.0);
    r.lp = {{0, 1.0}, {1, 1.0}};
    p.finalize();
    p.c_lp << 1.0, 2.0;
    const ConeSolution s = solve_cone_program(p);
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.primal_objective == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(s.x_lp(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("trace-constrained SDP gives the extreme eigenvalue")
{
    std::mt19937_64 rng(4);
    for (int n : {2, 5})
    {
        const CMat c = random_herm(rng, n);
        SdpProblem p;
        p.dim = n;
        p.objective = c;
        p.add_eq(CMat::Identity(n, n), 1.0);
        const SdpSolution s = solve_sdp(p);
        REQUIRE(s.status == SolveStatus::optimal);
        Eigen::SelfAdjointEigenSolver<CMat> es(c);
        CHECK(s.objective_value == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-6));

        p.sense = Sense::maximize;
        const SdpSolution m = solve_sdp(p);
        CHECK(m.objective_value == doctest::Approx(es.eigenvalues()(n - 1)).epsilon(1e-6));
    }
}

TEST_CASE("inequality form: max tr(C X) with tr X <= 2")
{
    std::mt19937_64 rng(5);
    const CMat c = random_herm(rng, 4);
    SdpProblem p;
    p.dim = 4;
    p.objective = c;
    p.sense = Sense::maximize;
    p.add_ineq(CMat::Identity(4, 4), 2.0);
    const SdpSolution s = solve_sdp(p);
    REQUIRE(s.status == SolveStatus::optimal);
    Eigen::SelfAdjointEigenSolver<CMat> es(c);
    CHECK(s.objective_value == doctest::Approx(2.0 * std::max(0.0, es.eigenvalues()(3))).epsilon(1e-6));
}

TEST_CASE("unit-diagonal SDP agrees with a factored oracle")
{
    std::mt19937_64 rng(6);
    for (int n : {3, 6})
    {
        const Mat c = random_sym(rng, n);
        SdpProblem p;
        p.dim = n;
        p.objective = c.cast<cd>();
        p.sense = Sense::maximize;
        for (int i = 0; i < n; ++i)
        {
            CMat e = CMat::Zero(n, n);
            e(i, i) = 1.0;
            p.add_eq(e, 1.0);
        }
        const SdpSolution s = solve_sdp(p);
        REQUIRE(s.status == SolveStatus::optimal);
        const double ref = unit_diag_max_oracle(c);
        CHECK(s.objective_value == doctest::Approx(ref).epsilon(1e-6));
        for (int i = 0; i < n; ++i)
            CHECK(s.x(i, i).real() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(lambda_min(CMat(s.x)) > -1e-8);
    }
}

TEST_CASE("infeasible SDP is reported")
{
    SdpProblem p;
    p.dim = 3;
    p.objective = CMat::Identity(3, 3);
    p.add_eq(CMat::Identity(3, 3), 1.0);
    p.add_ineq(CMat::Identity(3, 3), 0.5);
    const SdpSolution s = solve_sdp(p);
    CHECK(s.status == SolveStatus::primal_infeasible);
}

TEST_CASE("malformed SDP data is rejected")
{
    SdpProblem p;
    p.dim = 2;
    p.objective = CMat::Identity(3, 3);
    CHECK_THROWS_AS(solve_sdp(p), std::invalid_argument);
}

TEST_CASE("bisection finds the switch point")
{
    const double g = bisection(0.0, 1.0, [](double x) { return x <= 0.3; }, 1e-9);
    CHECK(g == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(g <= 0.3);
    CHECK(bisection(0.0, 1.0, [](double) { return true; }, 1e-9) == 1.0);
    CHECK_THROWS_AS(bisection(0.0, 1.0, [](double) { return false; }, 1e-9), InvalidBracket);
    CHECK_THROWS_AS(bisection(1.0, 0.0, [](double) { return true; }, 1e-9), InvalidBracket);
}

namespace
{
    // Per-element unit-norm constraints for N three-dimensional elements.
    SdpProblem element_problem(int N, const Mat &r)
    {
        SdpProblem p;
        p.dim = 3 * N;
        p.objective = r.cast<cd>();
        const PointingConstraintSet f = constraint_matrices(N);
        for (const Mat &fn : f.matrices)
            p.add_eq(fn.cast<cd>(), 1.0);
        return p;
    }
} // namespace

TEST_CASE("penalty loop decreases the rank gap monotonically")
{
    std::mt19937_64 rng(7);
    const int N = 4;
    Mat r = Mat::Zero(3 * N, 3 * N);
    for (int n = 0; n < N; ++n)
    {
        const Mat s = selector(n, N);
        const Mat m = random_sym(rng, 3);
        r += s.transpose() * m * s;
    }
    SdpProblem rel = element_problem(N, r);
    rel.sense = Sense::maximize;
    const SdpSolution x0 = solve_sdp(rel);
    auto tmpl = [&](const CMat &, const CVec &) {
        SdpProblem p = element_problem(N, Mat::Zero(3 * N, 3 * N));
        p.objective = CMat();
        return p;
    };
    const Rank1Result res = rank1_penalty_loop(tmpl, x0.x);
    CHECK(res.gap <= 1e-6);
    for (size_t i = 1; i < res.f_trace.size(); ++i)
        CHECK(res.f_trace[i] <= res.f_trace[i - 1] + 1e-12);
    for (int n = 0; n < N; ++n)
        CHECK(std::norm(res.vector(n)) + std::norm(res.vector(N + n)) + std::norm(res.vector(2 * N + n)) ==
              doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("penalty loop escapes a block-diagonal start")
{
    // Unit vectors on disjoint element blocks: the gap is an integer and the plain linearization has
    // nothing to merge them with.
    const int N = 3;
    CMat x0 = CMat::Zero(3 * N, 3 * N);
    for (int n = 0; n < N; ++n)
    {
        Vec w = Vec::Zero(3 * N);
        w(n) = 1.0; // x component of element n
        x0 += (w * w.transpose()).cast<cd>();
    }
    CHECK(rank1_gap(x0) == doctest::Approx(N - 1.0));
    auto tmpl = [&](const CMat &, const CVec &) {
        SdpProblem p = element_problem(N, Mat::Zero(3 * N, 3 * N));
        p.objective = CMat();
        return p;
    };
    const Rank1Result res = rank1_penalty_loop(tmpl, x0);
    CHECK(res.gap <= 1e-6);
    for (size_t i = 1; i < res.f_trace.size(); ++i)
        CHECK(res.f_trace[i] < res.f_trace[i - 1]);
}

TEST_CASE("rank-one maximization on a separable objective matches per-element eigenvalues")
{
    std::mt19937_64 rng(8);
    for (int N : {2, 4})
    {
        Mat r = Mat::Zero(3 * N, 3 * N);
        double ref = 0.0;
        for (int n = 0; n < N; ++n)
        {
            const Mat s = selector(n, N);
            Mat m = random_sym(rng, 3);
            m = m * m.transpose(); // PSD block
            r += s.transpose() * m * s;
            ref += Eigen::SelfAdjointEigenSolver<Mat>(m).eigenvalues()(2);
        }
        const SdpProblem p = element_problem(N, r);
        const Rank1MaxResult res = maximize_rank1(p);
        const CVec &v = res.rank1.vector;
        const double achieved = (v.adjoint() * r.cast<cd>() * v)(0).real();
        CHECK(res.gamma_up == doctest::Approx(ref).epsilon(1e-6));
        CHECK(achieved >= res.gamma_star - 1e-6 * ref);
        CHECK(achieved == doctest::Approx(ref).epsilon(1e-3));
        const PointingConstraintSet f = constraint_matrices(N);
        for (const Mat &fn : f.matrices)
            CHECK((v.adjoint() * fn.cast<cd>() * v)(0).real() == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("feasible hint bounds the rank-one result from below")
{
    std::mt19937_64 rng(9);
    const int N = 3;
    Mat r = Mat::Zero(3 * N, 3 * N);
    for (int n = 0; n < N; ++n)
    {
        const Mat s = selector(n, N);
        Mat m = random_sym(rng, 3);
        r += s.transpose() * (m * m.transpose()) * s;
    }
    // z pointing is feasible for the unit-norm constraints.
    const CVec hint = uniform_pointing(N, {0, 0, 1}).cast<cd>();
    const double hint_level = (hint.adjoint() * r.cast<cd>() * hint)(0).real();
    const Rank1MaxResult res = maximize_rank1(element_problem(N, r), {}, &hint);
    const CVec &v = res.rank1.vector;
    CHECK(res.gamma_star >= hint_level - 1e-12);
    CHECK((v.adjoint() * r.cast<cd>() * v)(0).real() >= hint_level - 1e-9);
}

TEST_CASE("infeasible rank-one problem throws")
{
    SdpProblem p;
    p.dim = 2;
    p.objective = CMat::Identity(2, 2);
    p.add_eq(CMat::Identity(2, 2), 1.0);
    p.add_ineq(CMat::Identity(2, 2), 0.5);
    CHECK_THROWS_AS(maximize_rank1(p), Infeasible);
}
