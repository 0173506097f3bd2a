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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "psa/errors.hpp"
#include "psa/experiments.hpp"

using namespace psa;

namespace
{
    const char *small_simo = R"(
network = "simo"
mode = "rate_max"
trials = 3
seed = 5

[array]
n_antennas = 4
n_e = 2

[jammer]
theta = 140.0
alpha = 0.0

[simo]
p_max_db = 12.0

[sweep]
axis = "theta_j"
values = [100.0, 140.0]
)";
} // namespace

TEST_CASE("complex Gaussian draws have unit variance")
{
    std::mt19937_64 rng = trial_rng(1, 0);
    const CVec v = draw_cn(rng, 100000);
    const double var = v.squaredNorm() / v.size();
    CHECK(var >= 0.99);
    CHECK(var <= 1.01);
    const double re = v.real().squaredNorm() / v.size();
    CHECK(re == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(v.mean()) < 0.01);
    std::mt19937_64 r2 = trial_rng(1, 0);
    CHECK(draw_cn(r2, 1000, 4.0).squaredNorm() / 1000 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("trial streams are deterministic and uncorrelated")
{
    std::mt19937_64 a = trial_rng(7, 3), b = trial_rng(7, 3);
    CHECK((draw_cn(a, 50) - draw_cn(b, 50)).norm() == 0.0);

    const int m = 5000;
    Vec x(m), y(m);
    for (int t = 0; t < m; ++t)
    {
        std::mt19937_64 r1 = trial_rng(7, t), r2 = trial_rng(7, t + 1);
        x(t) = draw_cn(r1, 1)(0).real();
        y(t) = draw_cn(r2, 1)(0).real();
    }
    const double mx = x.mean(), my = y.mean();
    const double rho = ((x.array() - mx) * (y.array() - my)).sum() /
                       std::sqrt((x.array() - mx).square().sum() * (y.array() - my).square().sum());
    CHECK(std::abs(rho) < 0.05);

    // Neighbouring seeds must not produce shifted copies of each other.
    std::mt19937_64 s1 = trial_rng(1, 1), s2 = trial_rng(2, 0);
    CHECK((draw_cn(s1, 10) - draw_cn(s2, 10)).norm() > 0.0);
}

TEST_CASE("scenario sampling follows the configuration")
{
    ScenarioConfig c;
    c.n_antennas = 4;
    c.n_e = 3;
    std::mt19937_64 r1 = trial_rng(1, 0), r2 = trial_rng(1, 0);
    const SimoScenario s1 = sample_simo(c, r1), s2 = sample_simo(c, r2);
    CHECK(s1.n_d == 4);
    CHECK(s1.h_se.size() == 3);
    CHECK(s1.h_sd == s2.h_sd);
    CHECK((s1.h_je - s2.h_je).norm() == 0.0);
    CHECK(s1.desired.theta == doctest::Approx(deg2rad(40.0)));

    c.network = Network::relay;
    c.mode = Mode::rate_max;
    std::mt19937_64 r3 = trial_rng(1, 0);
    const RelayScenario rs = sample_relay(c, r3);
    CHECK(rs.h_rd.size() == 4);
    CHECK(rs.p_s == doctest::Approx(std::pow(10.0, 1.4)));
    CHECK(rs.p_r_max == doctest::Approx(std::pow(10.0, 2.5)));
    CHECK(rs.p_j_max == doctest::Approx(10.0));
}

TEST_CASE("CSA pointing has identical element blocks")
{
    ScenarioConfig c;
    c.n_antennas = 6;
    const Vec z = csa_pointing(c);
    for (int i = 0; i < 6; ++i)
        CHECK((element_block(z, i) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
    c.csa_theta_e = 30.0;
    c.csa_phi_e = 60.0;
    const Vec p = csa_pointing(c);
    for (int i = 1; i < 6; ++i)
        CHECK((element_block(p, i) - element_block(p, 0)).norm() == 0.0);
    CHECK(element_block(p, 0).norm() == doctest::Approx(1.0));
    CHECK(element_block(p, 0).z() == doctest::Approx(0.5));
}

TEST_CASE("relay starts begin with the z axis")
{
    ScenarioConfig c;
    c.n_antennas = 4;
    c.random_starts = 2;
    std::mt19937_64 rng = trial_rng(1, 0);
    const auto s = relay_starts(c, rng);
    REQUIRE(s.size() == 3);
    CHECK((s[0] - uniform_pointing(4, {0, 0, 1})).norm() == 0.0);
    for (const Vec &p : s)
        for (int i = 0; i < 4; ++i)
            CHECK(element_block(p, i).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("polarization distance sets the jammer orientation")
{
    ScenarioConfig c;
    for (double dp : {0.0, 20.0, 40.0, 60.0})
    {
        set_polarization_distance(c, dp);
        CHECK(c.alpha_j == doctest::Approx(c.alpha_d + dp / 2));
        CHECK(c.beta_j == c.beta_d);
        CHECK(rad2deg(polarization_distance(c.desired(), c.jammer())) == doctest::Approx(dp).epsilon(1e-9));
    }
    const ScenarioConfig s = c.at(20.0);
    CHECK(s.r_sec_0 == 20.0);
    c.sweep_axis = "delta_p";
    CHECK(c.at(40.0).alpha_j == doctest::Approx(c.alpha_d + 20.0));
}

TEST_CASE("config parsing: sections, series and delta_p")
{
    const ExperimentFile f = parse_experiment(R"(
network = "relay"
mode = "rate_max"
trials = 4
seed = 11

[array]
n_antennas = 4

[jammer]
delta_p = 40.0

[relay]
p_s_db = 10.0
ke_noise = "sigma_e"

[sweep]
axis = "p_s_db"
values = [0, 5]

[[series]]
label = "a"
jammer = { theta = 65.0 }

[[series]]
label = "b-2"
arrays = "csa"
)");
    CHECK(f.base.network == Network::relay);
    CHECK(f.base.trials == 4);
    CHECK(f.base.seed == 11u);
    CHECK(f.base.alpha_j == doctest::Approx(-10.0));
    CHECK(f.base.ke_noise == KeNoise::sigma_e);
    CHECK(f.base.sweep_values == std::vector<double>{0.0, 5.0});
    REQUIRE(f.series.size() == 2);
    CHECK(f.series[0].label == "a");
    CHECK(f.series[0].theta_j == 65.0);
    CHECK(f.series[0].alpha_j == doctest::Approx(-10.0));
    CHECK(f.series[1].arrays == ArraySelect::csa);
    CHECK(f.series[1].trials == 4);
}

TEST_CASE("config errors")
{
    auto bad = [](const std::string &text) { CHECK_THROWS_AS(parse_experiment(text), ConfigError); };
    bad("trials = 0");
    bad("bogus = 1");
    bad("[sweep]\naxis = \"nonsense\"\nvalues = [1]");
    bad("[sweep]\naxis = \"r_sec_0\"\nvalues = []");
    bad("[array]\nn_antennas = 4\ncolour = 2");
    bad("network = \"relay\"\nmode = \"power_min\"");
    bad("mode = \"robust\"");
    bad("network = \"relay\"\nmode = \"robust\"\narrays = \"csa\"");
    bad("[relay]\ncorr_p = 1.0");
    bad("[jammer]\ndelta_p = 20.0\nalpha = 3.0");
    bad("[desired]\nbeta = 60.0");
    bad("seed = -1");
    bad("trials = 2.5");
    bad("arrays = \"all\"");
    bad("network = ");
    bad("[[series]]\nlabel = \"x\"\n[[series]]\nlabel = \"x\"");
    bad("[[series]]\nlabel = \"has space\"");
    CHECK_THROWS_AS(load_experiment("/nonexistent/dir/file.toml"), ConfigError);
    ScenarioConfig c;
    c.sweep_axis = "nope";
    CHECK_THROWS_AS(c.at(1.0), ConfigError);
}

TEST_CASE("shipped figure configurations load")
{
    const std::filesystem::path dir = std::filesystem::path(PSA_SOURCE_DIR) / "configs";
    int count = 0;
    for (const auto &e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".toml")
        {
            CAPTURE(e.path().string());
            const ExperimentFile f = load_experiment(e.path());
            CHECK_NOTHROW(f.base.validate());
            for (const auto &s : f.series)
                CHECK_NOTHROW(s.validate());
            ++count;
        }
    CHECK(count >= 10);
}

TEST_CASE("number formatting and CSV layout")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(-1.5e-7) == "-1.5e-07");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(std::stod(format_number(1.0 / 3.0))) == format_number(1.0 / 3.0));
    std::ostringstream os;
    write_csv(os, {ResultRow{1.5, ArrayKind::csa, "secrecy_rate_bits", 0.25, 0.0, 3, 1}});
    CHECK(os.str() == std::string(csv_header) + "\n1.5,csa,secrecy_rate_bits,0.25,0,3,1\n");
}

TEST_CASE("atomic file writes")
{
    const auto dir = std::filesystem::temp_directory_path() / "psa_atomic_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    write_file_atomic(path, "a,b\n");
    std::ifstream in(path);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(s == "a,b\n");
    int files = 0;
    for ([[maybe_unused]] const auto &e : std::filesystem::directory_iterator(dir))
        ++files;
    CHECK(files == 1);
    CHECK_THROWS(write_file_atomic(dir / "missing" / "x.csv", "z"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep rows: counts, ordering and determinism")
{
    ExperimentFile f = parse_experiment(small_simo);
    const auto rows = run_sweep(f.base);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].array_kind == ArrayKind::psa);
    CHECK(rows[1].array_kind == ArrayKind::csa);
    CHECK(rows[0].sweep_value == 100.0);
    CHECK(rows[2].sweep_value == 140.0);
    for (const auto &r : rows)
    {
        CHECK(r.metric_kind == "secrecy_rate_bits");
        CHECK(r.n + r.infeasible == 3);
        CHECK((r.n == 0 || r.std >= 0.0));
        CHECK((r.n == 0 || r.mean >= 0.0));
    }
    std::ostringstream a, b;
    write_csv(a, rows);
    write_csv(b, run_sweep(f.base));
    CHECK(a.str() == b.str());

    f.base.arrays = ArraySelect::csa;
    const auto only = run_sweep(f.base);
    REQUIRE(only.size() == 2);
    CHECK(only[0].array_kind == ArrayKind::csa);
    CHECK(only[0].mean == rows[1].mean);
}

TEST_CASE("power sweep excludes unreachable trials from the mean")
{
    ScenarioConfig c;
    c.mode = Mode::power_min;
    c.n_antennas = 4;
    c.n_e = 2;
    c.theta_j = 140.0;
    c.alpha_j = 0.0;
    c.trials = 4;
    c.sweep_values = {0.5, 50.0};
    c.arrays = ArraySelect::psa;
    std::ostringstream trace;
    const auto rows = run_sweep(c, {&trace});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].metric_kind == "total_power_db");
    CHECK(rows[1].n == 0); // 50 bits is out of reach
    CHECK(rows[1].infeasible == 4);
    CHECK(std::isnan(rows[1].mean));
    for (const auto &r : rows)
        CHECK(r.n + r.infeasible == 4);
    CHECK(trace.str().find("trial\t50\tpsa\t0\ttotal_power_db\tnan\t") != std::string::npos);
}
