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
#ifndef PSA_EXPERIMENTS_HPP
#define PSA_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "psa/relay.hpp"
#include "psa/simo.hpp"

namespace psa
{
    enum class Network
    {
        simo,
        relay
    };

    enum class Mode
    {
        power_min,
        rate_max,
        robust
    };

    enum class ArrayKind
    {
        psa,
        csa
    };

    enum class ArraySelect
    {
        psa,
        csa,
        both
    };

    const char *array_kind_name(ArrayKind k);
    ArraySelect parse_array_select(const std::string &s); // throws ConfigError

    // One Monte Carlo experiment. Angles in degrees, powers in dB relative to unit noise.
    struct ScenarioConfig
    {
        Network network = Network::simo;
        Mode mode = Mode::power_min;
        std::string label; // series label, empty for a single-series file

        int n_antennas = 8; // N_D or N_R
        int n_e = 6;
        double spacing = 0.5;
        double theta_d = 40.0, phi_d = 90.0, alpha_d = -30.0, beta_d = 0.0;
        double theta_j = 35.0, phi_j = 90.0, alpha_j = -30.0, beta_j = 0.0;
        double channel_variance = 1.0;

        // SIMO
        double sigma2 = 1.0;
        double sigma_e2 = 1.0;
        double r_sec_0 = 2.0;
        double p_max_db = 12.0;

        // Relay
        double p_s_db = 14.0;
        double p_r_max_db = 25.0;
        double p_j_max_db = 10.0;
        double corr_p = 0.5;
        double sigma_r2 = 1.0;
        double sigma_d2 = 1.0;
        KeNoise ke_noise = KeNoise::sigma_d;
        int max_outer = 10;
        double outer_rel_tol = 1e-3;
        int random_starts = 0; // extra random initial pointings besides the z-axis one

        // Robust relay
        double error_scale = 100.0; // C = error_scale * I
        int perturbations = 1000;

        // Fixed orientation of every CSA element, (theta_e, phi_e); phi_e = 0 is the z-axis.
        double csa_theta_e = 0.0, csa_phi_e = 0.0;

        std::string sweep_axis = "r_sec_0";
        std::vector<double> sweep_values{2.0};
        int trials = 50;
        std::uint64_t seed = 1;
        ArraySelect arrays = ArraySelect::both;

        void validate() const; // throws ConfigError
        DoaPoa desired() const;
        DoaPoa jammer() const;
        // Copy with the sweep axis set to v. Throws ConfigError on an unknown axis.
        ScenarioConfig at(double v) const;
    };

    // Sweep axes accepted by ScenarioConfig::at.
    const std::vector<std::string> &sweep_axes();

    // Sets alpha_j so that the polarization distance to the desired signal is delta_p degrees
    // at equal ellipticity: alpha_j = alpha_d + delta_p / 2, beta_j = beta_d.
    void set_polarization_distance(ScenarioConfig &c, double delta_p_deg);

    // A file holds one base scenario and optional [[series]] overrides.
    struct ExperimentFile
    {
        ScenarioConfig base;
        std::vector<ScenarioConfig> series; // empty: run base alone
    };

    ExperimentFile parse_experiment(const std::string &toml_text);
    ExperimentFile load_experiment(const std::filesystem::path &path); // ConfigError if unreadable

    // Per-trial generator seeded from (seed, trial) only.
    std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

    // i.i.d. CN(0, variance) entries.
    CVec draw_cn(std::mt19937_64 &rng, int n, double variance = 1.0);

    // Channels are drawn in a fixed order so every sweep point of a trial sees the same draw.
    SimoScenario sample_simo(const ScenarioConfig &c, std::mt19937_64 &rng);
    RelayScenario sample_relay(const ScenarioConfig &c, std::mt19937_64 &rng);

    // Independent uniformly oriented unit block per element.
    Vec random_pointing(std::mt19937_64 &rng, int n_antennas);

    // z-axis start followed by c.random_starts random ones drawn from rng.
    std::vector<Vec> relay_starts(const ScenarioConfig &c, std::mt19937_64 &rng);

    // Common orientation of the fixed-orientation array.
    Vec csa_pointing(const ScenarioConfig &c);

    struct CsaSimoResult
    {
        Vec pointing;
        PowerAllocation allocation;
        double secrecy_rate = 0.0;
    };

    // Fixed identical element orientation, MVDR destination filter, searched powers.
    CsaSimoResult csa_power_min(const SimoScenario &sc, const Vec &pointing, double r_sec_0);
    CsaSimoResult csa_rate_max(const SimoScenario &sc, const Vec &pointing, double p_max);

    struct ResultRow
    {
        double sweep_value = 0.0;
        ArrayKind array_kind = ArrayKind::psa;
        std::string metric_kind; // total_power_db, secrecy_rate_bits, ...
        double mean = 0.0;
        double std = 0.0;
        int n = 0;          // contributing trials
        int infeasible = 0; // trials - n
    };

    struct SweepOptions
    {
        std::ostream *trace = nullptr; // per-trial TSV plus solver logs
    };

    std::vector<ResultRow> run_sweep(const ScenarioConfig &c, const SweepOptions &opt = {});

    inline constexpr const char *csv_header = "sweep_value,array_kind,metric_kind,mean,std,n,infeasible";

    // Shortest round-trip decimal form, "nan" for NaN.
    std::string format_number(double v);
    void write_csv(std::ostream &os, const std::vector<ResultRow> &rows);

    // Writes through a sibling temporary file and renames it into place.
    void write_file_atomic(const std::filesystem::path &path, const std::string &content);

} // namespace psa

#endif
