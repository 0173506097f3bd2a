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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "psa/errors.hpp"
#include "psa/experiments.hpp"

namespace
{
    using namespace psa;

    constexpr int exit_ok = 0;
    constexpr int exit_config = 1;
    constexpr int exit_solver = 2;

    struct Common
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::string out;
        std::string array;
        bool trace = false;
    };

    void add_common(CLI::App *app, Common &c, bool with_trials)
    {
        app->add_option("--seed", c.seed, "Base seed of the per-trial generators");
        if (with_trials)
            app->add_option("--trials", c.trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
        app->add_option("--out", c.out, "Output path (stdout when omitted)");
        app->add_option("--array", c.array, "Array kind: psa, csa or both");
        app->add_flag("--trace", c.trace, "Solver iteration logs (TSV) on stderr");
    }

    ScenarioConfig overrides(ScenarioConfig c, const Common &o)
    {
        if (o.seed)
            c.seed = *o.seed;
        if (o.trials)
            c.trials = *o.trials;
        if (!o.array.empty())
            c.arrays = parse_array_select(o.array);
        return c;
    }

    void emit(const std::string &out, const std::string &content)
    {
        if (out.empty())
            std::cout << content << std::flush;
        else
            write_file_atomic(out, content);
    }

    // Output path for one series: stem.label.ext next to the requested file.
    std::filesystem::path series_path(const std::filesystem::path &out, const std::string &label)
    {
        std::filesystem::path p = out;
        const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
        p.replace_extension();
        p += "." + label + ext;
        return p;
    }

    // Gnuplot data: one index block per (array, metric), columns sweep_value mean std n.
    std::string gnuplot_blocks(const std::vector<ResultRow> &rows)
    {
        std::vector<std::pair<ArrayKind, std::string>> keys;
        for (const ResultRow &r : rows)
        {
            const auto k = std::make_pair(r.array_kind, r.metric_kind);
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                keys.push_back(k);
        }
        std::ostringstream os;
        for (std::size_t i = 0; i < keys.size(); ++i)
        {
            if (i)
                os << "\n\n";
            os << "# " << array_kind_name(keys[i].first) << ' ' << keys[i].second << '\n';
            os << "# sweep_value mean std n\n";
            for (const ResultRow &r : rows)
                if (r.array_kind == keys[i].first && r.metric_kind == keys[i].second)
                    os << format_number(r.sweep_value) << ' ' << format_number(r.mean) << ' ' << format_number(r.std)
                       << ' ' << r.n << '\n';
        }
        return os.str();
    }

    ScenarioConfig base_config(const Common &o, Network net, Mode mode)
    {
        ScenarioConfig c;
        if (!o.config.empty())
        {
            ExperimentFile f = load_experiment(o.config);
            if (!f.series.empty())
                throw ConfigError("single-scenario commands take a file without [[series]]");
            c = f.base;
        }
        c.network = net;
        c.mode = mode;
        c = overrides(c, o);
        c.trials = 1;
        c.validate();
        return c;
    }

    // field,value lines.
    class Report
    {
    public:
        void add(const std::string &k, double v) { os_ << k << ',' << format_number(v) << '\n'; }
        void add(const std::string &k, const std::string &v) { os_ << k << ',' << v << '\n'; }
        void pointing(const std::string &prefix, const Vec &p)
        {
            const auto ang = p_to_angles(p);
            for (std::size_t i = 0; i < ang.size(); ++i)
            {
                add(prefix + ".theta_e_deg." + std::to_string(i), rad2deg(ang[i].first));
                add(prefix + ".phi_e_deg." + std::to_string(i), rad2deg(ang[i].second));
            }
        }
        std::string str() const { return "field,value\n" + os_.str(); }

    private:
        std::ostringstream os_;
    };

    bool want_psa(const ScenarioConfig &c) { return c.arrays != ArraySelect::csa; }
    bool want_csa(const ScenarioConfig &c) { return c.arrays != ArraySelect::psa; }

    int run_simo(const Common &o, Mode mode, std::optional<double> value)
    {
        ScenarioConfig c = base_config(o, Network::simo, mode);
        if (value)
            (mode == Mode::power_min ? c.r_sec_0 : c.p_max_db) = *value;
        std::mt19937_64 rng = trial_rng(c.seed, 0);
        const SimoScenario sc = sample_simo(c, rng);
        const double p_max = std::pow(10.0, c.p_max_db / 10.0);
        Report rep;
        if (want_psa(c))
        {
            PointingOptions opt;
            opt.penalty.trace = o.trace ? &std::cerr : nullptr;
            const SimoDesign d = mode == Mode::power_min ? design_power_min(sc, c.r_sec_0, opt)
                                                         : design_rate_max(sc, p_max, opt);
            rep.add("psa.p_s", d.allocation.p_s);
            rep.add("psa.p_j", d.allocation.p_j);
            rep.add("psa.total_power_db", 10.0 * std::log10(d.allocation.total()));
            rep.add("psa.secrecy_rate_bits", d.secrecy_rate);
            rep.add("psa.case", d.diagnostics.case_label);
            rep.add("psa.dest_gain", dest_gain(sc, d.pointing));
            rep.add("psa.rank1_gap", d.diagnostics.rank1_gap);
            rep.add("psa.null_residual", d.diagnostics.null_residual);
            rep.pointing("psa", d.pointing);
        }
        if (want_csa(c))
        {
            const Vec p = csa_pointing(c);
            const CsaSimoResult r = mode == Mode::power_min ? csa_power_min(sc, p, c.r_sec_0) : csa_rate_max(sc, p, p_max);
            rep.add("csa.p_s", r.allocation.p_s);
            rep.add("csa.p_j", r.allocation.p_j);
            rep.add("csa.total_power_db", 10.0 * std::log10(r.allocation.total()));
            rep.add("csa.secrecy_rate_bits", r.secrecy_rate);
        }
        emit(o.out, rep.str());
        return exit_ok;
    }

    int run_relay(const Common &o, Mode mode, std::optional<double> p_s_db)
    {
        ScenarioConfig c = base_config(o, Network::relay, mode == Mode::robust ? Mode::robust : Mode::rate_max);
        if (p_s_db)
            c.p_s_db = *p_s_db;
        std::mt19937_64 rng = trial_rng(c.seed, 0);
        const RelayScenario sc = sample_relay(c, rng);
        Report rep;
        if (want_csa(c) && mode != Mode::robust)
        {
            const RelayDesign d = fixed_pointing_design(sc, csa_pointing(c));
            rep.add("csa.secrecy_rate_bits", d.secrecy_rate);
            rep.add("csa.relay_power", d.diagnostics.relay_power);
        }
        if (!want_psa(c))
        {
            emit(o.out, rep.str());
            return exit_ok;
        }
        AlternatingOptions opt;
        opt.max_outer = c.max_outer;
        opt.rel_tol = c.outer_rel_tol;
        opt.trace = o.trace ? &std::cerr : nullptr;
        const RelayDesign d = alternating_multistart(sc, relay_starts(c, rng), opt);
        rep.add("psa.secrecy_rate_bits", d.secrecy_rate);
        rep.add("psa.outer_iterations", d.diagnostics.outer_iterations);
        rep.add("psa.converged", d.diagnostics.converged ? "true" : "false");
        rep.add("psa.start_index", d.diagnostics.start_index);
        rep.add("psa.relay_power", d.diagnostics.relay_power);
        for (int i = 0; i < 4; ++i)
            rep.add("psa.null_residual." + std::to_string(i), d.diagnostics.residuals[i]);
        rep.pointing("psa", d.pointing);
        if (mode == Mode::robust)
        {
            const ErrorEllipsoid ell = ErrorEllipsoid::scaled_identity(3 * c.n_antennas, c.error_scale);
            const RobustDesign rb = robust_beamformer(sc, d, ell);
            rep.add("robust.certified_bits", rb.worst_case_rate);
            rep.add("robust.u1", rb.u1);
            rep.add("robust.u2", rb.u2);
            rep.add("robust.leakage_residual", rb.leakage_residual);
            rep.add("robust.rank1_gap", rb.rank1_gap);
            rep.add("robust.feasibility_tests", rb.feasibility_tests);
        }
        emit(o.out, rep.str());
        return exit_ok;
    }

    int run_sweep_cmd(const Common &o, const std::string &config, const std::string &gnuplot)
    {
        ExperimentFile f = load_experiment(config);
        std::vector<ScenarioConfig> runs = f.series.empty() ? std::vector<ScenarioConfig>{f.base} : f.series;
        for (ScenarioConfig &c : runs)
        {
            c = overrides(c, o);
            c.validate();
        }
        if (!f.series.empty() && o.out.empty())
            throw ConfigError("a file with [[series]] needs --out; each series is written to <stem>.<label>.csv");
        SweepOptions so;
        so.trace = o.trace ? &std::cerr : nullptr;
        // Every series is computed before anything is written.
        std::vector<std::pair<std::filesystem::path, std::string>> files;
        for (const ScenarioConfig &c : runs)
        {
            const std::vector<ResultRow> rows = run_sweep(c, so);
            std::ostringstream os;
            write_csv(os, rows);
            const bool multi = !f.series.empty();
            files.emplace_back(multi ? series_path(o.out, c.label) : std::filesystem::path(o.out), os.str());
            if (!gnuplot.empty())
                files.emplace_back(multi ? series_path(gnuplot, c.label) : std::filesystem::path(gnuplot),
                                   gnuplot_blocks(rows));
        }
        for (const auto &[path, content] : files)
            emit(path.string(), content);
        return exit_ok;
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Secure beamforming with polarization sensitive arrays"};
    app.require_subcommand(1);

    Common sp, sr, rr, rb, sw;
    std::optional<double> rate, p_max_db, p_s_db_r, p_s_db_b;
    std::string sweep_config, gnuplot;

    auto *c_sp = app.add_subcommand("simo-power", "Minimum total power for one channel draw");
    add_common(c_sp, sp, false);
    c_sp->add_option("--config", sp.config, "Scenario file");
    c_sp->add_option("--rate", rate, "Required secrecy rate, bits/s/Hz");

    auto *c_sr = app.add_subcommand("simo-rate", "Maximum secrecy rate for one channel draw");
    add_common(c_sr, sr, false);
    c_sr->add_option("--config", sr.config, "Scenario file");
    c_sr->add_option("--p-max-db", p_max_db, "Total power budget, dB");

    auto *c_rr = app.add_subcommand("relay-rate", "Relay alternating design for one channel draw");
    add_common(c_rr, rr, false);
    c_rr->add_option("--config", rr.config, "Scenario file");
    c_rr->add_option("--p-s-db", p_s_db_r, "Source power, dB");

    auto *c_rb = app.add_subcommand("relay-robust", "Robust relay design for one channel draw");
    add_common(c_rb, rb, false);
    c_rb->add_option("--config", rb.config, "Scenario file");
    c_rb->add_option("--p-s-db", p_s_db_b, "Source power, dB");

    auto *c_sw = app.add_subcommand("sweep", "Monte Carlo sweep described by a config file");
    add_common(c_sw, sw, true);
    c_sw->add_option("config", sweep_config, "Scenario file (TOML)")->required();
    c_sw->add_option("--gnuplot", gnuplot, "Also write gnuplot index blocks to this path");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try
    {
        if (*c_sp)
            return run_simo(sp, Mode::power_min, rate);
        if (*c_sr)
            return run_simo(sr, Mode::rate_max, p_max_db);
        if (*c_rr)
            return run_relay(rr, Mode::rate_max, p_s_db_r);
        if (*c_rb)
            return run_relay(rb, Mode::robust, p_s_db_b);
        return run_sweep_cmd(sw, sweep_config, gnuplot);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "psa: " << e.what() << '\n';
        return exit_config;
    }
    catch (const PsaError &e)
    {
        std::cerr << "psa: solver failure: " << e.what() << '\n';
        return exit_solver;
    }
    catch (const std::filesystem::filesystem_error &e)
    {
        std::cerr << "psa: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "psa: " << e.what() << '\n';
        return exit_solver;
    }
}
