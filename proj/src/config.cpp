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
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "psa/errors.hpp"
#include "psa/experiments.hpp"

namespace psa
{
    namespace
    {
        [[noreturn]] void fail(const std::string &msg) { throw ConfigError(msg); }

        double num(const toml::node &n, const std::string &key)
        {
            if (auto v = n.value<double>())
                return *v;
            fail("'" + key + "' must be a number");
        }

        long long integer(const toml::node &n, const std::string &key)
        {
            if (auto v = n.value_exact<int64_t>())
                return *v;
            fail("'" + key + "' must be an integer");
        }

        std::string text(const toml::node &n, const std::string &key)
        {
            if (auto v = n.value_exact<std::string>())
                return *v;
            fail("'" + key + "' must be a string");
        }

        const toml::table &table(const toml::node &n, const std::string &key)
        {
            if (const auto *t = n.as_table())
                return *t;
            fail("'" + key + "' must be a table");
        }

        Network parse_network(const std::string &s)
        {
            if (s == "simo")
                return Network::simo;
            if (s == "relay")
                return Network::relay;
            fail("unknown network '" + s + "'");
        }

        Mode parse_mode(const std::string &s)
        {
            if (s == "power_min")
                return Mode::power_min;
            if (s == "rate_max")
                return Mode::rate_max;
            if (s == "robust")
                return Mode::robust;
            fail("unknown mode '" + s + "'");
        }

        KeNoise parse_ke(const std::string &s)
        {
            if (s == "sigma_d")
                return KeNoise::sigma_d;
            if (s == "sigma_e")
                return KeNoise::sigma_e;
            fail("unknown ke_noise '" + s + "'");
        }

        // Source section: theta, phi, alpha, beta, and for the jammer also delta_p.
        void apply_source(const toml::table &t, const std::string &sec, double &theta, double &phi, double &alpha,
                          double &beta, ScenarioConfig *jammer_of)
        {
            std::optional<double> delta_p;
            for (const auto &[k, v] : t)
            {
                const std::string key = sec + "." + std::string(k.str());
                if (k == "theta")
                    theta = num(v, key);
                else if (k == "phi")
                    phi = num(v, key);
                else if (k == "alpha")
                    alpha = num(v, key);
                else if (k == "beta")
                    beta = num(v, key);
                else if (k == "delta_p" && jammer_of)
                    delta_p = num(v, key);
                else
                    fail("unknown key '" + key + "'");
            }
            if (delta_p)
            {
                if (t.contains("alpha") || t.contains("beta"))
                    fail("jammer.delta_p excludes jammer.alpha and jammer.beta");
                set_polarization_distance(*jammer_of, *delta_p);
            }
        }

        using Setter = void (*)(ScenarioConfig &, const toml::node &, const std::string &);

        void apply_flat(const toml::table &t, const std::string &sec, ScenarioConfig &c,
                        const std::vector<std::pair<std::string, Setter>> &keys)
        {
            for (const auto &[k, v] : t)
            {
                const std::string key = sec + "." + std::string(k.str());
                bool hit = false;
                for (const auto &[name, set] : keys)
                    if (k == name)
                    {
                        set(c, v, key);
                        hit = true;
                        break;
                    }
                if (!hit)
                    fail("unknown key '" + key + "'");
            }
        }

#define PSA_NUM(field) {#field, [](ScenarioConfig &c, const toml::node &v, const std::string &k) { c.field = num(v, k); }}
#define PSA_INT(field) {#field, [](ScenarioConfig &c, const toml::node &v, const std::string &k) { c.field = (int)integer(v, k); }}

        void apply_table(const toml::table &root, ScenarioConfig &c, bool allow_series)
        {
            // The jammer section is applied after desired so delta_p sees the final alpha_d.
            const toml::node *jammer = nullptr;
            for (const auto &[k, v] : root)
            {
                const std::string key(k.str());
                if (key == "network")
                    c.network = parse_network(text(v, key));
                else if (key == "mode")
                    c.mode = parse_mode(text(v, key));
                else if (key == "label")
                    c.label = text(v, key);
                else if (key == "trials")
                    c.trials = (int)integer(v, key);
                else if (key == "seed")
                {
                    const long long s = integer(v, key);
                    if (s < 0)
                        fail("'seed' must be nonnegative");
                    c.seed = (std::uint64_t)s;
                }
                else if (key == "arrays")
                    c.arrays = parse_array_select(text(v, key));
                else if (key == "array")
                    apply_flat(table(v, key), key, c, {PSA_INT(n_antennas), PSA_INT(n_e), PSA_NUM(spacing)});
                else if (key == "desired")
                    apply_source(table(v, key), key, c.theta_d, c.phi_d, c.alpha_d, c.beta_d, nullptr);
                else if (key == "jammer")
                    jammer = &v;
                else if (key == "noise")
                    apply_flat(table(v, key), key, c,
                               {PSA_NUM(sigma2), PSA_NUM(sigma_e2), PSA_NUM(sigma_r2), PSA_NUM(sigma_d2),
                                PSA_NUM(channel_variance)});
                else if (key == "simo")
                    apply_flat(table(v, key), key, c, {PSA_NUM(r_sec_0), PSA_NUM(p_max_db)});
                else if (key == "relay")
                {
                    const toml::table &t = table(v, key);
                    toml::table rest = t;
                    if (const auto *ke = t.get("ke_noise"))
                    {
                        c.ke_noise = parse_ke(text(*ke, "relay.ke_noise"));
                        rest.erase("ke_noise");
                    }
                    apply_flat(rest, key, c,
                               {PSA_NUM(p_s_db), PSA_NUM(p_r_max_db), PSA_NUM(p_j_max_db), PSA_NUM(corr_p),
                                PSA_INT(max_outer), PSA_NUM(outer_rel_tol), PSA_INT(random_starts)});
                }
                else if (key == "robust")
                    apply_flat(table(v, key), key, c, {PSA_NUM(error_scale), PSA_INT(perturbations)});
                else if (key == "csa")
                {
                    for (const auto &[ck, cv] : table(v, key))
                    {
                        if (ck == "theta_e")
                            c.csa_theta_e = num(cv, "csa.theta_e");
                        else if (ck == "phi_e")
                            c.csa_phi_e = num(cv, "csa.phi_e");
                        else
                            fail("unknown key 'csa." + std::string(ck.str()) + "'");
                    }
                }
                else if (key == "sweep")
                {
                    const toml::table &t = table(v, key);
                    for (const auto &[sk, sv] : t)
                    {
                        if (sk == "axis")
                            c.sweep_axis = text(sv, "sweep.axis");
                        else if (sk == "values")
                        {
                            const auto *arr = sv.as_array();
                            if (!arr)
                                fail("'sweep.values' must be an array");
                            c.sweep_values.clear();
                            for (const auto &e : *arr)
                                c.sweep_values.push_back(num(e, "sweep.values"));
                        }
                        else
                            fail("unknown key 'sweep." + std::string(sk.str()) + "'");
                    }
                }
                else if (key == "series" && allow_series)
                    continue; // handled by the caller
                else
                    fail("unknown key '" + key + "'");
            }
            if (jammer)
                apply_source(table(*jammer, "jammer"), "jammer", c.theta_j, c.phi_j, c.alpha_j, c.beta_j, &c);
        }

#undef PSA_NUM
#undef PSA_INT

    } // namespace

    const char *array_kind_name(ArrayKind k) { return k == ArrayKind::psa ? "psa" : "csa"; }

    ArraySelect parse_array_select(const std::string &s)
    {
        if (s == "psa")
            return ArraySelect::psa;
        if (s == "csa")
            return ArraySelect::csa;
        if (s == "both")
            return ArraySelect::both;
        fail("unknown array selection '" + s + "' (psa, csa, both)");
    }

    const std::vector<std::string> &sweep_axes()
    {
        static const std::vector<std::string> axes{"r_sec_0",  "p_max_db", "theta_j",    "alpha_j",   "beta_j",
                                                   "delta_p", "p_s_db",   "p_r_max_db", "p_j_max_db"};
        return axes;
    }

    void set_polarization_distance(ScenarioConfig &c, double delta_p_deg)
    {
        c.alpha_j = c.alpha_d + 0.5 * delta_p_deg;
        c.beta_j = c.beta_d;
    }

    DoaPoa ScenarioConfig::desired() const { return DoaPoa::degrees(theta_d, phi_d, alpha_d, beta_d); }
    DoaPoa ScenarioConfig::jammer() const { return DoaPoa::degrees(theta_j, phi_j, alpha_j, beta_j); }

    ScenarioConfig ScenarioConfig::at(double v) const
    {
        ScenarioConfig c = *this;
        const std::string &a = sweep_axis;
        if (a == "r_sec_0")
            c.r_sec_0 = v;
        else if (a == "p_max_db")
            c.p_max_db = v;
        else if (a == "theta_j")
            c.theta_j = v;
        else if (a == "alpha_j")
            c.alpha_j = v;
        else if (a == "beta_j")
            c.beta_j = v;
        else if (a == "delta_p")
            set_polarization_distance(c, v);
        else if (a == "p_s_db")
            c.p_s_db = v;
        else if (a == "p_r_max_db")
            c.p_r_max_db = v;
        else if (a == "p_j_max_db")
            c.p_j_max_db = v;
        else
            fail("unknown sweep axis '" + a + "'");
        return c;
    }

    void ScenarioConfig::validate() const
    {
        if (trials < 1)
            fail("trials must be >= 1");
        if (n_antennas < 1 || n_e < 1)
            fail("antenna counts must be >= 1");
        if (!(spacing > 0.0))
            fail("spacing must be positive");
        if (sweep_values.empty())
            fail("sweep.values must not be empty");
        for (double v : sweep_values)
            if (!std::isfinite(v))
                fail("sweep values must be finite");
        (void)at(sweep_values.front()); // rejects unknown axes
        for (double s : {sigma2, sigma_e2, sigma_r2, sigma_d2, channel_variance})
            if (!(s > 0.0))
                fail("noise and channel variances must be positive");
        if (!(corr_p >= 0.0 && corr_p < 1.0))
            fail("relay.corr_p must lie in [0, 1)");
        if (max_outer < 1 || !(outer_rel_tol > 0.0))
            fail("relay.max_outer must be >= 1 and relay.outer_rel_tol positive");
        if (random_starts < 0)
            fail("relay.random_starts must be >= 0");
        if (!(error_scale > 0.0) || perturbations < 1)
            fail("robust.error_scale must be positive and robust.perturbations >= 1");
        if (network == Network::simo && mode == Mode::robust)
            fail("robust mode needs network = \"relay\"");
        if (network == Network::relay && mode == Mode::power_min)
            fail("power_min mode needs network = \"simo\"");
        if (mode == Mode::robust && arrays == ArraySelect::csa)
            fail("robust mode has no fixed-orientation variant");
        for (const DoaPoa &d : {desired(), jammer()})
            if (!d.in_range())
                fail("angles out of range: theta, phi in [0, 180], alpha in [-90, 90], beta in [-45, 45]");
    }

    ExperimentFile parse_experiment(const std::string &toml_text)
    {
        toml::table root;
        try
        {
            root = toml::parse(toml_text);
        }
        catch (const toml::parse_error &e)
        {
            std::ostringstream os;
            os << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
            fail(os.str());
        }
        ExperimentFile f;
        apply_table(root, f.base, true);
        f.base.validate();
        if (const auto *s = root.get("series"))
        {
            const auto *arr = s->as_array();
            if (!arr || !arr->is_array_of_tables())
                fail("'series' must be an array of tables ([[series]])");
            std::set<std::string> labels;
            for (std::size_t i = 0; i < arr->size(); ++i)
            {
                ScenarioConfig c = f.base;
                c.label.clear();
                apply_table(*arr->get(i)->as_table(), c, false);
                if (c.label.empty())
                    c.label = "series" + std::to_string(i);
                if (!labels.insert(c.label).second)
                    fail("duplicate series label '" + c.label + "'");
                for (char ch : c.label)
                    if (!(std::isalnum((unsigned char)ch) || ch == '_' || ch == '-'))
                        fail("series label '" + c.label + "' may only use letters, digits, '_' and '-'");
                c.validate();
                f.series.push_back(std::move(c));
            }
        }
        return f;
    }

    ExperimentFile load_experiment(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            fail("cannot read config file '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_experiment(ss.str());
    }

} // namespace psa
