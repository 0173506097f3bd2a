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
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <system_error>
#include <tuple>

#include "psa/errors.hpp"
#include "psa/experiments.hpp"

namespace psa
{
    namespace
    {
        double db(double x) { return std::pow(10.0, x / 10.0); }

        // Sequential accumulation keeps the output independent of anything but the trial order.
        struct Acc
        {
            std::vector<double> values;
            int failed = 0;

            void add(double v) { values.push_back(v); }
            void fail() { ++failed; }
        };

        ResultRow summarize(double sweep_value, ArrayKind kind, const std::string &metric, const Acc &a)
        {
            ResultRow r;
            r.sweep_value = sweep_value;
            r.array_kind = kind;
            r.metric_kind = metric;
            r.n = (int)a.values.size();
            r.infeasible = a.failed;
            if (r.n == 0)
            {
                r.mean = std::numeric_limits<double>::quiet_NaN();
                r.std = std::numeric_limits<double>::quiet_NaN();
                return r;
            }
            double s = 0.0;
            for (double v : a.values)
                s += v;
            r.mean = s / r.n;
            double q = 0.0;
            for (double v : a.values)
                q += (v - r.mean) * (v - r.mean);
            r.std = r.n > 1 ? std::sqrt(q / (r.n - 1)) : 0.0;
            return r;
        }

        // A design that cannot route any signal past the nulls still achieves zero secrecy rate.
        bool zero_rate_failure(const PsaError &e)
        {
            return e.kind() == ErrorKind::infeasible || e.kind() == ErrorKind::degenerate_manifold ||
                   e.kind() == ErrorKind::degenerate_nullspace;
        }

        // The SIMO pointing depends only on the geometry, so it is shared by all trials.
        class PointingCache
        {
        public:
            struct Entry
            {
                std::optional<Vec> p;
                std::optional<ErrorKind> error;
            };

            const Entry &get(const SimoScenario &sc, std::ostream *trace)
            {
                const auto key = std::make_tuple(sc.n_d, sc.spacing, sc.desired.theta, sc.desired.phi, sc.desired.alpha,
                                                 sc.desired.beta, sc.jammer.theta, sc.jammer.phi, sc.jammer.alpha,
                                                 sc.jammer.beta);
                auto it = cache_.find(key);
                if (it != cache_.end())
                    return it->second;
                Entry e;
                try
                {
                    PointingOptions opt;
                    opt.penalty.trace = trace;
                    e.p = optimize_pointing(sc, opt).p;
                }
                catch (const PsaError &err)
                {
                    e.error = err.kind();
                }
                return cache_.emplace(key, std::move(e)).first->second;
            }

        private:
            using Key = std::tuple<int, double, double, double, double, double, double, double, double, double>;
            std::map<Key, Entry> cache_;
        };

        void trace_line(std::ostream *t, double v, ArrayKind k, int trial, const std::string &metric, double value,
                        const char *status)
        {
            if (t)
                *t << "trial\t" << format_number(v) << '\t' << array_kind_name(k) << '\t' << trial << '\t' << metric
                   << '\t' << format_number(value) << '\t' << status << '\n';
        }

        struct Collector
        {
            std::map<std::pair<int, std::string>, Acc> accs;
            std::vector<std::pair<int, std::string>> order; // first-seen order of (array, metric)
            std::ostream *trace = nullptr;
            double sweep_value = 0.0;
            int trial = 0;

            Acc &at(ArrayKind k, const std::string &metric)
            {
                const auto key = std::make_pair((int)k, metric);
                auto it = accs.find(key);
                if (it == accs.end())
                {
                    order.push_back(key);
                    it = accs.emplace(key, Acc{}).first;
                }
                return it->second;
            }

            void ok(ArrayKind k, const std::string &metric, double v, const char *status = "ok")
            {
                at(k, metric).add(v);
                trace_line(trace, sweep_value, k, trial, metric, v, status);
            }

            // Counted as a zero-rate design; the trace keeps the reason.
            void zero(ArrayKind k, const std::string &metric, const PsaError &e)
            {
                ok(k, metric, 0.0, error_kind_name(e.kind()));
            }

            void failed(ArrayKind k, const std::string &metric, const char *why)
            {
                at(k, metric).fail();
                trace_line(trace, sweep_value, k, trial, metric, std::numeric_limits<double>::quiet_NaN(), why);
            }
        };

        void simo_trial(const ScenarioConfig &c, const SimoScenario &sc, bool psa, bool csa, PointingCache &cache,
                        Collector &out)
        {
            const bool power = c.mode == Mode::power_min;
            const std::string metric = power ? "total_power_db" : "secrecy_rate_bits";
            const double p_max = db(c.p_max_db);
            if (psa)
            {
                const auto &pt = cache.get(sc, out.trace);
                try
                {
                    if (!pt.p)
                        throw PsaError(*pt.error, "pointing");
                    if (power)
                        out.ok(ArrayKind::psa, metric, 10.0 * std::log10(min_total_power(sc, *pt.p, c.r_sec_0).total()));
                    else
                        out.ok(ArrayKind::psa, metric, max_secrecy_rate(sc, *pt.p, p_max).rate);
                }
                catch (const PsaError &e)
                {
                    if (!power && zero_rate_failure(e))
                        out.zero(ArrayKind::psa, metric, e);
                    else
                        out.failed(ArrayKind::psa, metric, error_kind_name(e.kind()));
                }
            }
            if (csa)
            {
                const Vec p = csa_pointing(c);
                try
                {
                    if (power)
                        out.ok(ArrayKind::csa, metric,
                               10.0 * std::log10(csa_power_min(sc, p, c.r_sec_0).allocation.total()));
                    else
                        out.ok(ArrayKind::csa, metric, csa_rate_max(sc, p, p_max).secrecy_rate);
                }
                catch (const PsaError &e)
                {
                    out.failed(ArrayKind::csa, metric, error_kind_name(e.kind()));
                }
            }
        }

        AlternatingOptions alternating_options(const ScenarioConfig &c, std::ostream *trace)
        {
            AlternatingOptions opt;
            opt.max_outer = c.max_outer;
            opt.rel_tol = c.outer_rel_tol;
            opt.trace = trace;
            return opt;
        }

        void relay_trial(const ScenarioConfig &c, const RelayScenario &sc, bool psa, bool csa, std::mt19937_64 &rng,
                         Collector &out)
        {
            const std::string rate = "secrecy_rate_bits";
            const Vec z = csa_pointing(c);
            if (csa)
            {
                try
                {
                    out.ok(ArrayKind::csa, rate, fixed_pointing_design(sc, z).secrecy_rate);
                }
                catch (const PsaError &e)
                {
                    if (zero_rate_failure(e))
                        out.zero(ArrayKind::csa, rate, e);
                    else
                        out.failed(ArrayKind::csa, rate, error_kind_name(e.kind()));
                }
            }
            if (!psa)
                return;
            // Starts are drawn right after the channels, perturbations after the starts.
            const std::vector<Vec> starts = relay_starts(c, rng);
            std::optional<RelayDesign> nominal;
            try
            {
                nominal = alternating_multistart(sc, starts, alternating_options(c, out.trace));
                out.ok(ArrayKind::psa, rate, nominal->secrecy_rate);
            }
            catch (const PsaError &e)
            {
                if (zero_rate_failure(e))
                    out.zero(ArrayKind::psa, rate, e);
                else
                    out.failed(ArrayKind::psa, rate, error_kind_name(e.kind()));
            }
            if (c.mode != Mode::robust)
                return;

            const char *metrics[] = {"nonrobust_worst_bits", "robust_worst_bits", "robust_certified_bits"};
            if (!nominal)
            {
                for (const char *m : metrics)
                    out.failed(ArrayKind::psa, m, "NoNominalDesign");
                return;
            }
            // The perturbations are drawn after the channels, so both designs see the same set.
            const ErrorEllipsoid ell = ErrorEllipsoid::scaled_identity(3 * c.n_antennas, c.error_scale);
            std::vector<Vec> deltas;
            deltas.reserve(c.perturbations);
            for (int i = 0; i < c.perturbations; ++i)
                deltas.push_back(ell.sample(rng, false));
            auto worst = [&](const CMat &w) {
                double m = std::numeric_limits<double>::infinity();
                for (const Vec &d : deltas)
                    m = std::min(m, relay_realized_rate(sc, w, nominal->pointing + d));
                return m;
            };
            out.ok(ArrayKind::psa, metrics[0], worst(nominal->w));
            try
            {
                const RobustDesign rb = robust_beamformer(sc, *nominal, ell);
                out.ok(ArrayKind::psa, metrics[1], worst(rb.w_rb));
                out.ok(ArrayKind::psa, metrics[2], rb.worst_case_rate);
            }
            catch (const PsaError &e)
            {
                out.failed(ArrayKind::psa, metrics[1], error_kind_name(e.kind()));
                out.failed(ArrayKind::psa, metrics[2], error_kind_name(e.kind()));
            }
        }

    } // namespace

    std::vector<ResultRow> run_sweep(const ScenarioConfig &c, const SweepOptions &opt)
    {
        c.validate();
        const bool psa = c.arrays != ArraySelect::csa;
        const bool csa = c.arrays != ArraySelect::psa && c.mode != Mode::robust;
        PointingCache cache;
        std::vector<ResultRow> rows;
        for (double v : c.sweep_values)
        {
            const ScenarioConfig cv = c.at(v);
            cv.validate();
            Collector out;
            out.trace = opt.trace;
            out.sweep_value = v;
            for (int t = 0; t < c.trials; ++t)
            {
                out.trial = t;
                std::mt19937_64 rng = trial_rng(c.seed, (std::uint64_t)t);
                if (c.network == Network::simo)
                    simo_trial(cv, sample_simo(cv, rng), psa, csa, cache, out);
                else
                    relay_trial(cv, sample_relay(cv, rng), psa, csa, rng, out);
            }
            // Rows ordered psa before csa, metrics in first-seen order.
            for (int kind : {(int)ArrayKind::psa, (int)ArrayKind::csa})
                for (const auto &key : out.order)
                    if (key.first == kind)
                        rows.push_back(summarize(v, (ArrayKind)kind, key.second, out.accs.at(key)));
        }
        return rows;
    }

    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

    void write_csv(std::ostream &os, const std::vector<ResultRow> &rows)
    {
        os << csv_header << '\n';
        for (const ResultRow &r : rows)
            os << format_number(r.sweep_value) << ',' << array_kind_name(r.array_kind) << ',' << r.metric_kind << ','
               << format_number(r.mean) << ',' << format_number(r.std) << ',' << r.n << ',' << r.infeasible << '\n';
    }

    void write_file_atomic(const std::filesystem::path &path, const std::string &content)
    {
        std::filesystem::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::filesystem::filesystem_error("cannot open for writing", tmp, std::make_error_code(std::errc::io_error));
            out << content;
            out.flush();
            if (!out)
            {
                out.close();
                std::error_code ec;
                std::filesystem::remove(tmp, ec);
                throw std::filesystem::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
            }
        }
        std::filesystem::rename(tmp, path);
    }

} // namespace psa
