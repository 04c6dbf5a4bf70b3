// SPDX-License-Identifier: Apache-2.0
//
// rss-doppler: roadside-scatterer channel model for vehicle-to-vehicle links
// Copyright (C) 2026 The rss-doppler authors
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

#include "commands.hpp"

#include "rss/analytic_pdf.hpp"
#include "rss/config_io.hpp"
#include "rss/error.hpp"
#include "rss/fitting.hpp"
#include "rss/montecarlo.hpp"
#include "rss/plot_data.hpp"
#include "rss/spectrum.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace rss::cli
{
    namespace
    {
        namespace fs = std::filesystem;

        constexpr double kmh = 1.0 / 3.6;

        std::uint64_t default_seed()
        {
            if (const char *s = std::getenv("RSS_SEED"))
            {
                char *end = nullptr;
                const unsigned long long v = std::strtoull(s, &end, 10);
                if (end != s && *end == '\0')
                    return v;
                std::cerr << "warning: ignoring non-numeric RSS_SEED='" << s << "'\n";
            }
            return 1;
        }

        ModelConfig load_scene(const std::string &spec)
        {
            if (spec.rfind("builtin:", 0) == 0)
                return builtin_config(spec.substr(8));
            return read_config(spec);
        }

        std::string manifest_path_for(const std::string &out)
        {
            return out + ".manifest.json";
        }

        // Opens a CSV output and writes the manifest reference line.
        std::ofstream open_csv(const std::string &path, const std::string &manifest)
        {
            if (const auto parent = fs::path(path).parent_path(); !parent.empty())
                fs::create_directories(parent);
            std::ofstream out(path);
            if (!out)
                throw ConfigError("cannot write " + path);
            out << "# manifest=" << fs::path(manifest).filename().string() << '\n';
            return out;
        }

        struct Context
        {
            std::vector<std::string> args;
            unsigned threads = 0;

            RunManifest manifest(const std::string &command, const ModelConfig *cfg = nullptr) const
            {
                RunManifest m;
                m.command = command;
                m.argv = args;
                if (cfg)
                    m.config = format_config(*cfg);
                m.timestamp = utc_timestamp();
                return m;
            }
        };

        void put_grid(RunManifest &m, const std::string &name, double lo, double hi, std::size_t n)
        {
            std::ostringstream s;
            s << std::setprecision(12) << "uniform lo=" << lo << " hi=" << hi << " n=" << n;
            m.grids[name] = s.str();
        }

        std::vector<double> parse_values(const std::string &text)
        {
            std::vector<double> out;
            const auto colon = std::count(text.begin(), text.end(), ':');
            if (colon == 2)
            {
                double a = 0, b = 0, st = 0;
                char c1 = 0, c2 = 0;
                std::istringstream s(text);
                s >> a >> c1 >> b >> c2 >> st;
                if (!s || !(st > 0.0) || b < a)
                    throw CLI::ValidationError("--values", "expected start:stop:step with step > 0");
                const auto n = static_cast<std::size_t>(std::floor((b - a) / st + 1e-9)) + 1;
                for (std::size_t i = 0; i < n; ++i)
                    out.push_back(a + st * static_cast<double>(i));
                return out;
            }
            std::stringstream s(text);
            std::string item;
            while (std::getline(s, item, ','))
            {
                try
                {
                    out.push_back(std::stod(item));
                }
                catch (const std::exception &)
                {
                    throw CLI::ValidationError("--values", "not a number: " + item);
                }
            }
            if (out.empty())
                throw CLI::ValidationError("--values", "no values given");
            return out;
        }

        // --- individual commands ---------------------------------------------------------

        void write_dpdf(const ValidatedConfig &cfg, std::size_t n, const std::string &out, const Context &ctx,
                        RunManifest m)
        {
            const DopplerDensity density(cfg);
            const auto grid = default_dpdf_grid(cfg, n);
            const auto values = density.evaluate(grid, ctx.threads);
            put_grid(m, "nu", grid.front(), grid.back(), grid.size());
            m.outputs = {out};
            const std::string mp = manifest_path_for(out);
            auto f = open_csv(out, mp);
            f << "# config_hash=" << config_hash(cfg.scene()) << " empty_pieces="
              << 8 - density.support().active_pieces() << '\n';
            write_csv(f, {"nu_hz", "density"}, {&grid, &values});
            write_manifest(m, mp);
        }

        void write_dpsd(const SpectrumCurve &c, const std::string &out, const RunManifest &m)
        {
            const std::string mp = manifest_path_for(out);
            auto f = open_csv(out, mp);
            f << std::setprecision(12) << "# los_impulse_hz=" << (c.los_impulse ? c.los_impulse->frequency : 0.0)
              << " weight=" << c.impulse_weight() << " convention=" << to_string(c.convention)
              << " raw_impulse_weight=" << c.raw_impulse_weight << " raw_continuous_weight=" << c.raw_continuous_weight
              << " config_hash=" << c.config_hash << '\n';
            write_csv(f, {"nu_hz", "density"}, {&c.nu, &c.values});
            write_manifest(m, mp);
        }

        void write_stats_row(std::ostream &o, const DopplerStats &s, bool header)
        {
            if (header)
                o << "nu_min,nu_max,B_d,B_1,B_2\n";
            o << std::setprecision(10) << s.nu_min << ',' << s.nu_max << ',' << s.B_d << ',' << s.B_1 << ',' << s.B_2
              << '\n';
        }

        void write_grid2d(const DensityGrid &g, const std::string &out, RunManifest m, const char *n1, const char *n2)
        {
            put_grid(m, n1, g.axis1.front(), g.axis1.back(), g.axis1.size());
            put_grid(m, n2, g.axis2.front(), g.axis2.back(), g.axis2.size());
            m.outputs = {out};
            const std::string mp = manifest_path_for(out);
            auto f = open_csv(out, mp);
            f << "# " << n1 << "," << n2 << " total_mass=" << std::setprecision(12) << g.total_mass << '\n';
            f << "axis1,axis2,value\n";
            for (std::size_t i = 0; i < g.axis1.size(); ++i)
                for (std::size_t j = 0; j < g.axis2.size(); ++j)
                    f << g.axis1[i] << ',' << g.axis2[j] << ',' << g.at(i, j) << '\n';
            write_manifest(m, mp);
        }

        struct SimulateOptions
        {
            std::size_t n = 10000;
            std::uint64_t seed = 1;
            double fs_mult = 8.0;
            double duration = 2.0;
            std::size_t reps = 50;
            std::size_t hist_n = 100000;
            std::size_t hist_reps = 20;
            double hist_width = 20.0; // Hz
        };

        // Gain series, DPSD estimate, Doppler and angle histograms, chi-square report.
        std::vector<std::string> simulate(const ValidatedConfig &cfg, const SimulateOptions &o, const std::string &prefix,
                                          const Context &ctx, RunManifest m)
        {
            if (const auto parent = fs::path(prefix).parent_path(); !parent.empty())
                fs::create_directories(parent);
            const std::string mp = prefix + "_manifest.json";
            const double fs_hz = o.fs_mult * cfg.f_dmax();

            std::vector<GainSeries> series(o.reps);
            for (std::size_t r = 0; r < o.reps; ++r)
                series[r] = gain_series(cfg, o.n, fs_hz, o.duration, o.seed, static_cast<std::uint32_t>(r));
            const SpectrumCurve est = estimate_dpsd(series, {}, ctx.threads);

            std::vector<std::string> outputs;
            {
                const std::string path = prefix + "_gain.csv";
                auto f = open_csv(path, mp);
                f << "t,re,im\n" << std::setprecision(12);
                const auto &s = series.front();
                for (std::size_t i = 0; i < s.samples.size(); ++i)
                    f << static_cast<double>(i) / s.fs << ',' << s.samples[i].real() << ',' << s.samples[i].imag() << '\n';
                outputs.push_back(path);
            }
            {
                const std::string path = prefix + "_dpsd.csv";
                auto f = open_csv(path, mp);
                write_csv(f, {"nu_hz", "density"}, {&est.nu, &est.values});
                outputs.push_back(path);
            }

            const DopplerDensity density(cfg);
            const auto b = density.bounds();
            const double lo = std::floor(b.nu_min / o.hist_width) * o.hist_width;
            const double hi = std::ceil(b.nu_max / o.hist_width) * o.hist_width;
            HistogramSpec spec{lo, hi, static_cast<std::size_t>(std::llround((hi - lo) / o.hist_width))};

            std::vector<std::vector<double>> doppler(o.hist_reps);
            std::vector<std::vector<std::array<double, 2>>> angles(o.hist_reps);
            for (std::size_t r = 0; r < o.hist_reps; ++r)
            {
                const auto set = sample_scatterers(cfg, o.hist_n, o.seed, static_cast<std::uint32_t>(1000 + r));
                doppler[r] = doppler_samples(cfg, set);
                angles[r] = angle_samples(cfg, set);
            }
            const HistogramEstimate hd = estimate_histogram(doppler, spec);
            const auto probs = doppler_bin_probabilities(density, hd.edges1);
            {
                const std::string path = prefix + "_hist_doppler.csv";
                auto f = open_csv(path, mp);
                f << "# repetitions=" << hd.repetitions << " total_bins=" << hd.total_bins
                  << " nonempty_bins=" << hd.nonempty_bins << " out_of_range=" << hd.out_of_range << '\n';
                f << "nu_lo,nu_hi,density,analytic,empty\n" << std::setprecision(12);
                for (std::size_t i = 0; i < spec.bins; ++i)
                    f << hd.edges1[i] << ',' << hd.edges1[i + 1] << ',' << hd.density[i] << ','
                      << probs[i] / spec.width() << ',' << (hd.empty[i] ? 1 : 0) << '\n';
                outputs.push_back(path);
            }
            {
                const HistogramSpec sa{-pi, pi, 90};
                const HistogramEstimate ha = estimate_histogram(angles, sa, sa);
                const std::string path = prefix + "_hist_aod_aoa.csv";
                auto f = open_csv(path, mp);
                f << "# edges uniform over (-pi, pi], 90 x 90 bins, repetitions=" << ha.repetitions << '\n';
                f << "aod_lo,aoa_lo,density\n" << std::setprecision(12);
                for (std::size_t i = 0; i < sa.bins; ++i)
                    for (std::size_t j = 0; j < sa.bins; ++j)
                        if (!ha.empty[i * sa.bins + j])
                            f << ha.edges1[i] << ',' << ha.edges2[j] << ',' << ha.density[i * sa.bins + j] << '\n';
                outputs.push_back(path);
            }
            {
                const GofReport g = chi_square_test(hd, probs);
                const std::string path = prefix + "_gof.csv";
                auto f = open_csv(path, mp);
                f << "test,Z,dof,bins_used,p,z_alpha,accept,mse\n" << std::setprecision(10);
                f << "doppler," << g.Z << ',' << g.dof << ',' << g.bins_used << ',' << g.p << ',' << g.z_alpha << ','
                  << (g.accept ? 1 : 0) << ',' << g.mse << '\n';
                outputs.push_back(path);
            }

            m.seeds["scatterers_and_phases"] = o.seed;
            put_grid(m, "psd_nu", est.nu.front(), est.nu.back(), est.nu.size());
            put_grid(m, "hist_doppler", spec.lo, spec.hi, spec.bins);
            m.grids["sim"] = "n=" + std::to_string(o.n) + " reps=" + std::to_string(o.reps) +
                             " fs_mult=" + std::to_string(o.fs_mult) + " duration=" + std::to_string(o.duration) +
                             " hist_n=" + std::to_string(o.hist_n) + " hist_reps=" + std::to_string(o.hist_reps);
            m.outputs = outputs;
            write_manifest(m, mp);
            return outputs;
        }

        void run_sweep(const ModelConfig &tmpl, SweepParameter param, const std::vector<double> &values, double fixed,
                       std::size_t grid_points, const std::string &out, const std::string &curves_out,
                       const Context &ctx, RunManifest m)
        {
            const auto points = sweep(tmpl, param, values, fixed, grid_points, ctx.threads);
            const std::string mp = manifest_path_for(out);
            auto f = open_csv(out, mp);
            f << "param,value,ok,nu_min,nu_max,B_d,B_1,B_2,error\n" << std::setprecision(10);
            const char *pname = param == SweepParameter::RegionLengthRatio ? "r_l" : "w_r";
            for (const auto &p : points)
            {
                f << pname << ',' << p.value << ',' << (p.ok ? 1 : 0) << ',';
                if (p.ok)
                    f << p.stats.nu_min << ',' << p.stats.nu_max << ',' << p.stats.B_d << ',' << p.stats.B_1 << ','
                      << p.stats.B_2 << ',';
                else
                    f << ",,,,,";
                std::string err = p.error;
                std::replace(err.begin(), err.end(), ',', ';');
                f << err << '\n';
            }
            m.outputs = {out};
            if (!curves_out.empty())
            {
                std::vector<PlotCurve> curves;
                for (const auto &p : points)
                    if (p.ok)
                    {
                        std::ostringstream label;
                        label << pname << '=' << p.value;
                        curves.push_back({label.str(), p.curve.nu, p.curve.values});
                    }
                auto cf = open_csv(curves_out, mp);
                emit_plot_data(curves, cf);
                m.outputs.push_back(curves_out);
            }
            m.grids["sweep"] = std::string(pname) + " values=" + std::to_string(values.size()) +
                               " fixed=" + std::to_string(fixed) + " grid_points=" + std::to_string(grid_points);
            write_manifest(m, mp);
        }

        // --- figure recipes -----------------------------------------------------------------

        struct ReproOptions
        {
            std::string figure;
            std::string scenario = "sd";
            std::string out_dir = "repro";
            bool full_scale = false;
            std::uint64_t seed = 1;
        };

        void repro(const ReproOptions &o, const Context &ctx)
        {
            fs::create_directories(o.out_dir);
            const auto path = [&](const std::string &name) { return (fs::path(o.out_dir) / name).string(); };
            const std::string &f = o.figure;

            if (f == "fig3" || f == "fig4")
            {
                const auto cfg = validate_config(builtin_config("fig3_4"));
                write_grid2d(aoa_aod_grid(cfg, 400, 400, ctx.threads), path(f + "_aod_aoa.csv"),
                             ctx.manifest("repro", &cfg.scene()), "aod", "aoa");
                write_grid2d(doppler_aoa_grid(cfg, 400, 400, ctx.threads), path(f + "_doppler_aoa.csv"),
                             ctx.manifest("repro", &cfg.scene()), "nu", "aoa");
                std::cout << "wrote " << path(f + "_aod_aoa.csv") << " and " << path(f + "_doppler_aoa.csv") << '\n';
            }
            else if (f == "fig5")
            {
                if (o.scenario != "sd" && o.scenario != "od")
                    throw CLI::ValidationError("--scenario", "must be sd or od");
                const auto cfg = validate_config(builtin_config("fig5_" + o.scenario));
                const std::string stem = "fig5_" + o.scenario;
                write_dpdf(cfg, 4096, path(stem + "_dpdf.csv"), ctx, ctx.manifest("repro", &cfg.scene()));
                SimulateOptions so;
                so.seed = o.seed;
                if (o.full_scale)
                {
                    so.n = 100000;
                    so.reps = 100;
                    so.hist_n = 100000000;
                    so.hist_reps = 100;
                }
                simulate(cfg, so, path(stem), ctx, ctx.manifest("repro", &cfg.scene()));
                const auto b = doppler_bounds(cfg);
                std::cout << std::setprecision(8) << stem << ": nu_min=" << b.nu_min << " Hz, nu_max=" << b.nu_max
                          << " Hz; outputs in " << o.out_dir << '\n';
            }
            else if (f == "fig6")
            {
                const ModelConfig tmpl = builtin_config("fig6");
                std::vector<double> rl, wr;
                // r_l > 1 keeps both vehicles between the region ends; w_R > 10.5 m keeps
                // the road wider than the lane offsets of this template
                for (int i = 0; i <= 12; ++i)
                    rl.push_back(1.05 + 0.25 * i);
                for (int i = 0; i <= 10; ++i)
                    wr.push_back(12.0 + 4.0 * i);
                run_sweep(tmpl, SweepParameter::RegionLengthRatio, rl, 28.0, 1024, path("fig6a_stats.csv"),
                          path("fig6a_curves.csv"), ctx, ctx.manifest("repro", &tmpl));
                run_sweep(tmpl, SweepParameter::RoadWidth, wr, 1.5, 1024, path("fig6b_stats.csv"),
                          path("fig6b_curves.csv"), ctx, ctx.manifest("repro", &tmpl));
                std::cout << "wrote fig6a/fig6b sweeps to " << o.out_dir << '\n';
            }
            else if (f == "fig7" || f == "fig8" || f == "fig9")
            {
                const auto cfg = validate_config(builtin_config(f));
                const DopplerDensity density(cfg);
                const auto grid = default_dpdf_grid(cfg, 4096);
                const SpectrumCurve c = dpsd(cfg, density, grid, WeightConvention::Amplitude, ctx.threads);
                RunManifest m = ctx.manifest("repro", &cfg.scene());
                put_grid(m, "nu", grid.front(), grid.back(), grid.size());
                m.outputs = {path(f + "_dpsd.csv"), path(f + "_plot.csv"), path(f + "_stats.csv")};
                write_dpsd(c, path(f + "_dpsd.csv"), m);
                emit_plot_data({{f + "_model", c.nu, c.values}}, path(f + "_plot.csv"), f == "fig9");
                const DopplerStats st = doppler_stats(cfg, density);
                std::ofstream sf(path(f + "_stats.csv"));
                write_stats_row(sf, st, true);
                write_stats_row(std::cout, st, true);
            }
            else
                throw CLI::ValidationError("figure", "unknown figure '" + f + "' (fig3..fig9)");
        }
    }

    ModelConfig builtin_config(const std::string &name)
    {
        ModelConfig c;
        c.fc = 5.9e9;
        const double v105 = 105.0 * kmh;
        if (name == "fig5_sd" || name == "fig5_od" || name == "fig8" || name == "fig3_4")
        {
            c.tx = {-200.0, -8.75, v105, 0.0};
            c.rx = {200.0, -8.75, v105, 0.0};
            c.upper = {-263.917, 276.045, 18.364, 26.396};
            c.lower = {-263.146, 277.483, -23.747, -20.605};
            if (name == "fig5_od")
                c.rx.gamma = pi;
            if (name == "fig8")
                c.k_factor = 1.535;
            if (name == "fig3_4")
            {
                c.upper.d = 106.396;
                c.lower.c = -103.747;
            }
            return c;
        }
        if (name == "fig6")
        {
            c.tx = {-200.0, -5.25, v105, 0.0};
            c.rx = {200.0, -1.75, v105, 0.0};
            return symmetric_layout(c, 1.5, 28.0);
        }
        if (name == "fig7")
        {
            c.tx = {-30.9, 0.0, 24.2, 0.0};
            c.rx = {30.0, 0.0, 24.7, 0.0};
            c.upper = {-49.0, 46.0, 14.0, 17.0};
            c.lower = {-49.0, 46.0, -17.0, -14.0};
            c.k_factor = 1.715;
            return c;
        }
        if (name == "fig9")
        {
            c.tx = {-50.0, -1.75, 32.8 * kmh, 0.0};
            c.rx = {50.0, 1.75, 38.0 * kmh, pi};
            c.upper = {-58.557, 58.753, 8.000, 13.351};
            c.lower = {-58.658, 57.919, -19.114, -8.003};
            c.k_factor = 0.0;
            return c;
        }
        throw ConfigError("unknown builtin config '" + name + "'");
    }

    std::vector<std::string> builtin_config_names()
    {
        return {"fig3_4", "fig5_sd", "fig5_od", "fig6", "fig7", "fig8", "fig9"};
    }

    int run(const std::vector<std::string> &args)
    {
        CLI::App app{"Roadside-scatterer Doppler model: analytic densities, spectra, simulation and fitting", "rss"};
        app.require_subcommand(1);
        app.fallthrough();
        app.set_version_flag("--version", std::string(tool_version));

        Context ctx;
        ctx.args = args;
        app.add_option("--threads", ctx.threads, "worker threads (0 = available parallelism)");

        std::function<void()> action;
        std::string config;
        std::string out;
        const std::string config_help = "scene file (key = value) or builtin:NAME";

        // dpdf
        std::size_t grid_n = 4096;
        auto *c_dpdf = app.add_subcommand("dpdf", "Doppler PDF of the diffuse part on a uniform grid");
        c_dpdf->add_option("--config", config, config_help)->required();
        c_dpdf->add_option("--grid", grid_n, "grid points over [nu_min - 1, nu_max + 1]")->capture_default_str();
        c_dpdf->add_option("--out", out, "output CSV (nu_hz,density)")->required();
        c_dpdf->callback([&] {
            action = [&] {
                const auto cfg = validate_config(load_scene(config));
                write_dpdf(cfg, grid_n, out, ctx, ctx.manifest("dpdf", &cfg.scene()));
            };
        });

        // dpsd
        std::string convention = "amplitude";
        auto *c_dpsd = app.add_subcommand("dpsd", "Rician Doppler power spectral density");
        c_dpsd->add_option("--config", config, config_help)->required();
        c_dpsd->add_option("--grid", grid_n, "grid points")->capture_default_str();
        c_dpsd->add_option("--convention", convention, "LoS/diffuse weighting: amplitude or power")
            ->check(CLI::IsMember({"amplitude", "power"}))
            ->capture_default_str();
        c_dpsd->add_option("--out", out, "output CSV (nu_hz,density)")->required();
        c_dpsd->callback([&] {
            action = [&] {
                const auto cfg = validate_config(load_scene(config));
                const DopplerDensity density(cfg);
                const auto grid = default_dpdf_grid(cfg, grid_n);
                const auto c = dpsd(cfg, density, grid, parse_weight_convention(convention), ctx.threads);
                RunManifest m = ctx.manifest("dpsd", &cfg.scene());
                put_grid(m, "nu", grid.front(), grid.back(), grid.size());
                m.outputs = {out};
                write_dpsd(c, out, m);
            };
        });

        // stats
        auto *c_stats = app.add_subcommand("stats", "Doppler spread, mean Doppler shift and RMS Doppler spread");
        c_stats->add_option("--config", config, config_help)->required();
        c_stats->add_option("--out", out, "also write the CSV row to this file");
        c_stats->callback([&] {
            action = [&] {
                const auto cfg = validate_config(load_scene(config));
                const DopplerStats s = doppler_stats(cfg);
                write_stats_row(std::cout, s, true);
                if (!out.empty())
                {
                    const std::string mp = manifest_path_for(out);
                    auto f = open_csv(out, mp);
                    write_stats_row(f, s, true);
                    RunManifest m = ctx.manifest("stats", &cfg.scene());
                    m.outputs = {out};
                    write_manifest(m, mp);
                }
            };
        });

        // pdf-aoa and pdf-doppler-aoa
        std::size_t n1 = 256, n2 = 256;
        auto *c_aoa = app.add_subcommand("pdf-aoa", "joint AoD-AoA density on a grid (axis1 = AoD, axis2 = AoA)");
        c_aoa->add_option("--config", config, config_help)->required();
        c_aoa->add_option("--n1", n1, "AoD grid points")->capture_default_str();
        c_aoa->add_option("--n2", n2, "AoA grid points")->capture_default_str();
        c_aoa->add_option("--out", out, "output CSV (axis1,axis2,value)")->required();
        c_aoa->callback([&] {
            action = [&] {
                const auto cfg = validate_config(load_scene(config));
                write_grid2d(aoa_aod_grid(cfg, n1, n2, ctx.threads), out, ctx.manifest("pdf-aoa", &cfg.scene()), "aod",
                             "aoa");
            };
        });
        auto *c_dAoa = app.add_subcommand("pdf-doppler-aoa", "joint Doppler-AoA density (axis1 = Doppler, axis2 = AoA)");
        c_dAoa->add_option("--config", config, config_help)->required();
        c_dAoa->add_option("--n1", n1, "Doppler grid points")->capture_default_str();
        c_dAoa->add_option("--n2", n2, "AoA grid points")->capture_default_str();
        c_dAoa->add_option("--out", out, "output CSV (axis1,axis2,value)")->required();
        c_dAoa->callback([&] {
            action = [&] {
                const auto cfg = validate_config(load_scene(config));
                write_grid2d(doppler_aoa_grid(cfg, n1, n2, ctx.threads), out,
                             ctx.manifest("pdf-doppler-aoa", &cfg.scene()), "nu", "aoa");
            };
        });

        // simulate
        SimulateOptions so;
        so.seed = default_seed();
        std::string prefix;
        auto *c_sim = app.add_subcommand("simulate", "sum-of-cisoids simulation, histograms and chi-square test");
        c_sim->add_option("--config", config, config_help)->required();
        c_sim->add_option("--n", so.n, "cisoids per realization")->capture_default_str();
        c_sim->add_option("--seed", so.seed, "base seed (default: RSS_SEED or 1)")->capture_default_str();
        c_sim->add_option("--fs-mult", so.fs_mult, "sampling rate as a multiple of f_Dmax")->capture_default_str();
        c_sim->add_option("--duration", so.duration, "seconds per realization")->capture_default_str();
        c_sim->add_option("--reps", so.reps, "ACF averages")->capture_default_str();
        c_sim->add_option("--hist-n", so.hist_n, "scatterers per histogram repetition")->capture_default_str();
        c_sim->add_option("--hist-reps", so.hist_reps, "histogram repetitions")->capture_default_str();
        c_sim->add_option("--hist-width", so.hist_width, "Doppler histogram bin width [Hz]")->capture_default_str();
        c_sim->add_option("--out-prefix", prefix, "prefix of the output files")->required();
        c_sim->callback([&] {
            action = [&] {
                const auto cfg = validate_config(load_scene(config));
                for (const auto &p : simulate(cfg, so, prefix, ctx, ctx.manifest("simulate", &cfg.scene())))
                    std::cout << "wrote " << p << '\n';
            };
        });

        // sweep
        std::string param, values_text, curves_out;
        double fixed = 0.0;
        std::size_t sweep_grid = 1024;
        auto *c_sweep = app.add_subcommand("sweep", "symmetric-layout sweep over r_l or w_r");
        c_sweep->add_option("--config-template", config, "vehicles, carrier and K ("+ config_help + ")")->required();
        c_sweep->add_option("--param", param, "r_l or w_r")->required()->check(CLI::IsMember({"r_l", "w_r"}));
        c_sweep->add_option("--values", values_text, "comma list or start:stop:step")->required();
        c_sweep->add_option("--fixed", fixed, "the other parameter (w_r for an r_l sweep, r_l for a w_r sweep)")
            ->required();
        c_sweep->add_option("--grid", sweep_grid, "DPSD grid points per value")->capture_default_str();
        c_sweep->add_option("--out", out, "stats CSV")->required();
        c_sweep->add_option("--curves-out", curves_out, "optional long-format curve CSV");
        c_sweep->callback([&] {
            action = [&] {
                const ModelConfig tmpl = load_scene(config);
                run_sweep(tmpl, parse_sweep_parameter(param), parse_values(values_text), fixed, sweep_grid, out,
                          curves_out, ctx, ctx.manifest("sweep", &tmpl));
            };
        });

        // fit
        std::string measured;
        double eps1 = 0.001, eps2 = 0.001, road_max = 0.0;
        int restarts = 8, max_evals = 1500;
        bool per_tap = false;
        std::uint64_t fit_seed = default_seed();
        auto *c_fit = app.add_subcommand("fit", "constrained least-squares fit of regions and K to a measured DPSD");
        c_fit->add_option("--config-scene", config, "vehicles and carrier; regions and K are the initial guess")
            ->required();
        c_fit->add_option("--measured", measured, "CSV nu_hz,value (uniform grid)")->required();
        c_fit->add_flag("--per-tap", per_tap, "sum all value columns (one per delay tap) before normalizing");
        c_fit->add_option("--eps1", eps1, "tolerance on the mean Doppler shift [Hz]")->capture_default_str();
        c_fit->add_option("--eps2", eps2, "tolerance on the RMS Doppler spread [Hz]")->capture_default_str();
        c_fit->add_option("--road-width-max", road_max, "upper bound on c1 - d2 [m]")->required();
        c_fit->add_option("--restarts", restarts, "multi-start count")->capture_default_str();
        c_fit->add_option("--max-evals", max_evals, "direct-search evaluations per restart")->capture_default_str();
        c_fit->add_option("--seed", fit_seed, "restart jitter seed (default: RSS_SEED or 1)")->capture_default_str();
        c_fit->add_option("--out", out, "restart table CSV")->required();
        c_fit->callback([&] {
            action = [&] {
                const ModelConfig scene = load_scene(config);
                const MeasuredSpectrum ms = ingest_spectrum(measured, per_tap, fs::path(measured).stem().string());
                const FitParams init = params_of(scene);
                FitProblem p = make_fit_problem(scene, init, road_max, eps1, eps2);
                p.restarts = restarts;
                p.max_evaluations = max_evals;
                p.seed = fit_seed;
                p.threads = ctx.threads;
                auto table = run_restarts(p, ms, project(p, init));

                const std::string mp = manifest_path_for(out);
                RunManifest m = ctx.manifest("fit", &scene);
                m.seeds["jitter"] = fit_seed;
                put_grid(m, "measured", ms.nu_min, ms.nu_max, ms.M);
                m.outputs = {out};
                {
                    auto f = open_csv(out, mp);
                    f << std::setprecision(10) << "# measured B1=" << ms.B_1 << " B2=" << ms.B_2
                      << " delta_nu=" << ms.delta_nu << " M=" << ms.M << '\n';
                    write_restart_table(f, table);
                }
                const FitReport rep = select_best(p, ms, std::move(table));
                const std::string cfg_out = out + ".fitted.cfg";
                {
                    std::ofstream f(cfg_out);
                    write_config(f, rep.config);
                }
                m.outputs.push_back(cfg_out);
                write_manifest(m, mp);
                std::cout << std::setprecision(10) << "best restart " << rep.best_restart << ": LSE=" << rep.lse
                          << " MSE=" << rep.mse << " MDSE=" << rep.mdse << " RDSE=" << rep.rdse << '\n';
                for (std::size_t j = 0; j < fit_dim; ++j)
                    std::cout << "  " << fit_param_names[j] << " = " << rep.x[j] << '\n';
            };
        });

        // repro
        ReproOptions ro;
        ro.seed = default_seed();
        auto *c_repro = app.add_subcommand("repro", "figure recipes fig3..fig9 at desk scale");
        c_repro->add_option("figure", ro.figure, "fig3, fig4, fig5, fig6, fig7, fig8 or fig9")->required();
        c_repro->add_option("--scenario", ro.scenario, "fig5 only: sd or od")->capture_default_str();
        c_repro->add_option("--out-dir", ro.out_dir, "output directory")->capture_default_str();
        c_repro->add_option("--seed", ro.seed, "simulation seed (default: RSS_SEED or 1)");
        c_repro->add_flag("--full-scale", ro.full_scale,
                          "fig5 at full scale: 1e8 scatterers x 100 histograms, 1e5 cisoids x 100 averages "
                          "(hours, large memory)");
        c_repro->callback([&] { action = [&] { repro(ro, ctx); }; });

        // rerun
        std::string manifest_in;
        auto *c_rerun = app.add_subcommand("rerun", "replay the invocation recorded in a manifest");
        c_rerun->add_option("manifest", manifest_in, "manifest JSON")->required()->check(CLI::ExistingFile);
        c_rerun->callback([&] {
            action = [&] {
                const RunManifest m = read_manifest(manifest_in);
                if (!m.argv.empty() && m.argv.front() == "rerun")
                    throw ConfigError("refusing to replay a rerun manifest");
                const int code = run(m.argv);
                if (code != exit_ok)
                    throw Error("replayed command exited with code " + std::to_string(code));
            };
        });

        try
        {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &e)
        {
            return app.exit(e);
        }
        catch (const CLI::CallForAllHelp &e)
        {
            return app.exit(e);
        }
        catch (const CLI::CallForVersion &e)
        {
            return app.exit(e);
        }
        catch (const CLI::ParseError &e)
        {
            app.exit(e);
            return exit_usage;
        }

        try
        {
            if (action)
                action();
            return exit_ok;
        }
        catch (const CLI::ValidationError &e)
        {
            std::cerr << "usage error: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const Error &e)
        {
            std::cerr << "error: " << e.what() << '\n';
            return exit_failure;
        }
        catch (const std::exception &e)
        {
            std::cerr << "error: " << e.what() << '\n';
            return exit_failure;
        }
    }
}
