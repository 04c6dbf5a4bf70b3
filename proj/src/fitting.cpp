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

#include "rss/fitting.hpp"

#include "rss/analytic_pdf.hpp"
#include "rss/error.hpp"
#include "rss/parallel.hpp"
#include "rss/random.hpp"
#include "rss/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

namespace rss
{
    const std::array<const char *, 9> fit_param_names = {"a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2", "K"};

    std::vector<double> MeasuredSpectrum::grid() const
    {
        std::vector<double> g(M);
        for (std::size_t m = 0; m < M; ++m)
            g[m] = nu(m);
        return g;
    }

    double MeasuredSpectrum::area() const
    {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s * delta_nu;
    }

    namespace
    {
        void discrete_moments(MeasuredSpectrum &s)
        {
            double w = 0.0, m1 = 0.0;
            for (std::size_t m = 0; m < s.M; ++m)
            {
                w += s.values[m];
                m1 += s.values[m] * s.nu(m);
            }
            s.B_1 = m1 / w;
            double m2 = 0.0;
            for (std::size_t m = 0; m < s.M; ++m)
                m2 += s.values[m] * (s.nu(m) - s.B_1) * (s.nu(m) - s.B_1);
            s.B_2 = std::sqrt(m2 / w);
        }

        std::vector<std::string> split_csv(const std::string &line)
        {
            std::vector<std::string> out;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                out.push_back(cell);
            return out;
        }

        bool parse_double(const std::string &s, double &v)
        {
            const char *b = s.c_str();
            char *e = nullptr;
            v = std::strtod(b, &e);
            if (e == b)
                return false;
            while (*e == ' ' || *e == '\t' || *e == '\r')
                ++e;
            return *e == '\0';
        }
    }

    MeasuredSpectrum make_measured(const std::vector<double> &nu, std::vector<double> values, std::string label)
    {
        if (nu.empty() || values.empty())
            throw EmptyInput("spectrum has no samples");
        if (nu.size() != values.size())
            throw EmptyInput("spectrum grid and values differ in length");
        if (nu.size() < 2)
            throw NonUniformGrid("a spectrum needs at least two grid points");

        const double step = (nu.back() - nu.front()) / static_cast<double>(nu.size() - 1);
        if (!(step > 0.0))
            throw NonUniformGrid("grid is not strictly increasing");
        for (std::size_t i = 1; i < nu.size(); ++i)
        {
            const double d = nu[i] - nu[i - 1];
            if (!(d > 0.0))
                throw NonUniformGrid("grid is not strictly increasing at row " + std::to_string(i + 1));
            if (std::abs(d - step) > 1e-6 * step)
                throw NonUniformGrid("grid spacing deviates from " + std::to_string(step) + " Hz at row " +
                                     std::to_string(i + 1));
        }
        double total = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            if (!std::isfinite(values[i]) || values[i] < 0.0)
                throw NegativeDensity("negative or non-finite value at nu = " + std::to_string(nu[i]));
            total += values[i];
        }
        if (!(total > 0.0))
            throw EmptyInput("spectrum carries no power");

        MeasuredSpectrum s;
        s.nu_min = nu.front();
        s.nu_max = nu.back();
        s.delta_nu = step;
        s.M = nu.size();
        s.label = std::move(label);
        for (double &v : values)
            v /= total * step;
        s.values = std::move(values);
        discrete_moments(s);
        return s;
    }

    MeasuredSpectrum ingest_spectrum(std::istream &in, bool per_tap, std::string label)
    {
        std::vector<double> nu, values;
        std::string line;
        std::size_t row = 0;
        std::size_t columns = 0;
        while (std::getline(in, line))
        {
            ++row;
            if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            const auto cells = split_csv(line);
            double first = 0.0;
            if (!parse_double(cells[0], first))
            {
                if (nu.empty())
                    continue; // header
                throw EmptyInput("unparseable row " + std::to_string(row));
            }
            if (columns == 0)
                columns = cells.size();
            if (cells.size() != columns || cells.size() < 2)
                throw EmptyInput("row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " columns");
            if (!per_tap && cells.size() != 2)
                throw EmptyInput("expected columns nu_hz,value (use per-tap mode for more)");
            double sum = 0.0;
            for (std::size_t c = 1; c < cells.size(); ++c)
            {
                double v = 0.0;
                if (!parse_double(cells[c], v))
                    throw EmptyInput("unparseable value in row " + std::to_string(row));
                if (v < 0.0)
                    throw NegativeDensity("negative value in row " + std::to_string(row));
                sum += v;
            }
            nu.push_back(first);
            values.push_back(sum);
        }
        return make_measured(nu, std::move(values), std::move(label));
    }

    MeasuredSpectrum ingest_spectrum(const std::string &path, bool per_tap, std::string label)
    {
        std::ifstream in(path);
        if (!in)
            throw EmptyInput("cannot open " + path);
        return ingest_spectrum(in, per_tap, std::move(label));
    }

    void write_spectrum(std::ostream &out, const MeasuredSpectrum &s)
    {
        out << "nu_hz,value\n" << std::setprecision(17);
        for (std::size_t m = 0; m < s.M; ++m)
            out << s.nu(m) << ',' << s.values[m] << '\n';
    }

    FitParams params_of(const ModelConfig &cfg)
    {
        return {cfg.upper.a, cfg.upper.b, cfg.upper.c, cfg.upper.d,
                cfg.lower.a, cfg.lower.b, cfg.lower.c, cfg.lower.d, cfg.k_factor};
    }

    ModelConfig config_of(const ModelConfig &scene, const FitParams &x)
    {
        ModelConfig c = scene;
        c.upper = {x[0], x[1], x[2], x[3]};
        c.lower = {x[4], x[5], x[6], x[7]};
        c.k_factor = x[8];
        return c;
    }

    namespace
    {
        struct ModelSample
        {
            std::vector<double> S;
            DopplerStats stats;
        };

        ModelSample sample_model(const ValidatedConfig &cfg, double nu_min, double delta_nu, std::size_t M)
        {
            DpdfOptions opt;
            opt.table_size = 512;
            const DopplerDensity density(cfg, opt);

            std::vector<double> grid(M);
            for (std::size_t m = 0; m < M; ++m)
                grid[m] = nu_min + delta_nu * static_cast<double>(m);

            const SpectrumCurve curve = dpsd(cfg, density, grid, WeightConvention::Power, 1);
            ModelSample out{curve.values, doppler_stats(cfg, density)};
            if (curve.los_impulse && curve.los_impulse->weight > 0.0)
            {
                const double pos = (curve.los_impulse->frequency - nu_min) / delta_nu;
                const long long bin = std::llround(pos);
                if (bin >= 0 && bin < static_cast<long long>(M))
                    out.S[static_cast<std::size_t>(bin)] += curve.los_impulse->weight / delta_nu;
            }
            return out;
        }
    }

    MeasuredSpectrum synthesize_spectrum(const ValidatedConfig &cfg, double nu_min, double delta_nu, std::size_t M,
                                         std::string label)
    {
        if (M < 2 || !(delta_nu > 0.0))
            throw NonUniformGrid("synthetic grid needs M >= 2 and a positive step");
        ModelSample sample = sample_model(cfg, nu_min, delta_nu, M);
        MeasuredSpectrum s;
        s.nu_min = nu_min;
        s.delta_nu = delta_nu;
        s.M = M;
        s.nu_max = s.nu(M - 1);
        s.values = std::move(sample.S);
        s.label = std::move(label);
        s.B_1 = sample.stats.B_1;
        s.B_2 = sample.stats.B_2;
        return s;
    }

    FitProblem make_fit_problem(const ModelConfig &scene, const FitParams &init, double road_width_max, double eps1,
                                double eps2)
    {
        FitProblem p;
        p.scene = scene;
        p.eps1 = eps1;
        p.eps2 = eps2;
        p.road_width_max = road_width_max;

        const double xt = scene.tx.x, xr = scene.rx.x;
        const double ylo = std::min(scene.tx.y, scene.rx.y);
        const double yhi = std::max(scene.tx.y, scene.rx.y);
        const double d_los = std::hypot(xr - xt, scene.rx.y - scene.tx.y);
        const double m = p.margin;

        if (!(road_width_max > yhi - ylo + 2.0 * m))
            throw Infeasible("road-width cap " + std::to_string(road_width_max) +
                             " m cannot contain both vehicles");

        double reach = d_los;
        reach = std::max({reach, xt - init[0], xt - init[4], init[1] - xr, init[5] - xr});
        const double extent = 2.0 * reach;
        double depth = std::max({50.0, 2.0 * (init[3] - yhi), 2.0 * (ylo - init[6])});

        p.lower = {xt - extent, xr + m, yhi + m, yhi + m + p.min_region_width,
                   xt - extent, xr + m, ylo - depth, ylo - road_width_max, 0.0};
        p.upper = {xt - m, xr + extent, ylo + road_width_max, yhi + depth,
                   xt - m, xr + extent, ylo - m - p.min_region_width, ylo - m, std::max(20.0, 2.0 * init[8])};
        return p;
    }

    FitParams project(const FitProblem &p, FitParams x)
    {
        auto clamp = [&](std::size_t j) { x[j] = std::clamp(x[j], p.lower[j], p.upper[j]); };
        for (std::size_t j = 0; j < fit_dim; ++j)
            clamp(j);

        // road width c1 - d2, shared between the two inner edges
        const double excess = (x[2] - x[7]) - p.road_width_max;
        if (excess > 0.0)
        {
            x[2] -= 0.5 * excess;
            x[7] += 0.5 * excess;
            clamp(2);
            clamp(7);
            const double rest = (x[2] - x[7]) - p.road_width_max;
            if (rest > 0.0)
            {
                if (x[2] - rest >= p.lower[2])
                    x[2] -= rest;
                else
                    x[7] += rest;
                clamp(2);
                clamp(7);
            }
        }

        // minimum widths, pushing the outer edges away from the road
        if (x[3] - x[2] < p.min_region_width)
        {
            x[3] = x[2] + p.min_region_width;
            clamp(3);
            x[2] = std::min(x[2], x[3] - p.min_region_width);
        }
        if (x[7] - x[6] < p.min_region_width)
        {
            x[6] = x[7] - p.min_region_width;
            clamp(6);
            x[7] = std::max(x[7], x[6] + p.min_region_width);
        }
        return x;
    }

    double linear_violation(const FitProblem &p, const FitParams &x)
    {
        double v = 0.0;
        for (std::size_t j = 0; j < fit_dim; ++j)
            v += std::max(0.0, p.lower[j] - x[j]) + std::max(0.0, x[j] - p.upper[j]);
        v += std::max(0.0, (x[2] - x[7]) - p.road_width_max);
        v += std::max(0.0, p.min_region_width - (x[3] - x[2]));
        v += std::max(0.0, p.min_region_width - (x[7] - x[6]));
        return v;
    }

    namespace
    {
        // Violation of the placement inequalities for an arbitrary parameter vector.
        double placement_violation(const ModelConfig &c)
        {
            const auto pos = [](double v) { return std::max(0.0, v); };
            const double ylo = std::min(c.tx.y, c.rx.y), yhi = std::max(c.tx.y, c.rx.y);
            double v = pos(c.upper.a - c.upper.b) + pos(c.lower.a - c.lower.b);
            v += pos(c.upper.c - c.upper.d) + pos(c.lower.c - c.lower.d);
            v += pos(std::max(c.upper.a, c.lower.a) - c.tx.x);
            v += pos(c.rx.x - std::min(c.upper.b, c.lower.b));
            v += pos(yhi - c.upper.c) + pos(c.lower.d - ylo);
            v += pos(-c.k_factor);
            return v;
        }
    }

    ObjectiveValue objective(const FitParams &x, const MeasuredSpectrum &measured, const ModelConfig &scene)
    {
        ObjectiveValue out;
        const ModelConfig c = config_of(scene, x);
        std::optional<ValidatedConfig> cfg;
        try
        {
            cfg.emplace(validate_config(c));
        }
        catch (const Error &)
        {
            out.value = 1.0 + placement_violation(c);
            return out;
        }
        try
        {
            const ModelSample s = sample_model(*cfg, measured.nu_min, measured.delta_nu, measured.M);
            double lse = 0.0;
            for (std::size_t m = 0; m < measured.M; ++m)
            {
                const double d = measured.values[m] - s.S[m];
                lse += d * d;
            }
            out.value = lse;
            out.B_1 = s.stats.B_1;
            out.B_2 = s.stats.B_2;
            out.valid = true;
        }
        catch (const QuadratureFailure &)
        {
            out.value = 1.0;
            out.quadrature_failure = true;
        }
        catch (const Error &)
        {
            out.value = 1.0;
        }
        return out;
    }

    namespace
    {
        // Search runs on u in [0,1]^9, the box mapped affinely.
        struct Scaled
        {
            const FitProblem &p;

            FitParams to_x(const FitParams &u) const
            {
                FitParams x{};
                for (std::size_t j = 0; j < fit_dim; ++j)
                    x[j] = p.lower[j] + u[j] * (p.upper[j] - p.lower[j]);
                return x;
            }
            FitParams to_u(const FitParams &x) const
            {
                FitParams u{};
                for (std::size_t j = 0; j < fit_dim; ++j)
                    u[j] = (x[j] - p.lower[j]) / (p.upper[j] - p.lower[j]);
                return u;
            }
            FitParams repair(const FitParams &u) const { return to_u(project(p, to_x(u))); }
        };

        class Restart
        {
        public:
            Restart(const FitProblem &p, const MeasuredSpectrum &s, double mu)
                : p_(p), s_(s), scaled_{p}, mu_(mu) {}

            int evaluations = 0;

            double stats_violation(const ObjectiveValue &v) const
            {
                return std::max(0.0, std::abs(s_.B_1 - v.B_1) - p_.eps1) +
                       std::max(0.0, std::abs(s_.B_2 - v.B_2) - p_.eps2);
            }

            double merit(const FitParams &u)
            {
                ++evaluations;
                const ObjectiveValue v = objective(scaled_.to_x(u), s_, p_.scene);
                if (!v.valid)
                    return v.value;
                return v.value + mu_ * stats_violation(v);
            }

            // Hooke-Jeeves pattern search with per-coordinate steps.
            FitParams direct_search(FitParams u, int &iterations, bool &converged)
            {
                u = scaled_.repair(u);
                double fu = merit(u);
                std::array<double, 9> step;
                step.fill(0.02);
                converged = false;

                auto explore = [&](FitParams base, double &fbase) {
                    for (std::size_t j = 0; j < fit_dim; ++j)
                    {
                        bool moved = false;
                        for (double sgn : {1.0, -1.0})
                        {
                            FitParams t = base;
                            t[j] += sgn * step[j];
                            t = scaled_.repair(t);
                            if (t == base)
                                continue;
                            const double ft = merit(t);
                            if (ft < fbase)
                            {
                                base = t;
                                fbase = ft;
                                moved = true;
                                break;
                            }
                        }
                        step[j] = moved ? std::min(step[j] * 1.5, 0.25) : step[j] * 0.5;
                    }
                    return base;
                };

                while (evaluations < p_.max_evaluations)
                {
                    ++iterations;
                    double fnew = fu;
                    FitParams unew = explore(u, fnew);
                    if (fnew < fu)
                    {
                        // pattern move along the improving direction
                        while (evaluations < p_.max_evaluations)
                        {
                            FitParams up{};
                            for (std::size_t j = 0; j < fit_dim; ++j)
                                up[j] = 2.0 * unew[j] - u[j];
                            up = scaled_.repair(up);
                            double fp = merit(up);
                            up = explore(up, fp);
                            u = unew;
                            fu = fnew;
                            if (!(fp < fnew))
                                break;
                            unew = up;
                            fnew = fp;
                        }
                        u = unew;
                        fu = fnew;
                    }
                    if (*std::max_element(step.begin(), step.end()) < 1e-7)
                    {
                        converged = true;
                        break;
                    }
                }
                return u;
            }

            // Residuals: spectrum misfit, then the two statistics scaled by w per Hz.
            bool residuals(const FitParams &u, Eigen::VectorXd &r)
            {
                ++evaluations;
                const FitParams x = scaled_.to_x(u);
                const ModelConfig c = config_of(p_.scene, x);
                try
                {
                    const ValidatedConfig cfg = validate_config(c);
                    const ModelSample s = sample_model(cfg, s_.nu_min, s_.delta_nu, s_.M);
                    r.resize(static_cast<Eigen::Index>(s_.M + 2));
                    for (std::size_t m = 0; m < s_.M; ++m)
                        r[static_cast<Eigen::Index>(m)] = s_.values[m] - s.S[m];
                    r[static_cast<Eigen::Index>(s_.M)] = stats_weight * (s_.B_1 - s.stats.B_1);
                    r[static_cast<Eigen::Index>(s_.M + 1)] = stats_weight * (s_.B_2 - s.stats.B_2);
                    return true;
                }
                catch (const Error &)
                {
                    return false;
                }
            }

            // Box-projected Levenberg-Marquardt with forward-difference Jacobians. Stops when
            // five accepted steps together gain less than 1%.
            FitParams polish(FitParams u, int &iterations)
            {
                Eigen::VectorXd r;
                if (!residuals(u, r))
                    return u;
                double cost = r.squaredNorm();
                double lambda = 1e-3;
                const double h = 1e-6;
                const Eigen::Index n = static_cast<Eigen::Index>(fit_dim);

                std::vector<double> history{cost};
                for (int it = 0; it < p_.max_polish_iterations && cost > 1e-20; ++it)
                {
                    if (history.size() > 5 && cost > 0.99 * history[history.size() - 6])
                        break;
                    ++iterations;
                    Eigen::MatrixXd J(r.size(), n);
                    bool ok = true;
                    for (std::size_t j = 0; j < fit_dim && ok; ++j)
                    {
                        FitParams up = u;
                        up[j] = u[j] + h <= 1.0 ? u[j] + h : u[j] - h;
                        Eigen::VectorXd rp;
                        ok = residuals(up, rp) && rp.size() == r.size();
                        if (ok)
                            J.col(static_cast<Eigen::Index>(j)) = (rp - r) / (up[j] - u[j]);
                    }
                    if (!ok)
                        break;

                    const Eigen::MatrixXd JtJ = J.transpose() * J;
                    const Eigen::VectorXd g = J.transpose() * r;
                    bool accepted = false;
                    while (lambda < 1e12)
                    {
                        Eigen::MatrixXd A = JtJ;
                        for (Eigen::Index j = 0; j < n; ++j)
                            A(j, j) += lambda * std::max(JtJ(j, j), 1e-30);
                        const Eigen::VectorXd delta = A.ldlt().solve(-g);
                        FitParams ut = u;
                        for (std::size_t j = 0; j < fit_dim; ++j)
                            ut[j] += delta[static_cast<Eigen::Index>(j)];
                        ut = scaled_.repair(ut);
                        Eigen::VectorXd rt;
                        if (residuals(ut, rt) && rt.size() == r.size() && rt.squaredNorm() < cost)
                        {
                            const double gain = (cost - rt.squaredNorm()) / cost;
                            u = ut;
                            r = rt;
                            cost = rt.squaredNorm();
                            lambda = std::max(lambda / 3.0, 1e-12);
                            history.push_back(cost);
                            accepted = true;
                            if (gain < 1e-10)
                                return u;
                            break;
                        }
                        lambda *= 4.0;
                    }
                    if (!accepted)
                        break;
                }
                return u;
            }

            const FitProblem &p_;
            const MeasuredSpectrum &s_;
            Scaled scaled_;
            double mu_;
            double stats_weight = 1e-3;
        };

        void fill_errors(RestartRecord &rec, const FitProblem &p, const MeasuredSpectrum &s)
        {
            const ObjectiveValue v = objective(rec.x, s, p.scene);
            rec.lse = v.value;
            rec.mse = v.value / static_cast<double>(s.M);
            if (v.valid)
            {
                rec.mdse = std::abs(s.B_1 - v.B_1);
                rec.rdse = std::abs(s.B_2 - v.B_2);
            }
            else
            {
                rec.mdse = rec.rdse = std::numeric_limits<double>::infinity();
            }
            rec.feasible = v.valid && linear_violation(p, rec.x) <= 1e-9 && rec.mdse <= p.eps1 && rec.rdse <= p.eps2;
        }
    }

    std::vector<RestartRecord> run_restarts(const FitProblem &problem, const MeasuredSpectrum &measured,
                                            const FitParams &init)
    {
        if (measured.M == 0)
            throw EmptyInput("measured spectrum is empty");
        const int n = std::max(problem.restarts, 1);
        std::vector<RestartRecord> out(static_cast<std::size_t>(n));

        parallel_for(
            out.size(),
            [&](std::size_t k) {
                RestartRecord &rec = out[k];
                rec.index = static_cast<int>(k);
                FitParams start = init;
                if (k > 0)
                {
                    PhiloxStream rng(problem.seed, Stream::Jitter, static_cast<std::uint32_t>(k));
                    for (std::size_t j = 0; j < 8; ++j)
                        start[j] *= 1.0 + rng.uniform(-problem.jitter, problem.jitter);
                    start[8] = std::max(0.0, start[8] + rng.uniform(-problem.k_jitter, problem.k_jitter));
                }
                rec.start = project(problem, start);

                const double mu = problem.penalty * std::pow(problem.penalty_growth, static_cast<double>(k));
                Restart run(problem, measured, mu);
                const Scaled scaled{problem};
                FitParams u = run.direct_search(scaled.to_u(rec.start), rec.iterations, rec.converged);
                const FitParams searched = scaled.to_x(u);
                u = run.polish(u, rec.iterations);
                rec.x = project(problem, scaled.to_x(u));
                rec.evaluations = run.evaluations;

                // keep the searched point if polishing broke the tolerances it met
                fill_errors(rec, problem, measured);
                if (!rec.feasible)
                {
                    RestartRecord alt = rec;
                    alt.x = project(problem, searched);
                    fill_errors(alt, problem, measured);
                    if (alt.feasible)
                        rec = alt;
                }
                rec.status = rec.feasible ? "feasible" : (rec.converged ? "infeasible" : "max_evaluations");
            },
            problem.threads);
        return out;
    }

    FitReport select_best(const FitProblem &problem, const MeasuredSpectrum &measured, std::vector<RestartRecord> restarts)
    {
        FitReport rep;
        for (const auto &r : restarts)
        {
            if (!r.feasible)
                continue;
            if (rep.best_restart < 0 || r.lse < restarts[static_cast<std::size_t>(rep.best_restart)].lse)
                rep.best_restart = r.index;
        }
        rep.restarts = std::move(restarts);
        if (rep.best_restart < 0)
        {
            const bool any_converged = std::any_of(rep.restarts.begin(), rep.restarts.end(),
                                                   [](const RestartRecord &r) { return r.converged; });
            if (!any_converged)
                throw MaxIterations("no restart converged within " + std::to_string(problem.max_evaluations) +
                                    " evaluations and none meets the tolerances");
            throw Infeasible("no restart meets |dB1| <= " + std::to_string(problem.eps1) +
                             " Hz and |dB2| <= " + std::to_string(problem.eps2) + " Hz");
        }

        const RestartRecord &best = rep.restarts[static_cast<std::size_t>(rep.best_restart)];
        rep.x = best.x;
        rep.config = config_of(problem.scene, best.x);
        rep.iterations = best.iterations;

        // recomputed, not taken from the optimizer
        const ObjectiveValue v = objective(best.x, measured, problem.scene);
        rep.lse = v.value;
        rep.mse = v.value / static_cast<double>(measured.M);
        rep.mdse = std::abs(measured.B_1 - v.B_1);
        rep.rdse = std::abs(measured.B_2 - v.B_2);
        rep.box_ok = true;
        for (std::size_t j = 0; j < fit_dim; ++j)
            rep.box_ok = rep.box_ok && problem.lower[j] <= best.x[j] && best.x[j] <= problem.upper[j];
        rep.linear_ok = linear_violation(problem, best.x) <= 1e-9;
        rep.stats_ok = v.valid && rep.mdse <= problem.eps1 && rep.rdse <= problem.eps2;
        rep.feasible = rep.box_ok && rep.linear_ok && rep.stats_ok;
        return rep;
    }

    FitReport fit(const FitProblem &problem, const MeasuredSpectrum &measured, const FitParams &init)
    {
        for (std::size_t j = 0; j < fit_dim; ++j)
            if (init[j] < problem.lower[j] || init[j] > problem.upper[j])
                throw Infeasible(std::string("initial ") + fit_param_names[j] + " outside the box");
        return select_best(problem, measured, run_restarts(problem, measured, init));
    }

    void write_restart_table(std::ostream &out, const std::vector<RestartRecord> &restarts)
    {
        out << "restart";
        for (const char *n : fit_param_names)
            out << ',' << n;
        out << ",lse,mse,mdse,rdse,feasible,iterations,evaluations,status\n";
        out << std::setprecision(12);
        for (const auto &r : restarts)
        {
            out << r.index;
            for (double v : r.x)
                out << ',' << v;
            out << ',' << r.lse << ',' << r.mse << ',' << r.mdse << ',' << r.rdse << ',' << (r.feasible ? 1 : 0) << ','
                << r.iterations << ',' << r.evaluations << ',' << r.status << '\n';
        }
    }
}
