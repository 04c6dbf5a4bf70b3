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

#include "rss/spectrum.hpp"
#include "rss/error.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace rss
{
    std::string to_string(WeightConvention w)
    {
        return w == WeightConvention::Amplitude ? "amplitude" : "power";
    }

    WeightConvention parse_weight_convention(const std::string &s)
    {
        if (s == "amplitude")
            return WeightConvention::Amplitude;
        if (s == "power")
            return WeightConvention::Power;
        throw ConfigError("unknown weight convention '" + s + "' (expected amplitude or power)");
    }

    double SpectrumCurve::continuous_mass() const
    {
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < nu.size(); ++i)
            m += 0.5 * (values[i] + values[i + 1]) * (nu[i + 1] - nu[i]);
        return m;
    }

    std::string config_hash(const ModelConfig &c)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g",
                      c.tx.x, c.tx.y, c.tx.v, c.tx.gamma, c.rx.x, c.rx.y, c.rx.v, c.rx.gamma,
                      c.upper.a, c.upper.b, c.upper.c, c.upper.d, c.lower.a, c.lower.b, c.lower.c, c.lower.d, c.fc, c.k_factor);
        std::uint64_t h = 1469598103934665603ull; // FNV-1a
        for (const char *p = buf; *p; ++p)
        {
            h ^= static_cast<unsigned char>(*p);
            h *= 1099511628211ull;
        }
        char out[17];
        std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
        return out;
    }

    SpectrumCurve dpsd(const ValidatedConfig &cfg, const DopplerDensity &density, const std::vector<double> &grid,
                       WeightConvention convention, unsigned threads)
    {
        const double k = cfg.k_factor();
        SpectrumCurve c;
        c.nu = grid.empty() ? default_dpdf_grid(cfg) : grid;
        c.convention = convention;
        c.k_factor = k;
        if (convention == WeightConvention::Amplitude)
        {
            c.raw_impulse_weight = std::sqrt(k / (k + 1.0));
            c.raw_continuous_weight = std::sqrt(1.0 / (k + 1.0));
        }
        else
        {
            c.raw_impulse_weight = k / (k + 1.0);
            c.raw_continuous_weight = 1.0 / (k + 1.0);
        }
        // The diffuse density has unit area, so the raw weights are the areas of the two parts.
        const double total = c.raw_impulse_weight + c.raw_continuous_weight;
        c.continuous_weight = c.raw_continuous_weight / total;
        if (k > 0.0)
            c.los_impulse = LosImpulse{los_parameters(cfg).f_los, c.raw_impulse_weight / total};

        c.values = density.evaluate(c.nu, threads);
        for (double &v : c.values)
            v *= c.continuous_weight;
        const auto b = density.bounds();
        c.nu_min = b.nu_min;
        c.nu_max = b.nu_max;
        c.empty_pieces = 8 - density.support().active_pieces();
        c.config_hash = config_hash(cfg.scene());
        return c;
    }

    SpectrumCurve dpsd(const ValidatedConfig &cfg, const std::vector<double> &grid, WeightConvention convention, unsigned threads)
    {
        return dpsd(cfg, DopplerDensity(cfg), grid, convention, threads);
    }

    namespace
    {
        DopplerStats assemble(double k, double f_los, double mean, double second, double nu_min, double nu_max)
        {
            DopplerStats s;
            s.nu_min = nu_min;
            s.nu_max = nu_max;
            s.B_d = nu_max - nu_min;
            const double p_los = k / (k + 1.0);
            const double p_rss = 1.0 / (k + 1.0);
            s.B_1 = p_los * f_los + p_rss * mean;
            // Second central moment of the diffuse part about B_1.
            const double central = second - 2.0 * s.B_1 * mean + s.B_1 * s.B_1;
            const double var = (k * (f_los - s.B_1) * (f_los - s.B_1) + central) / (k + 1.0);
            s.B_2 = std::sqrt(std::max(var, 0.0));
            return s;
        }
    }

    DopplerStats doppler_stats(const ValidatedConfig &cfg, const DopplerDensity &density)
    {
        const auto m = density.moments();
        const auto b = density.bounds();
        return assemble(cfg.k_factor(), los_parameters(cfg).f_los, m[1] / m[0], m[2] / m[0], b.nu_min, b.nu_max);
    }

    DopplerStats doppler_stats(const ValidatedConfig &cfg)
    {
        return doppler_stats(cfg, DopplerDensity(cfg));
    }

    DopplerStats doppler_stats(const SpectrumCurve &curve)
    {
        double m0 = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i + 1 < curve.nu.size(); ++i)
        {
            const double h = 0.5 * (curve.nu[i + 1] - curve.nu[i]);
            const double a = curve.values[i], b = curve.values[i + 1];
            const double x = curve.nu[i], y = curve.nu[i + 1];
            m0 += h * (a + b);
            m1 += h * (a * x + b * y);
            m2 += h * (a * x * x + b * y * y);
        }
        const double f_los = curve.los_impulse ? curve.los_impulse->frequency : 0.0;
        if (!(m0 > 0.0))
            return assemble(curve.k_factor, f_los, f_los, f_los * f_los, curve.nu_min, curve.nu_max);
        return assemble(curve.k_factor, f_los, m1 / m0, m2 / m0, curve.nu_min, curve.nu_max);
    }

    SweepParameter parse_sweep_parameter(const std::string &s)
    {
        if (s == "r_l" || s == "rl")
            return SweepParameter::RegionLengthRatio;
        if (s == "w_r" || s == "w_R" || s == "wr")
            return SweepParameter::RoadWidth;
        throw ConfigError("unknown sweep parameter '" + s + "' (expected r_l or w_r)");
    }

    ModelConfig symmetric_layout(const ModelConfig &tmpl, double r_l, double w_r)
    {
        ModelConfig c = tmpl;
        const double d_los = std::hypot(tmpl.rx.x - tmpl.tx.x, tmpl.rx.y - tmpl.tx.y);
        const double half = 0.5 * d_los * r_l;
        c.upper = {-half, half, 0.5 * w_r, 0.5 * w_r + 5.0};
        c.lower = {-half, half, -0.5 * w_r - 5.0, -0.5 * w_r};
        return c;
    }

    std::vector<SweepPoint> sweep(const ModelConfig &tmpl, SweepParameter parameter, const std::vector<double> &values,
                                  double fixed_other, std::size_t grid_points, unsigned threads)
    {
        std::vector<SweepPoint> out;
        for (double v : values)
        {
            SweepPoint p;
            p.value = v;
            try
            {
                const ModelConfig mc = parameter == SweepParameter::RegionLengthRatio ? symmetric_layout(tmpl, v, fixed_other)
                                                                                      : symmetric_layout(tmpl, fixed_other, v);
                const auto cfg = validate_config(mc);
                const DopplerDensity density(cfg);
                const auto b = density.bounds();
                p.curve = dpsd(cfg, density, uniform_grid(b.nu_min - 1.0, b.nu_max + 1.0, grid_points), WeightConvention::Amplitude, threads);
                p.stats = doppler_stats(cfg, density);
                p.ok = true;
            }
            catch (const Error &e)
            {
                p.error = e.what();
            }
            out.push_back(std::move(p));
        }
        return out;
    }
}
