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

#include "rss/geometry.hpp"
#include "rss/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rss
{
    double wrap_angle(double angle) noexcept
    {
        double w = std::remainder(angle, 2.0 * pi); // [-pi, pi]
        if (w <= -pi)
            w += 2.0 * pi;
        return w;
    }

    namespace
    {
        void require(bool ok, const char *row)
        {
            if (!ok)
                throw ConstraintViolation(std::string("model constraint violated: ") + row);
        }

        bool finite(const ModelConfig &c)
        {
            const double values[] = {c.tx.x, c.tx.y, c.tx.v, c.tx.gamma, c.rx.x, c.rx.y, c.rx.v, c.rx.gamma,
                                     c.upper.a, c.upper.b, c.upper.c, c.upper.d,
                                     c.lower.a, c.lower.b, c.lower.c, c.lower.d, c.fc, c.k_factor};
            return std::all_of(std::begin(values), std::end(values), [](double v) { return std::isfinite(v); });
        }
    }

    ValidatedConfig validate_config(const ModelConfig &cfg)
    {
        if (!finite(cfg))
            throw ConstraintViolation("model constraint violated: all parameters must be finite");
        if (!(cfg.fc > 0.0))
            throw NonPositiveFrequency("carrier frequency must be positive");

        const auto &u = cfg.upper;
        const auto &l = cfg.lower;
        if (!(u.a < u.b) || !(l.a < l.b))
            throw NonPositiveArea("model constraint violated: a_i < b_i");
        if (!(u.c < u.d) || !(l.c < l.d))
            throw NonPositiveArea("model constraint violated: c_i < d_i");

        require(cfg.tx.x < cfg.rx.x, "x_T < x_R");
        require(std::max(u.a, l.a) < cfg.tx.x, "max{a_i} < x_T");
        require(cfg.rx.x < std::min(u.b, l.b), "x_R < min{b_i}");
        require(std::max(cfg.tx.y, cfg.rx.y) < u.c, "max{y_T, y_R} < c_1");
        require(l.d < std::min(cfg.tx.y, cfg.rx.y), "d_2 < min{y_T, y_R}");

        if (cfg.tx.v < 0.0 || cfg.rx.v < 0.0)
            throw ConstraintViolation("model constraint violated: speeds must be non-negative");
        if (cfg.k_factor < 0.0)
            throw ConstraintViolation("model constraint violated: K factor must be non-negative");

        ValidatedConfig out;
        out.cfg_ = cfg;
        out.cfg_.tx.gamma = wrap_angle(cfg.tx.gamma);
        out.cfg_.rx.gamma = wrap_angle(cfg.rx.gamma);
        out.wavelength_ = speed_of_light / cfg.fc;
        out.f_tmax_ = cfg.tx.v / out.wavelength_;
        out.f_rmax_ = cfg.rx.v / out.wavelength_;
        return out;
    }

    namespace
    {
        // Three-branch arctangent: the principal arctan shifted by +-pi in the left half-plane.
        double piecewise_angle(double dx, double dy, const char *who)
        {
            if (dx == 0.0 && dy == 0.0)
                throw CoincidentPoint(std::string("scatterer coincides with ") + who);
            if (dx > 0.0)
                return std::atan(dy / dx);
            if (dx == 0.0)
                return dy > 0.0 ? pi / 2.0 : -pi / 2.0;
            if (dy >= 0.0)
                return std::atan(dy / dx) + pi;
            return std::atan(dy / dx) - pi;
        }
    }

    double aod_of_point(const ValidatedConfig &cfg, double x, double y)
    {
        return piecewise_angle(x - cfg.tx().x, y - cfg.tx().y, "the transmitter");
    }

    double aoa_of_point(const ValidatedConfig &cfg, double x, double y)
    {
        return piecewise_angle(x - cfg.rx().x, y - cfg.rx().y, "the receiver");
    }

    double doppler_of_angles(const ValidatedConfig &cfg, double alpha, double beta) noexcept
    {
        return cfg.f_tmax() * std::cos(alpha - cfg.tx().gamma) + cfg.f_rmax() * std::cos(beta - cfg.rx().gamma);
    }

    double doppler_of_point(const ValidatedConfig &cfg, double x, double y)
    {
        return doppler_of_angles(cfg, aod_of_point(cfg, x, y), aoa_of_point(cfg, x, y));
    }

    LosParameters los_parameters(const ValidatedConfig &cfg) noexcept
    {
        const auto &t = cfg.tx();
        const auto &r = cfg.rx();
        LosParameters p;
        p.m_los = (r.y - t.y) / (r.x - t.x);
        p.alpha_los = std::atan(p.m_los);
        p.d_los = std::hypot(r.x - t.x, r.y - t.y);
        p.f_los = cfg.f_tmax() * std::cos(p.alpha_los - t.gamma) + cfg.f_rmax() * std::cos(pi + p.alpha_los - r.gamma);
        return p;
    }

    std::array<double, 2> vertex(const ValidatedConfig &cfg, int r)
    {
        const auto &u = cfg.region(1);
        const auto &l = cfg.region(2);
        switch (r)
        {
        case 1: return {u.b, u.c};
        case 2: return {u.b, u.d};
        case 3: return {u.a, u.d};
        case 4: return {u.a, u.c};
        case 5: return {l.a, l.d};
        case 6: return {l.a, l.c};
        case 7: return {l.b, l.c};
        case 8: return {l.b, l.d};
        default: throw std::out_of_range("vertex index must be 1..8");
        }
    }

    CriticalAngles critical_angles(const ValidatedConfig &cfg)
    {
        // Vertices 3,4 lie left of and above both vehicles (+pi branch); 5,6 left of and below (-pi branch).
        auto at = [](double px, double py, double vx, double vy, int r)
        {
            const double base = std::atan((vy - py) / (vx - px));
            if (r == 3 || r == 4)
                return base + pi;
            if (r == 5 || r == 6)
                return base - pi;
            return base;
        };
        CriticalAngles ca;
        for (int r = 1; r <= 8; ++r)
        {
            const auto v = vertex(cfg, r);
            ca.alpha[static_cast<std::size_t>(r - 1)] = at(cfg.tx().x, cfg.tx().y, v[0], v[1], r);
            ca.beta[static_cast<std::size_t>(r - 1)] = at(cfg.rx().x, cfg.rx().y, v[0], v[1], r);
        }
        return ca;
    }

    GeometryConstants geometry_constants(const ValidatedConfig &cfg)
    {
        const double xt = cfg.tx().x, yt = cfg.tx().y, xr = cfg.rx().x, yr = cfg.rx().y;
        const auto &u = cfg.region(1);
        const auto &l = cfg.region(2);

        auto ratio = [](double num, double den, int q)
        {
            if (den == 0.0)
                throw DegenerateGeometry("geometry constant m_" + std::to_string(q) + " has a zero denominator");
            return num / den;
        };

        GeometryConstants g;
        auto &m = g.m;
        m[0] = ratio(u.b - xt, u.b - xr, 1);
        m[1] = ratio(yt - yr, u.b - xr, 2);
        m[2] = ratio(xt - xr, u.c - yr, 3);
        m[3] = ratio(u.c - yt, u.c - yr, 4);
        m[4] = ratio(xt - xr, u.d - yr, 5);
        m[5] = ratio(u.d - yt, u.d - yr, 6);
        m[6] = ratio(u.a - xt, u.a - xr, 7);
        m[7] = ratio(yt - yr, u.a - xr, 8);
        m[8] = ratio(xt - xr, l.d - yr, 9);
        m[9] = ratio(l.d - yt, l.d - yr, 10);
        m[10] = ratio(l.a - xt, l.a - xr, 11);
        m[11] = ratio(yt - yr, l.a - xr, 12);
        m[12] = ratio(xt - xr, l.c - yr, 13);
        m[13] = ratio(l.c - yt, l.c - yr, 14);
        m[14] = ratio(l.b - xt, l.b - xr, 15);
        m[15] = ratio(yt - yr, l.b - xr, 16);
        m[16] = ratio(u.d - yt, u.b - xt, 17);
        m[17] = ratio(u.d - yt, u.a - xt, 18);
        m[18] = ratio(l.c - yt, l.a - xt, 19);
        m[19] = ratio(l.c - yt, l.b - xt, 20);

        const auto los = los_parameters(cfg);
        g.m_los = los.m_los;
        g.alpha_los = los.alpha_los;
        g.d_los = los.d_los;
        g.f_los = los.f_los;
        return g;
    }
}
