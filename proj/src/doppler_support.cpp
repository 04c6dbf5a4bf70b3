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

#include "rss/analytic_pdf.hpp"
#include "rss/error.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rss
{
    namespace
    {
        using Point = std::array<double, 2>;

        double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

        // Keeps the part of poly where n . (p - o) >= 0, with n given as the left normal of dir.
        Polygon clip_half_plane(const Polygon &poly, const Point &o, double dir_x, double dir_y)
        {
            auto side = [&](const Point &p) { return cross(dir_x, dir_y, p[0] - o[0], p[1] - o[1]); };
            Polygon out;
            const std::size_t n = poly.size();
            for (std::size_t i = 0; i < n; ++i)
            {
                const Point &p = poly[i];
                const Point &q = poly[(i + 1) % n];
                const double sp = side(p);
                const double sq = side(q);
                if (sp >= 0.0)
                    out.push_back(p);
                if ((sp >= 0.0) != (sq >= 0.0))
                {
                    const double t = sp / (sp - sq);
                    out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
                }
            }
            return out;
        }

        // Drops vertices closer than tol to their predecessor (wedge rays grazing a corner).
        Polygon merge_close(const Polygon &poly, double tol)
        {
            Polygon out;
            for (const auto &p : poly)
                if (out.empty() || std::hypot(p[0] - out.back()[0], p[1] - out.back()[1]) > tol)
                    out.push_back(p);
            while (out.size() > 1 && std::hypot(out.front()[0] - out.back()[0], out.front()[1] - out.back()[1]) <= tol)
                out.pop_back();
            return out;
        }

        double polygon_area(const Polygon &poly)
        {
            double a = 0.0;
            for (std::size_t i = 0; i < poly.size(); ++i)
            {
                const auto &p = poly[i];
                const auto &q = poly[(i + 1) % poly.size()];
                a += cross(p[0], p[1], q[0], q[1]);
            }
            return 0.5 * a;
        }

        Polygon rectangle(const RssRegion &r)
        {
            return {{r.a, r.c}, {r.b, r.c}, {r.b, r.d}, {r.a, r.d}};
        }

        // Parameter range [s_in, s_out] of the ray o + s u (s >= 0) inside a convex CCW polygon.
        bool clip_ray(const Polygon &poly, const Point &o, double ux, double uy, double &s_in, double &s_out)
        {
            s_in = 0.0;
            s_out = std::numeric_limits<double>::infinity();
            const std::size_t n = poly.size();
            for (std::size_t i = 0; i < n; ++i)
            {
                const Point &p = poly[i];
                const Point &q = poly[(i + 1) % n];
                const double ex = q[0] - p[0];
                const double ey = q[1] - p[1];
                if (ex == 0.0 && ey == 0.0)
                    continue;
                const double num = cross(ex, ey, o[0] - p[0], o[1] - p[1]);
                const double den = cross(ex, ey, ux, uy);
                if (den == 0.0)
                {
                    if (num < 0.0)
                        return false;
                    continue;
                }
                const double s = -num / den;
                if (den > 0.0)
                    s_in = std::max(s_in, s);
                else
                    s_out = std::min(s_out, s);
            }
            return s_in <= s_out;
        }
    }

    DopplerSupport::DopplerSupport(const ValidatedConfig &cfg, const AngleSupport &angles)
        : cfg_(cfg), angles_(angles)
    {
        const Point tx{cfg.tx().x, cfg.tx().y};
        const double area_scale = cfg.area();
        for (int k = 1; k <= 8; ++k)
        {
            const auto &ap = angles.piece(k);
            auto &dp = pieces_[static_cast<std::size_t>(k - 1)];
            dp.index = k;
            dp.region = ap.region;

            const RssRegion &rect = cfg.region(ap.region);
            const double tol = 1e-9 * std::max(rect.length(), rect.width());
            Polygon poly = rectangle(rect);
            poly = merge_close(clip_half_plane(poly, tx, std::cos(ap.alpha_lo), std::sin(ap.alpha_lo)), tol);
            if (!poly.empty())
                poly = merge_close(clip_half_plane(poly, tx, -std::cos(ap.alpha_hi), -std::sin(ap.alpha_hi)), tol);
            dp.polygon = poly;

            if (poly.size() < 3 || polygon_area(poly) <= 1e-12 * area_scale)
            {
                dp.empty = true;
                continue;
            }
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto &p : poly)
            {
                const double b = aoa_of_point(cfg, p[0], p[1]);
                lo = std::min(lo, b);
                hi = std::max(hi, b);
            }
            dp.beta_lo = lo;
            dp.beta_hi = hi;
            dp.empty = !(hi - lo > 1e-13);
        }
    }

    DopplerSupport::Band DopplerSupport::band(int k, double beta) const noexcept
    {
        Band out;
        const auto &dp = pieces_[static_cast<std::size_t>(k - 1)];
        if (dp.empty || beta < dp.beta_lo || beta > dp.beta_hi)
            return out;
        const Point rx{cfg_.rx().x, cfg_.rx().y};
        const double ux = std::cos(beta), uy = std::sin(beta);
        double s0 = 0.0, s1 = 0.0;
        if (!clip_ray(dp.polygon, rx, ux, uy, s0, s1))
            return out;
        const double f_r = cfg_.f_rmax() * std::cos(beta - cfg_.rx().gamma);
        auto f_at = [&](double s)
        {
            const double x = rx[0] + s * ux - cfg_.tx().x;
            const double y = rx[1] + s * uy - cfg_.tx().y;
            return cfg_.f_tmax() * std::cos(std::atan2(y, x) - cfg_.tx().gamma) + f_r;
        };
        const double f0 = f_at(s0);
        const double f1 = f_at(s1);
        out.ok = true;
        out.f_min = std::min(f0, f1);
        out.f_max = std::max(f0, f1);
        return out;
    }

    bool DopplerSupport::contains(int k, double nu, double beta) const noexcept
    {
        const Band b = band(k, beta);
        return b.ok && nu >= b.f_min && nu <= b.f_max;
    }

    int DopplerSupport::active_pieces() const noexcept
    {
        return static_cast<int>(std::count_if(pieces_.begin(), pieces_.end(), [](const DopplerPiece &p) { return !p.empty; }));
    }

    DopplerSupport build_doppler_support(const ValidatedConfig &cfg)
    {
        if (!(cfg.f_tmax() > 0.0))
            throw DegenerateGeometry("analytic Doppler densities need a moving transmitter");
        const double g = cfg.tx().gamma;
        if (std::abs(std::sin(g)) > 1e-12)
            throw UnsupportedRegime("analytic Doppler densities need the transmitter heading along the x-axis");
        return DopplerSupport(cfg, build_angle_support(cfg));
    }

    double DisjointSupport::measure() const noexcept
    {
        double m = 0.0;
        for (const auto &iv : intervals)
            m += iv.beta_hi - iv.beta_lo;
        return m;
    }

    DisjointSupport disjointify(const DopplerSupport &support, const std::vector<double> &extra_breaks)
    {
        std::vector<double> breaks;
        for (const auto &p : support.pieces())
            if (!p.empty)
            {
                breaks.push_back(p.beta_lo);
                breaks.push_back(p.beta_hi);
            }
        for (double b : extra_breaks)
            for (const auto &p : support.pieces())
                if (!p.empty && b > p.beta_lo && b < p.beta_hi)
                {
                    breaks.push_back(b);
                    break;
                }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

        DisjointSupport out;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        {
            const double lo = breaks[i], hi = breaks[i + 1];
            DisjointInterval iv{lo, hi, {}};
            for (const auto &p : support.pieces())
                if (!p.empty && p.beta_lo <= lo && hi <= p.beta_hi)
                    iv.pieces.push_back(p.index);
            if (!iv.pieces.empty())
                out.intervals.push_back(std::move(iv));
        }
        return out;
    }

    double support_measure(const DopplerSupport &support)
    {
        return disjointify(support).measure();
    }

    double joint_doppler_aoa_pdf(const DopplerSupport &support, double nu, double beta)
    {
        const auto &cfg = support.config();
        double total = 0.0;
        bool seen[2] = {false, false};
        for (const auto &p : support.pieces())
        {
            const int r = p.region - 1;
            if (seen[r] || !support.contains(p.index, nu, beta))
                continue;
            seen[r] = true;
            const double alpha = inverse_doppler(cfg, nu, beta, p.region);
            const double jac = std::abs(std::sin(alpha - cfg.tx().gamma)) * cfg.f_tmax();
            if (jac > 0.0)
                total += aoa_aod_jacobian(cfg, alpha, beta) / (cfg.area() * jac);
        }
        return total;
    }

    double joint_doppler_aoa_pdf(const ValidatedConfig &cfg, double nu, double beta)
    {
        return joint_doppler_aoa_pdf(build_doppler_support(cfg), nu, beta);
    }

    DopplerBounds doppler_bounds(const ValidatedConfig &cfg)
    {
        DopplerBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        constexpr int samples = 256;
        for (int i = 1; i <= 2; ++i)
        {
            const auto &r = cfg.region(i);
            const Point corners[4] = {{r.a, r.c}, {r.b, r.c}, {r.b, r.d}, {r.a, r.d}};
            for (int e = 0; e < 4; ++e)
            {
                const Point &p = corners[e];
                const Point &q = corners[(e + 1) % 4];
                auto f = [&](double t) { return doppler_of_point(cfg, p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])); };

                int i_min = 0, i_max = 0;
                double v_min = f(0.0), v_max = v_min;
                for (int j = 1; j <= samples; ++j)
                {
                    const double v = f(static_cast<double>(j) / samples);
                    if (v < v_min) { v_min = v; i_min = j; }
                    if (v > v_max) { v_max = v; i_max = j; }
                }
                auto bracket = [&](int j) { return std::pair<double, double>{std::max(0, j - 1) / double(samples), std::min(samples, j + 1) / double(samples)}; };
                const auto [lo1, hi1] = bracket(i_min);
                const auto rmin = boost::math::tools::brent_find_minima(f, lo1, hi1, 52);
                const auto [lo2, hi2] = bracket(i_max);
                const auto rmax = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, lo2, hi2, 52);
                b.nu_min = std::min({b.nu_min, v_min, rmin.second});
                b.nu_max = std::max({b.nu_max, v_max, -rmax.second});
            }
        }
        return b;
    }

    DopplerBounds doppler_bounds_vertex_rule(const ValidatedConfig &cfg)
    {
        const auto ca = critical_angles(cfg);
        auto f = [&](int v) { return cfg.f_tmax() * std::cos(ca.alpha_c(v)) + cfg.f_rmax() * std::cos(ca.beta_c(v)); };
        return {std::min(f(4), f(5)), std::max(f(1), f(8))};
    }
}
