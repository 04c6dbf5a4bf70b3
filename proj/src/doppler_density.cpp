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
#include "rss/parallel.hpp"
#include "quadrature.hpp"

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace rss
{
    namespace
    {
        using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

        // Monotone piece of a tabulated bound curve, with an interpolant of its inverse.
        struct Segment
        {
            double b0 = 0.0, b1 = 0.0;
            double f0 = 0.0, f1 = 0.0;
            std::vector<double> bs, fs;
            std::optional<Pchip> inverse;

            bool increasing() const { return f1 > f0; }
            double f_lo() const { return std::min(f0, f1); }
            double f_hi() const { return std::max(f0, f1); }
        };

        struct Curve
        {
            std::vector<Segment> segments;
            double f_min = 0.0; // global extremes of the curve
            double f_max = 0.0;
        };

        int sign_of(double d) { return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0); }
    }

    struct DopplerDensity::Impl
    {
        ValidatedConfig cfg;
        DopplerSupport support;
        DisjointSupport disjoint;
        DpdfOptions opt;
        DopplerBounds nu_bounds;
        std::vector<double> extra_breaks;
        std::array<std::array<Curve, 2>, 8> curves; // [piece][0 = f_min, 1 = f_max]
        std::array<std::vector<double>, 8> kinks;   // vertex AoAs inside each piece range

        Impl(const ValidatedConfig &c, DpdfOptions o)
            : cfg(c), support(build_doppler_support(c)), opt(o)
        {
            const double a_los = support.angles().constants.alpha_los;
            extra_breaks = {a_los, a_los - pi};
            disjoint = disjointify(support, extra_breaks);
            nu_bounds = doppler_bounds(cfg);
            for (int k = 1; k <= 8; ++k)
            {
                const auto &p = support.piece(k);
                if (p.empty)
                    continue;
                for (const auto &v : p.polygon)
                {
                    const double b = aoa_of_point(cfg, v[0], v[1]);
                    if (b > p.beta_lo && b < p.beta_hi)
                        kinks[static_cast<std::size_t>(k - 1)].push_back(b);
                }
                for (int w = 0; w < 2; ++w)
                    curves[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(w)] = tabulate(k, w == 1);
            }
        }

        // Exact bound value; endpoints are nudged inward where the band degenerates to a vertex.
        double bound(int k, bool upper, double beta) const
        {
            const auto &p = support.piece(k);
            const double span = p.beta_hi - p.beta_lo;
            for (double nudge : {0.0, 1e-12, 1e-10, 1e-8})
            {
                const double b = std::clamp(beta, p.beta_lo + nudge * span, p.beta_hi - nudge * span);
                const auto band = support.band(k, b);
                if (band.ok)
                    return upper ? band.f_max : band.f_min;
            }
            return std::numeric_limits<double>::quiet_NaN();
        }

        Curve tabulate(int k, bool upper) const
        {
            const auto &p = support.piece(k);
            const int n = std::max(opt.table_size, 8);
            std::vector<double> b(static_cast<std::size_t>(n)), f(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j)
            {
                b[static_cast<std::size_t>(j)] = p.beta_lo + (p.beta_hi - p.beta_lo) * j / (n - 1);
                f[static_cast<std::size_t>(j)] = bound(k, upper, b[static_cast<std::size_t>(j)]);
            }
            b.back() = p.beta_hi;

            // Turning points of the sampled curve, refined on the exact bound.
            std::vector<std::pair<double, double>> cuts{{b.front(), f.front()}};
            int prev = 0;
            for (int j = 0; j + 1 < n; ++j)
            {
                const int d = sign_of(f[static_cast<std::size_t>(j + 1)] - f[static_cast<std::size_t>(j)]);
                if (d == 0)
                    continue;
                if (prev != 0 && d != prev)
                {
                    const double lo = b[static_cast<std::size_t>(std::max(j - 1, 0))];
                    const double hi = b[static_cast<std::size_t>(j + 1)];
                    const double s = prev < 0 ? 1.0 : -1.0; // minimum after a descent
                    const auto r = boost::math::tools::brent_find_minima([&](double x) { return s * bound(k, upper, x); }, lo, hi, 50);
                    if (r.first > cuts.back().first)
                        cuts.push_back({r.first, s * r.second});
                }
                prev = d;
            }
            if (b.back() > cuts.back().first)
                cuts.push_back({b.back(), f.back()});

            Curve c;
            c.f_min = std::numeric_limits<double>::infinity();
            c.f_max = -c.f_min;
            std::size_t j = 0;
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
            {
                Segment seg;
                seg.b0 = cuts[s].first;
                seg.b1 = cuts[s + 1].first;
                seg.f0 = cuts[s].second;
                seg.f1 = cuts[s + 1].second;
                seg.bs.push_back(seg.b0);
                seg.fs.push_back(seg.f0);
                while (j < b.size() && b[j] <= seg.b0)
                    ++j;
                const bool inc = seg.increasing();
                for (; j < b.size() && b[j] < seg.b1; ++j)
                {
                    const double v = f[j];
                    if ((inc && v > seg.fs.back() && v < seg.f1) || (!inc && v < seg.fs.back() && v > seg.f1))
                    {
                        seg.bs.push_back(b[j]);
                        seg.fs.push_back(v);
                    }
                }
                seg.bs.push_back(seg.b1);
                seg.fs.push_back(seg.f1);
                if (seg.fs.size() >= 4 && seg.f0 != seg.f1)
                {
                    std::vector<double> x = seg.fs, y = seg.bs;
                    if (!inc)
                    {
                        std::reverse(x.begin(), x.end());
                        std::reverse(y.begin(), y.end());
                    }
                    seg.inverse.emplace(std::move(x), std::move(y));
                }
                c.f_min = std::min(c.f_min, seg.f_lo());
                c.f_max = std::max(c.f_max, seg.f_hi());
                c.segments.push_back(std::move(seg));
            }
            return c;
        }

        // AoA in seg where the bound equals nu (nu inside the segment range).
        double invert(int k, bool upper, const Segment &seg, double nu) const
        {
            const bool inc = seg.increasing();
            // Bracket from the table, then split it at the interpolated guess.
            std::size_t j = 0;
            {
                std::size_t lo = 0, hi = seg.fs.size() - 1;
                while (hi - lo > 1)
                {
                    const std::size_t mid = (lo + hi) / 2;
                    const bool below = inc ? seg.fs[mid] <= nu : seg.fs[mid] >= nu;
                    (below ? lo : hi) = mid;
                }
                j = lo;
            }
            double lo = seg.bs[j], hi = seg.bs[j + 1];
            auto g = [&](double x) { return inc ? bound(k, upper, x) - nu : nu - bound(k, upper, x); }; // increasing in x
            if (seg.inverse)
            {
                const double guess = (*seg.inverse)(nu);
                if (guess > lo && guess < hi)
                {
                    const double v = g(guess);
                    if (std::abs(v) <= opt.inversion_tol_hz)
                        return guess;
                    (v < 0.0 ? lo : hi) = guess;
                }
            }
            for (int it = 0; it < 200; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                if (!(mid > lo && mid < hi))
                    break;
                const double v = g(mid);
                if (std::abs(v) <= opt.inversion_tol_hz)
                    return mid;
                (v < 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }

        std::vector<double> breakpoints(int k, const std::vector<double> &levels) const
        {
            const auto &p = support.piece(k);
            std::vector<double> pts{p.beta_lo, p.beta_hi};
            for (double b : extra_breaks)
                if (b > p.beta_lo && b < p.beta_hi)
                    pts.push_back(b);
            for (int w = 0; w < 2; ++w)
            {
                const auto &c = curves[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(w)];
                for (double nu : levels)
                {
                    if (nu < c.f_min || nu > c.f_max)
                        continue;
                    for (const auto &seg : c.segments)
                        if (seg.f0 != seg.f1 && nu >= seg.f_lo() && nu <= seg.f_hi())
                            pts.push_back(invert(k, w == 1, seg, nu));
                }
            }
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            return pts;
        }

        std::vector<std::pair<double, double>> intervals(int k, double nu) const
        {
            std::vector<std::pair<double, double>> out;
            const auto &p = support.piece(k);
            if (p.empty)
                return out;
            const auto &c = curves[static_cast<std::size_t>(k - 1)];
            if (nu < c[0].f_min || nu > c[1].f_max)
                return out;
            const auto pts = breakpoints(k, {nu});
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            {
                const double u = pts[i], v = pts[i + 1];
                if (!(v > u))
                    continue;
                const auto band = support.band(k, 0.5 * (u + v));
                if (band.ok && nu >= band.f_min && nu <= band.f_max)
                    out.emplace_back(u, v);
            }
            return out;
        }

        // AoD of region r with Doppler nu at AoA beta; the heading is 0 or pi here.
        double alpha_of(double nu, double beta, int region) const noexcept
        {
            const double z = std::clamp((nu - cfg.f_rmax() * std::cos(beta - cfg.rx().gamma)) / cfg.f_tmax(), -1.0, 1.0);
            const double a = std::cos(cfg.tx().gamma) > 0.0 ? std::acos(z) : pi - std::acos(z);
            return region == 1 ? a : -a;
        }

        double integrand(int region, double nu, double beta) const noexcept
        {
            const double alpha = alpha_of(nu, beta, region);
            const double s = std::abs(std::sin(alpha));
            if (!(s > 0.0))
                return 0.0;
            return aoa_aod_jacobian(cfg, alpha, beta) / (cfg.area() * cfg.f_tmax() * s);
        }

        double density(double nu) const
        {
            std::vector<std::pair<int, std::pair<double, double>>> work;
            for (int k = 1; k <= 8; ++k)
                for (const auto &iv : intervals(k, nu))
                    work.push_back({k, iv});
            if (work.empty())
                return 0.0;
            const double tol = opt.abs_tol / static_cast<double>(work.size());
            double value = 0.0, error = 0.0;
            for (const auto &[k, iv] : work)
            {
                const int region = support.piece(k).region;
                const auto r = detail::endpoint_substituted([&](double b) { return integrand(region, nu, b); }, iv.first, iv.second, tol);
                value += r.value;
                error += r.error;
            }
            if (!(error <= opt.abs_tol))
                throw QuadratureFailure("Doppler density at " + std::to_string(nu) + " Hz", error);
            return value;
        }

        // Integral of s ds over the part of the Rx ray segment of piece k where F_D <= nu.
        double below(int k, double nu, double beta) const noexcept
        {
            const auto &p = support.piece(k);
            const auto band = support.band(k, beta);
            if (!band.ok || nu <= band.f_min)
                return 0.0;
            const double rx = cfg.rx().x, ry = cfg.rx().y;
            double s0 = std::numeric_limits<double>::infinity(), s1 = 0.0;
            {
                // Segment ends from the polygon; the band call already succeeded so these exist.
                const double ux = std::cos(beta), uy = std::sin(beta);
                for (std::size_t i = 0; i < p.polygon.size(); ++i)
                {
                    const auto &a = p.polygon[i];
                    const auto &b = p.polygon[(i + 1) % p.polygon.size()];
                    const double ex = b[0] - a[0], ey = b[1] - a[1];
                    const double den = ux * ey - uy * ex;
                    if (den == 0.0)
                        continue;
                    const double wx = a[0] - rx, wy = a[1] - ry;
                    const double s = (wx * ey - wy * ex) / den;
                    const double t = (wx * uy - wy * ux) / den;
                    if (t >= -1e-12 && t <= 1.0 + 1e-12 && s >= 0.0)
                    {
                        s0 = std::min(s0, s);
                        s1 = std::max(s1, s);
                    }
                }
                if (!(s1 >= s0))
                    return 0.0;
            }
            if (nu >= band.f_max)
                return 0.5 * (s1 * s1 - s0 * s0);
            const double alpha = alpha_of(nu, beta, p.region);
            const double den = std::sin(alpha - beta);
            if (den == 0.0)
                return 0.0;
            // Distance from Rx along its ray to the Tx ray at alpha.
            const double dx = cfg.tx().x - rx, dy = cfg.tx().y - ry;
            const double rho = std::clamp((dx * std::sin(alpha) - dy * std::cos(alpha)) / den, s0, s1);
            const double f_start = doppler_of_point(cfg, rx + s0 * std::cos(beta), ry + s0 * std::sin(beta));
            const bool increasing = f_start <= band.f_min + 0.5 * (band.f_max - band.f_min);
            return increasing ? 0.5 * (rho * rho - s0 * s0) : 0.5 * (s1 * s1 - rho * rho);
        }

        double mass(double lo, double hi) const
        {
            if (!(hi > lo))
                return 0.0;
            double total = 0.0;
            for (int k = 1; k <= 8; ++k)
            {
                const auto &p = support.piece(k);
                if (p.empty)
                    continue;
                auto pts = breakpoints(k, {lo, hi});
                const auto &kk = kinks[static_cast<std::size_t>(k - 1)];
                pts.insert(pts.end(), kk.begin(), kk.end());
                std::sort(pts.begin(), pts.end());
                pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
                for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                {
                    const auto r = detail::adaptive_gk([&](double b) { return below(k, hi, b) - below(k, lo, b); },
                                                       pts[i], pts[i + 1], 1e-10 * cfg.area(), 14);
                    total += r.value;
                }
            }
            return total / cfg.area();
        }

        std::array<double, 3> moments() const
        {
            const auto &angles = support.angles();
            std::array<double, 3> m{};
            for (int p = 0; p < 3; ++p)
            {
                double sum = 0.0;
                for (const auto &piece : angles.pieces)
                {
                    if (!(piece.alpha_hi > piece.alpha_lo))
                        continue;
                    auto inner = [&](double alpha)
                    {
                        const auto [blo, bhi] = angles.beta_bounds(piece.index, alpha);
                        if (!(bhi > blo))
                            return 0.0;
                        const auto r = detail::adaptive_gk(
                            [&](double beta)
                            {
                                const double f = doppler_of_angles(cfg, alpha, beta);
                                return std::pow(f, p) * aoa_aod_jacobian(cfg, alpha, beta);
                            },
                            blo, bhi, 1e-9 * std::pow(cfg.f_dmax() + 1.0, p) * cfg.area(), 12);
                        return r.value;
                    };
                    std::vector<double> pts{piece.alpha_lo, piece.alpha_hi};
                    const double a_los = angles.constants.alpha_los;
                    if (a_los > piece.alpha_lo && a_los < piece.alpha_hi)
                        pts.insert(pts.begin() + 1, a_los);
                    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                        sum += detail::adaptive_gk(inner, pts[i], pts[i + 1], 1e-8 * std::pow(cfg.f_dmax() + 1.0, p) * cfg.area(), 12).value;
                }
                m[static_cast<std::size_t>(p)] = sum / cfg.area();
            }
            return m;
        }
    };

    DopplerDensity::DopplerDensity(const ValidatedConfig &cfg, DpdfOptions opt)
        : impl_(std::make_unique<Impl>(cfg, opt)) {}
    DopplerDensity::~DopplerDensity() = default;
    DopplerDensity::DopplerDensity(DopplerDensity &&) noexcept = default;
    DopplerDensity &DopplerDensity::operator=(DopplerDensity &&) noexcept = default;

    const DopplerSupport &DopplerDensity::support() const noexcept { return impl_->support; }
    const DisjointSupport &DopplerDensity::disjoint() const noexcept { return impl_->disjoint; }
    DopplerBounds DopplerDensity::bounds() const noexcept { return impl_->nu_bounds; }

    double DopplerDensity::operator()(double nu) const { return impl_->density(nu); }

    std::vector<std::pair<double, double>> DopplerDensity::beta_intervals(int k, double nu) const
    {
        return impl_->intervals(k, nu);
    }

    std::array<double, 3> DopplerDensity::moments() const { return impl_->moments(); }

    double DopplerDensity::mass(double lo, double hi) const { return impl_->mass(lo, hi); }

    std::vector<double> DopplerDensity::critical_frequencies() const
    {
        std::vector<double> out{impl_->nu_bounds.nu_min, impl_->nu_bounds.nu_max};
        for (const auto &pc : impl_->curves)
            for (const auto &c : pc)
                for (const auto &s : c.segments)
                {
                    out.push_back(s.f0);
                    out.push_back(s.f1);
                }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<double> DopplerDensity::evaluate(const std::vector<double> &nu, unsigned threads) const
    {
        std::vector<double> out(nu.size());
        parallel_for(nu.size(), [&](std::size_t i) { out[i] = (*this)(nu[i]); }, threads);
        return out;
    }

    double dpdf(const ValidatedConfig &cfg, double nu)
    {
        return DopplerDensity(cfg)(nu);
    }

    std::vector<double> uniform_grid(double lo, double hi, std::size_t n)
    {
        std::vector<double> g(n);
        if (n == 1)
        {
            g[0] = 0.5 * (lo + hi);
            return g;
        }
        for (std::size_t i = 0; i < n; ++i)
            g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        return g;
    }

    std::vector<double> default_dpdf_grid(const ValidatedConfig &cfg, std::size_t n)
    {
        const auto b = doppler_bounds(cfg);
        return uniform_grid(b.nu_min - 1.0, b.nu_max + 1.0, n);
    }

    namespace
    {
        double trapezoid_2d(const DensityGrid &g)
        {
            const std::size_t n1 = g.axis1.size(), n2 = g.axis2.size();
            if (n1 < 2 || n2 < 2)
                return 0.0;
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < n1; ++i)
                for (std::size_t j = 0; j + 1 < n2; ++j)
                {
                    const double cell = (g.axis1[i + 1] - g.axis1[i]) * (g.axis2[j + 1] - g.axis2[j]);
                    sum += 0.25 * cell * (g.at(i, j) + g.at(i + 1, j) + g.at(i, j + 1) + g.at(i + 1, j + 1));
                }
            return sum;
        }
    }

    DensityGrid aoa_aod_grid(const ValidatedConfig &cfg, std::size_t n_alpha, std::size_t n_beta, unsigned threads)
    {
        const auto support = build_angle_support(cfg);
        DensityGrid g;
        g.axis1 = uniform_grid(-pi, pi, n_alpha);
        g.axis2 = uniform_grid(-pi, pi, n_beta);
        g.values.assign(n_alpha * n_beta, 0.0);
        parallel_for(n_alpha, [&](std::size_t i)
                     {
            for (std::size_t j = 0; j < n_beta; ++j)
                g.values[i * n_beta + j] = joint_aoa_aod_pdf(cfg, support, g.axis1[i], g.axis2[j]); }, threads);
        g.total_mass = trapezoid_2d(g);
        return g;
    }

    DensityGrid doppler_aoa_grid(const ValidatedConfig &cfg, std::size_t n_nu, std::size_t n_beta, unsigned threads)
    {
        const auto support = build_doppler_support(cfg);
        const auto b = doppler_bounds(cfg);
        DensityGrid g;
        g.axis1 = uniform_grid(b.nu_min, b.nu_max, n_nu);
        g.axis2 = uniform_grid(-pi, pi, n_beta);
        g.values.assign(n_nu * n_beta, 0.0);
        parallel_for(n_nu, [&](std::size_t i)
                     {
            for (std::size_t j = 0; j < n_beta; ++j)
                g.values[i * n_beta + j] = joint_doppler_aoa_pdf(support, g.axis1[i], g.axis2[j]); }, threads);
        g.total_mass = trapezoid_2d(g);
        return g;
    }
}
