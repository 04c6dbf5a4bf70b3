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

#include <algorithm>
#include <cmath>

namespace rss
{
    std::string to_string(SwitchCase c)
    {
        switch (c)
        {
        case SwitchCase::Base: return "base";
        case SwitchCase::Case15: return "case15";
        case SwitchCase::Case1256: return "case1256";
        }
        return "unknown";
    }

    double edge_aoa(const GeometryConstants &g, BoundEdge e, double alpha)
    {
        const double s = std::sin(alpha);
        const double c = std::cos(alpha);
        const double t = std::tan(alpha);
        // Horizontal edges are written with sin/cos instead of tan so that the branch
        // offsets of the tan form are implied by the sign of sin(alpha).
        switch (e)
        {
        case BoundEdge::Right1: return std::atan(g(1) * t + g(2));
        case BoundEdge::Bottom1: return std::atan2(s, g(3) * s + g(4) * c);
        case BoundEdge::Top1: return std::atan2(s, g(5) * s + g(6) * c);
        case BoundEdge::Left1: return std::atan(g(7) * t + g(8)) + pi;
        case BoundEdge::Top2: return std::atan2(s, g(9) * s + g(10) * c);
        case BoundEdge::Left2: return std::atan(g(11) * t + g(12)) - pi;
        case BoundEdge::Bottom2: return std::atan2(s, g(13) * s + g(14) * c);
        case BoundEdge::Right2: return std::atan(g(15) * t + g(16));
        }
        return 0.0;
    }

    std::pair<double, double> AngleSupport::beta_bounds(int k, double alpha) const
    {
        const auto &p = piece(k);
        double lo = edge_aoa(constants, p.lower_edge, alpha);
        double hi = edge_aoa(constants, p.upper_edge, alpha);
        // Along a Tx ray the AoA moves toward alpha; whether it increases or decreases
        // depends on which side of the ray the receiver lies.
        const double side = std::sin(alpha - constants.alpha_los);
        const bool swap = p.region == 1 ? side < 0.0 : side > 0.0;
        if (swap)
            std::swap(lo, hi);
        return {lo, hi};
    }

    int AngleSupport::piece_of(double alpha, double beta) const
    {
        for (const auto &p : pieces)
        {
            const bool last = p.index == 4 || p.index == 8;
            const bool in_alpha = alpha >= p.alpha_lo && (alpha < p.alpha_hi || (last && alpha <= p.alpha_hi));
            if (!in_alpha)
                continue;
            const auto [lo, hi] = beta_bounds(p.index, alpha);
            if (beta >= lo && beta <= hi)
                return p.index;
        }
        return 0;
    }

    AngleSupport build_angle_support(const ValidatedConfig &cfg)
    {
        AngleSupport s;
        s.constants = geometry_constants(cfg);
        s.critical = critical_angles(cfg);
        const auto &ca = s.critical;
        const double a_los = s.constants.alpha_los;

        if (ca.alpha_c(8) < a_los && a_los <= ca.alpha_c(1))
            s.switch_case = SwitchCase::Base;
        else if (ca.alpha_c(1) < a_los && a_los <= ca.alpha_c(2))
            s.switch_case = SwitchCase::Case15;
        else if (ca.alpha_c(2) < a_los && a_los < pi / 2.0)
            s.switch_case = SwitchCase::Case1256;
        else
            throw UnsupportedRegime("LoS direction " + std::to_string(a_los) + " rad lies outside (alpha_C8, pi/2)");

        using E = BoundEdge;
        const double h = pi / 2.0;
        s.pieces = {{
            {1, 1, ca.alpha_c(1), ca.alpha_c(2), E::Right1, E::Bottom1, false},
            {2, 1, ca.alpha_c(2), h, E::Top1, E::Bottom1, false},
            {3, 1, h, ca.alpha_c(3), E::Top1, E::Bottom1, false},
            {4, 1, ca.alpha_c(3), ca.alpha_c(4), E::Left1, E::Bottom1, false},
            {5, 2, ca.alpha_c(5), ca.alpha_c(6), E::Top2, E::Left2, false},
            {6, 2, ca.alpha_c(6), -h, E::Top2, E::Bottom2, false},
            {7, 2, -h, ca.alpha_c(7), E::Top2, E::Bottom2, false},
            {8, 2, ca.alpha_c(7), ca.alpha_c(8), E::Top2, E::Right2, false},
        }};
        if (s.switch_case == SwitchCase::Case15)
            s.pieces[0].regime_swap = s.pieces[4].regime_swap = true;
        if (s.switch_case == SwitchCase::Case1256)
            for (int k : {0, 1, 4, 5})
                s.pieces[static_cast<std::size_t>(k)].regime_swap = true;
        return s;
    }

    std::array<double, 2> inverse_point(const ValidatedConfig &cfg, double alpha, double beta)
    {
        const double den = std::sin(beta - alpha); // cross(d_alpha, d_beta)
        if (std::abs(den) < 1e-15)
            throw ParallelRays("AoD and AoA rays are parallel");
        const double dx = cfg.rx().x - cfg.tx().x;
        const double dy = cfg.rx().y - cfg.tx().y;
        const double s = (dx * std::sin(beta) - dy * std::cos(beta)) / den;
        return {cfg.tx().x + s * std::cos(alpha), cfg.tx().y + s * std::sin(alpha)};
    }

    double inverse_doppler(const ValidatedConfig &cfg, double nu, double beta, int region)
    {
        const double ft = cfg.f_tmax();
        if (!(ft > 0.0))
            throw DegenerateGeometry("inverse Doppler map needs a moving transmitter");
        double z = (nu - cfg.f_rmax() * std::cos(beta - cfg.rx().gamma)) / ft;
        if (std::abs(z) > 1.0 + 1e-12)
            throw OutOfBand("Doppler frequency " + std::to_string(nu) + " Hz is out of band for this AoA");
        z = std::clamp(z, -1.0, 1.0);

        const double g = cfg.tx().gamma;
        const double ac = std::acos(z);
        const double plus = wrap_angle(g + ac);
        const double minus = wrap_angle(g - ac);
        const double want = region == 1 ? 1.0 : -1.0;
        const bool ok_plus = want * std::sin(plus) >= 0.0;
        const bool ok_minus = want * std::sin(minus) >= 0.0;
        if (ok_plus && (!ok_minus || plus == minus))
            return plus;
        if (ok_minus && !ok_plus)
            return minus;
        throw UnsupportedRegime("transmitter heading does not separate the scatterer regions");
    }

    double aoa_aod_jacobian(const ValidatedConfig &cfg, double alpha, double beta) noexcept
    {
        const double m = (cfg.rx().y - cfg.tx().y) / (cfg.rx().x - cfg.tx().x);
        const double dx = cfg.tx().x - cfg.rx().x;
        const double sd = std::sin(alpha - beta);
        const double num = (std::sin(alpha) - m * std::cos(alpha)) * (std::sin(beta) - m * std::cos(beta));
        return std::abs(dx * dx * num / (sd * sd * sd));
    }

    double joint_aoa_aod_pdf(const ValidatedConfig &cfg, const AngleSupport &support, double alpha, double beta)
    {
        if (!support.contains(alpha, beta))
            return 0.0;
        return aoa_aod_jacobian(cfg, alpha, beta) / cfg.area();
    }

    double joint_aoa_aod_pdf(const ValidatedConfig &cfg, double alpha, double beta)
    {
        return joint_aoa_aod_pdf(cfg, build_angle_support(cfg), alpha, beta);
    }
}
