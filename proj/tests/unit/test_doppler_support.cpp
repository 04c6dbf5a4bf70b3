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

#include "catch_amalgamated.hpp"

#include "oracles.hpp"
#include "scenes.hpp"

#include "rss/analytic_pdf.hpp"
#include "rss/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace rss;
using namespace rss::testing;
using Catch::Approx;

namespace
{
    // |det d(nu, beta)/d(x, y)| by central differences.
    double fd_doppler_jacobian(const ModelConfig &c, double x, double y)
    {
        const double h = 1e-5 * std::max(1.0, std::hypot(x, y));
        auto beta = [&](double px, double py) { return std::atan2(py - c.rx.y, px - c.rx.x); };
        const double nx = (doppler_from_geometry(c, x + h, y) - doppler_from_geometry(c, x - h, y)) / (2 * h);
        const double ny = (doppler_from_geometry(c, x, y + h) - doppler_from_geometry(c, x, y - h)) / (2 * h);
        const double bx = (beta(x + h, y) - beta(x - h, y)) / (2 * h);
        const double by = (beta(x, y + h) - beta(x, y - h)) / (2 * h);
        return std::abs(nx * by - ny * bx);
    }

    ModelConfig reversed_tx()
    {
        ModelConfig c = highway_sd();
        c.tx.gamma = pi;
        return c;
    }
}

TEST_CASE("every scatterer lands inside one Doppler band", "[doppler-support]")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 20; ++n)
    {
        const ValidatedConfig v = random_scene(rng);
        const DopplerSupport s = build_doppler_support(v);
        for (int i = 0; i < 300; ++i)
        {
            const RssRegion &r = v.region(1 + (i & 1));
            const double x = r.a + r.length() * u(rng);
            const double y = r.c + r.width() * u(rng);
            const double nu = doppler_from_geometry(v.scene(), x, y);
            const double beta = aoa_of_point(v, x, y);
            double best = 1e300;
            for (int k = 1; k <= 8; ++k)
            {
                const auto b = s.band(k, beta);
                if (!b.ok)
                    continue;
                best = std::min(best, std::max({0.0, b.f_min - nu, nu - b.f_max}));
            }
            CHECK(best < 1e-6);
        }
    }
}

TEST_CASE("band edges stay within the maximum Doppler shift", "[doppler-support]")
{
    for (const ModelConfig &c : {highway_sd(), highway_od(), urban_sd(), oncoming_fitted()})
    {
        const ValidatedConfig v = validate_config(c);
        const DopplerSupport s = build_doppler_support(v);
        for (const auto &p : s.pieces())
        {
            if (p.empty)
                continue;
            for (int i = 0; i <= 50; ++i)
            {
                const double beta = p.beta_lo + (p.beta_hi - p.beta_lo) * i / 50.0;
                const auto b = s.band(p.index, beta);
                if (!b.ok)
                    continue;
                CHECK(b.f_min <= b.f_max + 1e-9);
                CHECK(std::abs(b.f_min) <= v.f_dmax() + 1e-9);
                CHECK(std::abs(b.f_max) <= v.f_dmax() + 1e-9);
            }
        }
    }
}

TEST_CASE("inverse Doppler map recovers the AoD", "[doppler-support]")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const ModelConfig &c : {highway_sd(), highway_od(), reversed_tx(), oncoming_fitted()})
    {
        const ValidatedConfig v = validate_config(c);
        for (int i = 0; i < 200; ++i)
        {
            const int region = 1 + (i & 1);
            const RssRegion &r = v.region(region);
            const double x = r.a + r.length() * u(rng);
            const double y = r.c + r.width() * u(rng);
            const double alpha = aod_of_point(v, x, y);
            const double beta = aoa_of_point(v, x, y);
            const double nu = doppler_from_geometry(c, x, y);
            CHECK(inverse_doppler(v, nu, beta, region) == Approx(alpha).margin(1e-7));
        }
        CHECK_THROWS_AS(inverse_doppler(v, v.f_dmax() + 10.0, 0.3, 1), OutOfBand);
    }
}

TEST_CASE("transmitter heading off the road axis is rejected", "[doppler-support]")
{
    ModelConfig c = highway_sd();
    c.tx.gamma = pi / 2;
    const ValidatedConfig v = validate_config(c);
    CHECK_THROWS_AS(build_doppler_support(v), UnsupportedRegime);
}

TEST_CASE("joint Doppler-AoA density matches the change of variables", "[doppler-support]")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (const ModelConfig &c : {highway_sd(), highway_od(), urban_sd(), oncoming_fitted()})
    {
        const ValidatedConfig v = validate_config(c);
        const DopplerSupport s = build_doppler_support(v);
        for (int i = 0; i < 200; ++i)
        {
            const RssRegion &r = v.region(1 + (i & 1));
            const double x = r.a + r.length() * u(rng);
            const double y = r.c + r.width() * u(rng);
            const double nu = doppler_from_geometry(c, x, y);
            const double beta = aoa_of_point(v, x, y);
            const double expected = 1.0 / (v.area() * fd_doppler_jacobian(c, x, y));
            CHECK(joint_doppler_aoa_pdf(s, nu, beta) == Approx(expected).epsilon(1e-4));
        }
        CHECK(joint_doppler_aoa_pdf(s, v.f_dmax() + 1.0, 0.2) == 0.0);
    }
}

TEST_CASE("joint Doppler-AoA density integrates to one", "[doppler-support]")
{
    for (const ModelConfig &c : {highway_sd(), highway_od(), urban_sd(), oncoming_fitted()})
        CHECK(doppler_aoa_mass(validate_config(c)) == Approx(1.0).margin(1e-4));
}

TEST_CASE("disjoint AoA intervals cover the union of piece ranges", "[doppler-support]")
{
    std::mt19937_64 rng(12);
    for (int n = 0; n < 20; ++n)
    {
        const ValidatedConfig v = random_scene(rng);
        const DopplerSupport s = build_doppler_support(v);

        std::vector<std::pair<double, double>> ranges;
        for (const auto &p : s.pieces())
            if (!p.empty)
                ranges.emplace_back(p.beta_lo, p.beta_hi);
        std::sort(ranges.begin(), ranges.end());
        double merged = 0.0, lo = ranges.front().first, hi = ranges.front().second;
        for (const auto &[a, b] : ranges)
        {
            if (a > hi)
            {
                merged += hi - lo;
                lo = a;
            }
            hi = std::max(hi, b);
        }
        merged += hi - lo;

        const DisjointSupport d = disjointify(s, {0.5 * (ranges.front().first + ranges.front().second)});
        CHECK(d.measure() == Approx(merged).epsilon(1e-12));
        CHECK(support_measure(s) == Approx(merged).epsilon(1e-12));
        for (std::size_t i = 0; i < d.intervals.size(); ++i)
        {
            CHECK(d.intervals[i].beta_lo < d.intervals[i].beta_hi);
            CHECK_FALSE(d.intervals[i].pieces.empty());
            if (i > 0)
                CHECK(d.intervals[i - 1].beta_hi <= d.intervals[i].beta_lo);
        }
    }
}

TEST_CASE("edge-search Doppler bounds match a dense lattice", "[doppler-support]")
{
    std::mt19937_64 rng(31);
    for (int n = 0; n < 20; ++n)
    {
        const ValidatedConfig v = random_scene(rng);
        const DopplerBounds b = doppler_bounds(v);
        const auto [lo, hi] = lattice_doppler_range(v.scene(), 600);
        CHECK(b.nu_min <= lo + 1e-9);
        CHECK(b.nu_max >= hi - 1e-9);
        CHECK(b.nu_min == Approx(lo).margin(0.05));
        CHECK(b.nu_max == Approx(hi).margin(0.05));
        CHECK(b.nu_min >= -v.f_dmax() - 1e-9);
        CHECK(b.nu_max <= v.f_dmax() + 1e-9);

        // the vertex rule evaluates real vertices only when both headings are zero
        if (v.rx().gamma == 0.0)
        {
            const DopplerBounds vr = doppler_bounds_vertex_rule(v);
            CHECK(vr.nu_min >= b.nu_min - 1e-9);
            CHECK(vr.nu_max <= b.nu_max + 1e-9);
        }
    }
}

TEST_CASE("vertex rule misses the interior extremum of an oncoming scene", "[doppler-support]")
{
    const ValidatedConfig v = validate_config(highway_od());
    const DopplerBounds edge = doppler_bounds(v);
    const DopplerBounds vr = doppler_bounds_vertex_rule(v);
    const auto [lo, hi] = lattice_doppler_range(v.scene(), 2000);
    CHECK(edge.nu_min == Approx(lo).margin(0.01));
    CHECK(edge.nu_max == Approx(hi).margin(0.01));
    CHECK(std::max(vr.nu_min - edge.nu_min, edge.nu_max - vr.nu_max) > 1.0);
}
