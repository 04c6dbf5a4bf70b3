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
#include "rss/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace rss;
using namespace rss::testing;
using Catch::Approx;

namespace
{
    std::vector<double> breaks_of(const DopplerDensity &f)
    {
        std::vector<double> b = f.critical_frequencies();
        b.push_back(f.bounds().nu_min);
        b.push_back(f.bounds().nu_max);
        return b;
    }

    // Doppler shifts of n uniform scatterers, drawn with a plain Mersenne twister.
    std::vector<double> reference_samples(const ModelConfig &c, std::size_t n, unsigned seed)
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double a1 = c.upper.area(), a2 = c.lower.area();
        std::vector<double> out(n);
        for (auto &f : out)
        {
            const RssRegion &r = u(rng) * (a1 + a2) < a1 ? c.upper : c.lower;
            f = doppler_from_geometry(c, r.a + r.length() * u(rng), r.c + r.width() * u(rng));
        }
        return out;
    }
}

TEST_CASE("Doppler density integrates to one", "[dpdf]")
{
    for (const ModelConfig &c : {highway_sd(), highway_od(), urban_sd(), oncoming_fitted()})
    {
        const DopplerDensity f(validate_config(c));
        const double total = integrate_breaks([&](double nu) { return f(nu); }, breaks_of(f), 1e-9);
        CHECK(total == Approx(1.0).margin(1e-4));
        CHECK(f.moments()[0] == Approx(1.0).margin(1e-6));
        CHECK(f.mass(f.bounds().nu_min - 1.0, f.bounds().nu_max + 1.0) == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("interval mass agrees with quadrature of the density", "[dpdf]")
{
    const DopplerDensity f(validate_config(highway_sd()));
    const DopplerBounds b = f.bounds();
    for (int i = 0; i < 8; ++i)
    {
        const double lo = b.nu_min + (b.nu_max - b.nu_min) * i / 8.0;
        const double hi = b.nu_min + (b.nu_max - b.nu_min) * (i + 1) / 8.0;
        std::vector<double> br{lo, hi};
        for (double c : f.critical_frequencies())
            if (c > lo && c < hi)
                br.push_back(c);
        const double q = integrate_breaks([&](double nu) { return f(nu); }, br, 1e-10);
        CHECK(f.mass(lo, hi) == Approx(q).margin(2e-6));
    }
}

TEST_CASE("distribution function agrees with sampled scatterers", "[dpdf]")
{
    for (const ModelConfig &c : {highway_sd(), highway_od(), oncoming_fitted()})
    {
        const DopplerDensity f(validate_config(c));
        const std::size_t n = 200000;
        std::vector<double> s = reference_samples(c, n, 99);
        std::sort(s.begin(), s.end());
        const DopplerBounds b = f.bounds();
        double worst = 0.0;
        for (int i = 1; i < 20; ++i)
        {
            const double nu = b.nu_min + (b.nu_max - b.nu_min) * i / 20.0;
            const double ecdf = static_cast<double>(std::lower_bound(s.begin(), s.end(), nu) - s.begin()) / n;
            worst = std::max(worst, std::abs(ecdf - f.mass(b.nu_min - 1.0, nu)));
        }
        // Kolmogorov-Smirnov 99.9% band for n = 2e5 is about 0.0044
        CHECK(worst < 0.0044);
    }
}

TEST_CASE("moments agree with sampled scatterers", "[dpdf]")
{
    const ModelConfig c = highway_od();
    const DopplerDensity f(validate_config(c));
    const auto s = reference_samples(c, 400000, 5);
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
    double sq = 0.0;
    for (double x : s)
        sq += x * x;
    sq /= s.size();
    const double sd = std::sqrt(sq - mean * mean);
    const auto m = f.moments();
    CHECK(m[1] == Approx(mean).margin(5.0 * sd / std::sqrt(400000.0)));
    CHECK(std::sqrt(m[2] - m[1] * m[1]) == Approx(sd).epsilon(0.01));
}

TEST_CASE("density vanishes outside the Doppler bounds", "[dpdf]")
{
    const DopplerDensity f(validate_config(urban_sd()));
    const DopplerBounds b = f.bounds();
    CHECK(f(b.nu_min - 0.5) == 0.0);
    CHECK(f(b.nu_max + 0.5) == 0.0);
    CHECK(f(0.5 * (b.nu_min + b.nu_max)) > 0.0);
    CHECK(dpdf(validate_config(urban_sd()), b.nu_max + 10.0) == 0.0);
}

TEST_CASE("moving the whole scene leaves the density unchanged", "[dpdf]")
{
    ModelConfig c = highway_sd();
    ModelConfig d = c;
    for (double *x : {&d.tx.x, &d.rx.x, &d.upper.a, &d.upper.b, &d.lower.a, &d.lower.b})
        *x += 125.0;
    for (double *y : {&d.tx.y, &d.rx.y, &d.upper.c, &d.upper.d, &d.lower.c, &d.lower.d})
        *y -= 3.5;
    const DopplerDensity f(validate_config(c));
    const DopplerDensity g(validate_config(d));
    for (int i = -10; i <= 10; ++i)
    {
        const double nu = 105.0 * i + 0.37;
        CHECK(g(nu) == Approx(f(nu)).epsilon(1e-6).margin(1e-12));
    }
}

TEST_CASE("grid evaluation is independent of the thread count", "[dpdf]")
{
    const ValidatedConfig v = validate_config(highway_od());
    const DopplerDensity f(v);
    const auto grid = default_dpdf_grid(v, 257);
    CHECK(grid.front() == Approx(f.bounds().nu_min - 1.0));
    CHECK(grid.back() == Approx(f.bounds().nu_max + 1.0));
    const auto one = f.evaluate(grid, 1);
    const auto four = f.evaluate(grid, 4);
    CHECK(one == four);
    for (std::size_t i = 0; i < grid.size(); i += 32)
        CHECK(one[i] == f(grid[i]));
}

TEST_CASE("uniform grid endpoints are exact", "[dpdf]")
{
    const auto g = uniform_grid(-3.0, 5.0, 9);
    REQUIRE(g.size() == 9);
    CHECK(g.front() == -3.0);
    CHECK(g.back() == 5.0);
    CHECK(g[4] == Approx(1.0));
}
