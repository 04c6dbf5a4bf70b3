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

#include "rss/error.hpp"
#include "rss/montecarlo.hpp"
#include "rss/random.hpp"

#include <cmath>
#include <complex>

using namespace rss;
using namespace rss::testing;
using Catch::Approx;

TEST_CASE("scatterer counts follow the area split with a floor", "[montecarlo]")
{
    const ValidatedConfig v = validate_config(highway_sd());
    for (std::size_t n : {1u, 7u, 1000u, 12345u})
    {
        const ScattererSet s = sample_scatterers(v, n, 3);
        const auto expect1 = static_cast<std::size_t>(std::floor(n * v.region(1).area() / v.area()));
        CHECK(s.n1 == expect1);
        CHECK(s.n1 + s.n2 == n);
        REQUIRE(s.points.size() == n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(v.region(i < s.n1 ? 1 : 2).contains(s.points[i][0], s.points[i][1]));
    }
}

TEST_CASE("scatterer draws are reproducible per seed and substream", "[montecarlo]")
{
    const ValidatedConfig v = validate_config(urban_sd());
    const auto a = sample_scatterers(v, 500, 11, 2);
    const auto b = sample_scatterers(v, 500, 11, 2);
    const auto c = sample_scatterers(v, 500, 11, 3);
    CHECK(a.points == b.points);
    CHECK(a.points != c.points);
}

TEST_CASE("sample transforms match the geometry", "[montecarlo]")
{
    const ValidatedConfig v = validate_config(highway_od());
    const auto s = sample_scatterers(v, 200, 1);
    const auto f = doppler_samples(v, s);
    const auto ang = angle_samples(v, s);
    const auto fa = doppler_aoa_samples(v, s);
    for (std::size_t i = 0; i < s.points.size(); ++i)
    {
        const auto [x, y] = s.points[i];
        CHECK(f[i] == Approx(doppler_from_geometry(v.scene(), x, y)).margin(1e-9));
        CHECK(ang[i][0] == Approx(std::atan2(y - v.tx().y, x - v.tx().x)).margin(1e-14));
        CHECK(ang[i][1] == Approx(std::atan2(y - v.rx().y, x - v.rx().x)).margin(1e-14));
        CHECK(fa[i][0] == f[i]);
        CHECK(fa[i][1] == ang[i][1]);
    }
}

TEST_CASE("gain series equals the direct sum of cisoids", "[montecarlo]")
{
    const ValidatedConfig v = validate_config(highway_fitted());
    const std::size_t n = 37;
    const double fs = 8.0 * v.f_dmax();
    const GainSeries g = gain_series(v, n, fs, 0.5, 19, 4);
    REQUIRE(g.samples.size() == static_cast<std::size_t>(std::llround(0.5 * fs)));

    const auto set = sample_scatterers(v, n, 19, 4);
    PhiloxStream rng(19, Stream::Phases, 4);
    std::vector<double> phase(n);
    for (auto &p : phase)
        p = rng.uniform(-pi, pi);
    const double K = v.k_factor();
    const auto los = los_parameters(v);
    for (std::size_t m : {0u, 1u, 511u, 512u, 1000u, 2049u})
    {
        const double t = static_cast<double>(m) / fs;
        std::complex<double> h = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            const double f = doppler_from_geometry(v.scene(), set.points[k][0], set.points[k][1]);
            h += std::polar(1.0, phase[k] + 2.0 * pi * f * t);
        }
        h *= std::sqrt(1.0 / (K + 1.0)) / std::sqrt(static_cast<double>(n));
        h += std::sqrt(K / (K + 1.0)) * std::polar(1.0, -2.0 * pi * los.d_los / v.wavelength() + 2.0 * pi * los.f_los * t);
        CHECK(std::abs(g.samples[m] - h) < 1e-8);
    }
}

TEST_CASE("one scatterer without LoS gives a unit-modulus tone", "[montecarlo]")
{
    const ValidatedConfig v = validate_config(highway_od());
    const double fs = 4.0 * v.f_dmax();
    const GainSeries g = gain_series(v, 1, fs, 1.0, 5);
    for (const auto &h : g.samples)
        REQUIRE(std::abs(h) == Approx(1.0).margin(1e-12));

    // the estimated spectrum peaks at the scatterer's Doppler shift
    const auto set = sample_scatterers(v, 1, 5);
    const double f = doppler_samples(v, set)[0];
    const SpectrumCurve s = estimate_dpsd({g}, {}, 1);
    const auto peak = std::max_element(s.values.begin(), s.values.end()) - s.values.begin();
    CHECK(std::abs(s.nu[static_cast<std::size_t>(peak)] - f) <= s.grid_step());
}

TEST_CASE("average channel power is one", "[montecarlo]")
{
    const ValidatedConfig v = validate_config(highway_fitted());
    const double fs = 2.5 * v.f_dmax();
    double p = 0.0;
    std::size_t count = 0;
    for (std::uint32_t r = 0; r < 40; ++r)
    {
        const GainSeries g = gain_series(v, 64, fs, 0.2, 77, r);
        for (const auto &h : g.samples)
            p += std::norm(h);
        count += g.samples.size();
    }
    CHECK(p / count == Approx(1.0).margin(0.05));
}

TEST_CASE("estimated spectrum has unit area on the sampling band", "[montecarlo]")
{
    const ValidatedConfig v = validate_config(highway_sd());
    const double fs = 8.0 * v.f_dmax();
    std::vector<GainSeries> reps;
    for (std::uint32_t r = 0; r < 4; ++r)
        reps.push_back(gain_series(v, 200, fs, 0.5, 8, r));
    const SpectrumCurve one = estimate_dpsd(reps, {}, 1);
    const SpectrumCurve two = estimate_dpsd(reps, {}, 2);
    double area = 0.0;
    for (double x : one.values)
    {
        CHECK(x >= 0.0);
        area += x * one.grid_step();
    }
    CHECK(area == Approx(1.0).margin(1e-9));
    CHECK(one.nu.front() == Approx(-fs / 2));
    CHECK(one.nu.back() < fs / 2);
    CHECK(one.values == two.values);
}

TEST_CASE("invalid simulation inputs are rejected", "[montecarlo]")
{
    const ValidatedConfig v = validate_config(highway_sd());
    CHECK_THROWS_AS(gain_series(v, 10, 1.5 * v.f_dmax(), 1.0, 1), NonPositiveFrequency);
    CHECK_THROWS_AS(gain_series(v, 0, 4 * v.f_dmax(), 1.0, 1), EmptyInput);
    CHECK_THROWS_AS(gain_series(v, 10, 4 * v.f_dmax(), 1e-9, 1), InsufficientLength);
    CHECK_THROWS_AS(estimate_dpsd({}), EmptyInput);
    PsdOptions o;
    o.max_lag = 100000;
    CHECK_THROWS_AS(estimate_dpsd({gain_series(v, 10, 4 * v.f_dmax(), 0.1, 1)}, o), InsufficientLength);
}
