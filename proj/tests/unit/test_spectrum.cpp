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

#include "scenes.hpp"

#include "rss/error.hpp"
#include "rss/spectrum.hpp"

#include <cmath>

using namespace rss;
using namespace rss::testing;
using Catch::Approx;

TEST_CASE("spectrum has unit area split by the Rician weights", "[spectrum]")
{
    const ValidatedConfig v = validate_config(highway_fitted());
    const double K = v.k_factor();

    SECTION("power weights")
    {
        const SpectrumCurve s = dpsd(v, default_dpdf_grid(v, 2049), WeightConvention::Power, 1);
        REQUIRE(s.los_impulse.has_value());
        CHECK(s.impulse_weight() == Approx(K / (K + 1)).epsilon(1e-12));
        CHECK(s.continuous_weight == Approx(1.0 / (K + 1)).epsilon(1e-12));
        CHECK(s.continuous_weight == Approx(0.394).margin(0.005));
        CHECK(s.continuous_mass() + s.impulse_weight() == Approx(1.0).margin(2e-3));
        CHECK(s.los_impulse->frequency == Approx(0.0).margin(1e-9));
    }
    SECTION("amplitude weights")
    {
        const SpectrumCurve s = dpsd(v, default_dpdf_grid(v, 2049), WeightConvention::Amplitude, 1);
        const double w = std::sqrt(K / (K + 1)), d = std::sqrt(1 / (K + 1));
        CHECK(s.raw_impulse_weight == Approx(w));
        CHECK(s.raw_continuous_weight == Approx(d));
        CHECK(s.impulse_weight() == Approx(w / (w + d)).epsilon(1e-12));
        CHECK(s.continuous_mass() + s.impulse_weight() == Approx(1.0).margin(2e-3));
    }
}

TEST_CASE("zero K gives a purely diffuse spectrum", "[spectrum]")
{
    const ValidatedConfig v = validate_config(highway_od());
    const SpectrumCurve s = dpsd(v, {}, WeightConvention::Power, 1);
    CHECK_FALSE(s.los_impulse.has_value());
    CHECK(s.impulse_weight() == 0.0);
    CHECK(s.continuous_weight == 1.0);
    CHECK(s.continuous_mass() == Approx(1.0).margin(2e-3));
}

TEST_CASE("curve statistics approach the quadrature statistics", "[spectrum]")
{
    for (const ModelConfig &c : {highway_fitted(), highway_od(), urban_sd(), oncoming_fitted()})
    {
        const ValidatedConfig v = validate_config(c);
        const DopplerStats exact = doppler_stats(v);
        const DopplerStats sampled = doppler_stats(dpsd(v, default_dpdf_grid(v, 4096), WeightConvention::Power, 1));
        CHECK(sampled.B_1 == Approx(exact.B_1).margin(0.5));
        CHECK(sampled.B_2 == Approx(exact.B_2).margin(0.5));
        CHECK(exact.B_d == Approx(exact.nu_max - exact.nu_min));
        CHECK(exact.B_d <= 2.0 * v.f_dmax() + 1e-9);
        CHECK(exact.B_2 > 0.0);
    }
}

TEST_CASE("Rician statistics mix the LoS line with the diffuse moments", "[spectrum]")
{
    const ValidatedConfig v = validate_config(oncoming_fitted());
    const DopplerDensity f(v);
    const auto m = f.moments();
    const double fl = los_parameters(v).f_los;

    ModelConfig ck = v.scene();
    ck.k_factor = 2.0;
    const DopplerStats s = doppler_stats(validate_config(ck));
    const double p = 2.0 / 3.0, q = 1.0 / 3.0;
    const double mean = p * fl + q * m[1];
    CHECK(s.B_1 == Approx(mean).epsilon(1e-6));
    CHECK(s.B_2 == Approx(std::sqrt(p * fl * fl + q * m[2] - mean * mean)).epsilon(1e-6));
}

TEST_CASE("weight convention names", "[spectrum]")
{
    CHECK(parse_weight_convention(to_string(WeightConvention::Power)) == WeightConvention::Power);
    CHECK(parse_weight_convention(to_string(WeightConvention::Amplitude)) == WeightConvention::Amplitude);
    CHECK_THROWS_AS(parse_weight_convention("decibel"), ConfigError);
}

TEST_CASE("config hash tracks the scene", "[spectrum]")
{
    ModelConfig c = highway_sd();
    const std::string h = config_hash(c);
    CHECK(h == config_hash(highway_sd()));
    c.upper.d += 1e-9;
    CHECK(h != config_hash(c));
}

TEST_CASE("symmetric layout places both regions around the road", "[spectrum]")
{
    ModelConfig t;
    t.tx = {-200.0, -5.25, 105.0 * kmh, 0.0};
    t.rx = {200.0, -1.75, 105.0 * kmh, 0.0};
    const ModelConfig c = symmetric_layout(t, 1.5, 28.0);
    const double half = 0.75 * std::sqrt(400.0 * 400.0 + 3.5 * 3.5);
    CHECK(c.upper.a == Approx(-half));
    CHECK(c.upper.b == Approx(half));
    CHECK(c.lower.a == Approx(-half));
    CHECK(c.lower.b == Approx(half));
    CHECK(c.upper.c == Approx(14.0));
    CHECK(c.upper.d == Approx(19.0));
    CHECK(c.lower.d == Approx(-14.0));
    CHECK(c.lower.c == Approx(-19.0));
    CHECK(c.tx.y == t.tx.y);
}

TEST_CASE("sweep reports failing points and keeps going", "[spectrum]")
{
    ModelConfig t;
    t.tx = {-200.0, -5.25, 105.0 * kmh, 0.0};
    t.rx = {200.0, -1.75, 105.0 * kmh, 0.0};
    const auto pts = sweep(t, SweepParameter::RegionLengthRatio, {0.5, 1.5, 2.0}, 28.0, 256, 1);
    REQUIRE(pts.size() == 3);
    CHECK_FALSE(pts[0].ok);
    CHECK_FALSE(pts[0].error.empty());
    CHECK(pts[1].ok);
    CHECK(pts[2].ok);
    CHECK(pts[2].stats.B_d >= pts[1].stats.B_d - 1e-9);
    CHECK(pts[1].curve.nu.size() == 256);

    CHECK(parse_sweep_parameter("r_l") == SweepParameter::RegionLengthRatio);
    CHECK(parse_sweep_parameter("w_r") == SweepParameter::RoadWidth);
    CHECK_THROWS_AS(parse_sweep_parameter("speed"), ConfigError);
}
