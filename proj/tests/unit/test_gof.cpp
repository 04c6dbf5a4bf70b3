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

#include <cmath>
#include <numeric>

using namespace rss;
using namespace rss::testing;
using Catch::Approx;

TEST_CASE("histogram density integrates to the in-range share", "[gof]")
{
    const std::vector<std::vector<double>> reps = {{0.1, 0.2, 0.25, 0.9, 1.5}, {0.5, 0.5, 0.5, 0.5}};
    const HistogramEstimate h = estimate_histogram(reps, {0.0, 1.0, 4});
    REQUIRE(h.edges1.size() == 5);
    CHECK(h.counts == std::vector<std::uint64_t>{2, 1, 4, 1});
    CHECK(h.out_of_range == 1);
    CHECK(h.samples == 8);
    CHECK(h.nonempty_bins == 4);
    // repetition 1 holds 4/5 in range, repetition 2 all of it
    CHECK(h.mass() == Approx(0.5 * (0.8 + 1.0)));
    CHECK(h.density[2] == Approx(0.5 * (0.0 + 4.0 / (4 * 0.25))));
}

TEST_CASE("2D histogram is row-major in the first axis", "[gof]")
{
    const std::vector<std::vector<std::array<double, 2>>> reps = {{{0.1, 0.9}, {0.9, 0.1}, {0.9, 0.2}}};
    const HistogramEstimate h = estimate_histogram(reps, {0.0, 1.0, 2}, {0.0, 1.0, 2});
    CHECK(h.counts == std::vector<std::uint64_t>{0, 1, 2, 0});
    CHECK(h.empty == std::vector<bool>{true, false, false, true});
    CHECK(h.mass() == Approx(1.0));
}

TEST_CASE("chi-square critical values match tables", "[gof]")
{
    CHECK(chi_square_critical(1, 0.05) == Approx(3.841).margin(1e-3));
    CHECK(chi_square_critical(10, 0.05) == Approx(18.307).margin(1e-3));
    CHECK(chi_square_critical(100, 0.05) == Approx(124.342).margin(1e-3));
    CHECK(chi_square_critical(5, 0.01) == Approx(15.086).margin(1e-3));
}

TEST_CASE("Pearson statistic by hand", "[gof]")
{
    HistogramEstimate h;
    h.counts = {30, 20, 50};
    h.density = {0, 0, 0};
    h.edges1 = {0, 1, 2, 3};
    h.samples = 100;
    const GofReport r = chi_square_test(h, {0.25, 0.25, 0.5});
    CHECK(r.Z == Approx(25.0 / 25 + 25.0 / 25 + 0.0));
    CHECK(r.dof == 2);
    CHECK(r.accept);
}

TEST_CASE("sparse tails are pooled before testing", "[gof]")
{
    HistogramEstimate h;
    h.counts = {1, 0, 2, 48, 49};
    h.density.assign(5, 0.0);
    h.edges1 = {0, 1, 2, 3, 4, 5};
    h.samples = 100;
    const GofReport r = chi_square_test(h, {0.01, 0.01, 0.02, 0.48, 0.48});
    CHECK(r.bins_used < 5);
    CHECK(r.dof + 1 == r.bins_used);
}

TEST_CASE("degenerate inputs are rejected", "[gof]")
{
    HistogramEstimate h;
    h.counts = {10, 0};
    h.density = {0, 0};
    h.edges1 = {0, 1, 2};
    h.samples = 10;
    CHECK_THROWS_AS(chi_square_test(h, {1.0, 0.0}), DegenerateBins);
    CHECK_THROWS_AS(chi_square_test(h, {1.0}), DegenerateBins);
    h.counts = {0, 0};
    h.samples = 0;
    CHECK_THROWS_AS(chi_square_test(h, {0.5, 0.5}), DegenerateBins);
    CHECK_THROWS_AS(estimate_histogram(std::vector<std::vector<double>>{}, {1.0, 1.0, 4}), DegenerateBins);
}

TEST_CASE("analytic Doppler density passes its own chi-square test", "[gof]")
{
    const ValidatedConfig v = validate_config(highway_sd());
    const DopplerDensity f(v);
    const DopplerBounds b = f.bounds();
    int accepted = 0;
    for (std::uint32_t seed = 1; seed <= 10; ++seed)
    {
        const auto s = doppler_samples(v, sample_scatterers(v, 20000, seed));
        const auto h = estimate_histogram({s}, {b.nu_min, b.nu_max, 50});
        accepted += chi_square_test(h, f).accept ? 1 : 0;
    }
    CHECK(accepted >= 8);

    // samples from a shifted copy of the scene are rejected
    ModelConfig shifted = v.scene();
    shifted.upper.c += 10.0;
    shifted.upper.d += 10.0;
    const ValidatedConfig w = validate_config(shifted);
    const auto s = doppler_samples(w, sample_scatterers(w, 20000, 1));
    const auto h = estimate_histogram({s}, {b.nu_min, b.nu_max, 50});
    CHECK_FALSE(chi_square_test(h, f).accept);
}

TEST_CASE("mean square error and cell averages", "[gof]")
{
    CHECK(mean_square_error({1, 2, 3}, {1, 2, 5}) == Approx(4.0 / 3));
    CHECK_THROWS_AS(mean_square_error({}, {}), EmptyInput);
    const std::vector<double> x = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    const std::vector<double> y = {1.0, 1.0, 3.0, 3.0, 5.0, 5.0};
    const auto c = cell_average(x, y, 0.0, 1.0, 3);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == Approx(1.0));
    CHECK(c[1] == Approx(3.0));
    CHECK(c[2] == Approx(5.0));
}
