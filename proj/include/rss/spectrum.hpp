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

#pragma once

#include "rss/analytic_pdf.hpp"
#include "rss/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rss
{
    // How the LoS and diffuse parts are weighted before the curve is brought to unit area.
    enum class WeightConvention
    {
        Amplitude, // sqrt(K/(K+1)) and sqrt(1/(K+1))
        Power      // K/(K+1) and 1/(K+1)
    };
    std::string to_string(WeightConvention w);
    WeightConvention parse_weight_convention(const std::string &s);

    struct LosImpulse
    {
        double frequency = 0.0; // Hz
        double weight = 0.0;    // area of the impulse after normalization
    };

    struct SpectrumCurve
    {
        std::vector<double> nu;     // Hz
        std::vector<double> values; // continuous part [1/Hz]
        std::optional<LosImpulse> los_impulse;

        WeightConvention convention = WeightConvention::Amplitude;
        double raw_impulse_weight = 0.0;    // weights before normalization
        double raw_continuous_weight = 1.0;
        double continuous_weight = 1.0;     // area carried by the continuous part
        double k_factor = 0.0;
        double nu_min = 0.0;                // support of the continuous part
        double nu_max = 0.0;
        int empty_pieces = 0;               // zero-measure support pieces
        std::string config_hash;

        double grid_step() const { return nu.size() > 1 ? nu[1] - nu[0] : 0.0; }
        double impulse_weight() const { return los_impulse ? los_impulse->weight : 0.0; }

        // Trapezoidal area of the sampled continuous part.
        double continuous_mass() const;
    };

    struct DopplerStats
    {
        double nu_min = 0.0;
        double nu_max = 0.0;
        double B_d = 0.0; // Doppler spread nu_max - nu_min
        double B_1 = 0.0; // mean Doppler shift
        double B_2 = 0.0; // RMS Doppler spread
    };

    // Rician DPSD on the given grid (default grid when empty).
    SpectrumCurve dpsd(const ValidatedConfig &cfg, const std::vector<double> &grid = {},
                       WeightConvention convention = WeightConvention::Amplitude, unsigned threads = 0);
    SpectrumCurve dpsd(const ValidatedConfig &cfg, const DopplerDensity &density, const std::vector<double> &grid,
                       WeightConvention convention = WeightConvention::Amplitude, unsigned threads = 0);

    // Spread, MDS and RDS with power weights, from quadrature moments of the diffuse density.
    DopplerStats doppler_stats(const ValidatedConfig &cfg);
    DopplerStats doppler_stats(const ValidatedConfig &cfg, const DopplerDensity &density);

    // The same measures from a sampled curve (trapezoid moments, impulse added exactly).
    DopplerStats doppler_stats(const SpectrumCurve &curve);

    // Stable textual digest of a config, stored in curve metadata and manifests.
    std::string config_hash(const ModelConfig &cfg);

    enum class SweepParameter
    {
        RegionLengthRatio, // r_l = l / d_LoS
        RoadWidth          // w_R
    };
    SweepParameter parse_sweep_parameter(const std::string &s);

    // Symmetric layout: a_i = -d_LoS r_l / 2, b_i = d_LoS r_l / 2, c1 = w_R / 2, d1 = c1 + 5,
    // d2 = -w_R / 2, c2 = d2 - 5. Vehicles, carrier and K come from the template.
    ModelConfig symmetric_layout(const ModelConfig &tmpl, double r_l, double w_r);

    struct SweepPoint
    {
        double value = 0.0;
        bool ok = false;
        std::string error;
        SpectrumCurve curve;
        DopplerStats stats;
    };

    // fixed_other is w_R for an r_l sweep and r_l for a w_R sweep. Failing points are
    // reported in place and the sweep continues.
    std::vector<SweepPoint> sweep(const ModelConfig &tmpl, SweepParameter parameter, const std::vector<double> &values,
                                  double fixed_other, std::size_t grid_points = 1024, unsigned threads = 0);
}
