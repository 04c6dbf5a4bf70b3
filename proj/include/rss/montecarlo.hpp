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
#include "rss/spectrum.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace rss
{
    struct ScattererSet
    {
        std::vector<std::array<double, 2>> points; // region-1 points first, then region 2
        std::size_t n1 = 0;
        std::size_t n2 = 0;
        std::uint64_t seed = 0;
        std::uint32_t substream = 0;
    };

    // N1 = floor(N A1 / A) uniform points in the upper region, N2 = N - N1 in the lower one.
    ScattererSet sample_scatterers(const ValidatedConfig &cfg, std::size_t n, std::uint64_t seed, std::uint32_t substream = 0);

    std::vector<double> doppler_samples(const ValidatedConfig &cfg, const ScattererSet &set);

    // (AoD, AoA) of every scatterer.
    std::vector<std::array<double, 2>> angle_samples(const ValidatedConfig &cfg, const ScattererSet &set);

    // (Doppler, AoA) of every scatterer.
    std::vector<std::array<double, 2>> doppler_aoa_samples(const ValidatedConfig &cfg, const ScattererSet &set);

    struct GainSeries
    {
        std::vector<std::complex<double>> samples;
        double fs = 0.0;       // Hz
        double duration = 0.0; // s
        std::size_t n = 0;     // number of cisoids
        std::uint64_t seed = 0;
        std::uint32_t substream = 0;
    };

    // Sum-of-cisoids channel gain with equal gains 1/sqrt(N) and i.i.d. uniform phases,
    // plus the LoS cisoid when K > 0. Requires fs >= 2 f_Dmax.
    GainSeries gain_series(const ValidatedConfig &cfg, std::size_t n, double fs, double duration, std::uint64_t seed,
                           std::uint32_t substream = 0);

    struct PsdOptions
    {
        std::size_t max_lag = 0; // 0 selects 25% of the series length
        std::size_t nfft = 0;    // 0 selects the next power of two above 2 max_lag + 1
    };

    // Averaged biased ACF (rectangular lag window), Fourier transformed, negative values
    // clipped, normalized to unit area. The grid runs over [-fs/2, fs/2).
    SpectrumCurve estimate_dpsd(const std::vector<GainSeries> &series, PsdOptions opt = {}, unsigned threads = 0);

    struct HistogramSpec
    {
        double lo = 0.0;
        double hi = 1.0;
        std::size_t bins = 64;

        double width() const { return (hi - lo) / static_cast<double>(bins); }
        double edge(std::size_t i) const { return lo + width() * static_cast<double>(i); }
    };

    struct HistogramEstimate
    {
        std::vector<double> edges1;           // bins + 1 edges
        std::vector<double> edges2;           // empty for 1D
        std::vector<double> density;          // averaged normalized histogram, row-major for 2D
        std::vector<std::uint64_t> counts;    // raw counts summed over repetitions
        std::vector<bool> empty;              // bins never hit (hidden in plots, kept for mass)
        std::size_t repetitions = 0;
        std::size_t total_bins = 0;           // M_T
        std::size_t nonempty_bins = 0;        // M
        std::uint64_t samples = 0;            // counted samples over all repetitions
        std::uint64_t out_of_range = 0;

        double mass() const;
    };

    // Each inner vector is one repetition. Density = counts / (n_rep * width), averaged.
    HistogramEstimate estimate_histogram(const std::vector<std::vector<double>> &repetitions, const HistogramSpec &spec);
    HistogramEstimate estimate_histogram(const std::vector<std::vector<std::array<double, 2>>> &repetitions,
                                         const HistogramSpec &spec1, const HistogramSpec &spec2);

    struct GofReport
    {
        double Z = 0.0;
        std::size_t dof = 0;
        std::size_t bins_used = 0; // M after pooling
        double p = 0.05;
        double z_alpha = 0.0;
        bool accept = false;
        double mse = 0.0; // histogram density vs analytic bin-average density
    };

    // Critical value of the chi-square distribution: P(Z > z_alpha) = p.
    double chi_square_critical(std::size_t dof, double p);

    // Pearson test of counts against bin probabilities. Adjacent bins are pooled until each
    // group expects at least min_expected counts. Throws DegenerateBins when fewer than two
    // groups remain.
    GofReport chi_square_test(const HistogramEstimate &hist, const std::vector<double> &bin_probability, double p = 0.05,
                              double min_expected = 5.0);

    // Bin probabilities of the analytic Doppler density on the histogram edges.
    std::vector<double> doppler_bin_probabilities(const DopplerDensity &density, const std::vector<double> &edges);

    // Convenience: 1D Doppler histogram tested against the analytic density.
    GofReport chi_square_test(const HistogramEstimate &hist, const DopplerDensity &density, double p = 0.05,
                              double min_expected = 5.0);

    // Mean of (a - b)^2 over matching entries.
    double mean_square_error(const std::vector<double> &a, const std::vector<double> &b);

    // Averages a sampled curve over uniform cells [lo + i w, lo + (i+1) w).
    std::vector<double> cell_average(const std::vector<double> &x, const std::vector<double> &y, double lo, double width,
                                     std::size_t cells);
}
