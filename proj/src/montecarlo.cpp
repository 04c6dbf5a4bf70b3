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

#include "rss/montecarlo.hpp"
#include "rss/error.hpp"
#include "rss/parallel.hpp"
#include "rss/random.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace rss
{
    ScattererSet sample_scatterers(const ValidatedConfig &cfg, std::size_t n, std::uint64_t seed, std::uint32_t substream)
    {
        ScattererSet s;
        s.seed = seed;
        s.substream = substream;
        s.n1 = static_cast<std::size_t>(std::floor(static_cast<double>(n) * cfg.region(1).area() / cfg.area()));
        s.n1 = std::min(s.n1, n);
        s.n2 = n - s.n1;
        s.points.reserve(n);
        auto fill = [&](const RssRegion &r, Stream id, std::size_t count)
        {
            PhiloxStream rng(seed, id, substream);
            for (std::size_t i = 0; i < count; ++i)
            {
                const double x = rng.uniform(r.a, r.b);
                const double y = rng.uniform(r.c, r.d);
                s.points.push_back({x, y});
            }
        };
        fill(cfg.region(1), Stream::Region1, s.n1);
        fill(cfg.region(2), Stream::Region2, s.n2);
        return s;
    }

    std::vector<double> doppler_samples(const ValidatedConfig &cfg, const ScattererSet &set)
    {
        std::vector<double> out;
        out.reserve(set.points.size());
        for (const auto &p : set.points)
            out.push_back(doppler_of_point(cfg, p[0], p[1]));
        return out;
    }

    std::vector<std::array<double, 2>> angle_samples(const ValidatedConfig &cfg, const ScattererSet &set)
    {
        std::vector<std::array<double, 2>> out;
        out.reserve(set.points.size());
        for (const auto &p : set.points)
            out.push_back({aod_of_point(cfg, p[0], p[1]), aoa_of_point(cfg, p[0], p[1])});
        return out;
    }

    std::vector<std::array<double, 2>> doppler_aoa_samples(const ValidatedConfig &cfg, const ScattererSet &set)
    {
        std::vector<std::array<double, 2>> out;
        out.reserve(set.points.size());
        for (const auto &p : set.points)
        {
            const double a = aod_of_point(cfg, p[0], p[1]);
            const double b = aoa_of_point(cfg, p[0], p[1]);
            out.push_back({doppler_of_angles(cfg, a, b), b});
        }
        return out;
    }

    GainSeries gain_series(const ValidatedConfig &cfg, std::size_t n, double fs, double duration, std::uint64_t seed,
                           std::uint32_t substream)
    {
        if (!(fs >= 2.0 * cfg.f_dmax()) || !(fs > 0.0))
            throw NonPositiveFrequency("sampling rate must be at least twice the maximum Doppler frequency");
        if (n == 0)
            throw EmptyInput("gain series needs at least one scatterer");
        const std::size_t len = static_cast<std::size_t>(std::llround(duration * fs));
        if (len == 0)
            throw InsufficientLength("gain series duration is shorter than one sample");

        GainSeries g;
        g.fs = fs;
        g.duration = duration;
        g.n = n;
        g.seed = seed;
        g.substream = substream;
        g.samples.assign(len, {0.0, 0.0});

        const auto set = sample_scatterers(cfg, n, seed, substream);
        const auto freq = doppler_samples(cfg, set);
        std::vector<double> phase(n);
        PhiloxStream rng(seed, Stream::Phases, substream);
        for (auto &p : phase)
            p = rng.uniform(-pi, pi);

        // Phasors advance by a fixed rotation per sample and are re-anchored periodically
        // from the exact phase to bound the accumulated rounding.
        constexpr std::size_t anchor = 512;
        std::vector<double> zr(n), zi(n), wr(n), wi(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            wr[k] = std::cos(2.0 * pi * freq[k] / fs);
            wi[k] = std::sin(2.0 * pi * freq[k] / fs);
        }
        const double amp = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t m = 0; m < len; ++m)
        {
            if (m % anchor == 0)
            {
                const double t = static_cast<double>(m) / fs;
                for (std::size_t k = 0; k < n; ++k)
                {
                    const double ph = std::fmod(phase[k] + 2.0 * pi * std::fmod(freq[k] * t, 1.0), 2.0 * pi);
                    zr[k] = std::cos(ph);
                    zi[k] = std::sin(ph);
                }
            }
            double sr[4] = {0, 0, 0, 0}, si[4] = {0, 0, 0, 0};
            std::size_t k = 0;
            for (; k + 4 <= n; k += 4)
                for (std::size_t q = 0; q < 4; ++q)
                {
                    sr[q] += zr[k + q];
                    si[q] += zi[k + q];
                }
            for (; k < n; ++k)
            {
                sr[0] += zr[k];
                si[0] += zi[k];
            }
            g.samples[m] = {amp * ((sr[0] + sr[1]) + (sr[2] + sr[3])), amp * ((si[0] + si[1]) + (si[2] + si[3]))};
            for (std::size_t j = 0; j < n; ++j)
            {
                const double r = zr[j] * wr[j] - zi[j] * wi[j];
                zi[j] = zr[j] * wi[j] + zi[j] * wr[j];
                zr[j] = r;
            }
        }

        const double k_f = cfg.k_factor();
        if (k_f > 0.0)
        {
            const auto los = los_parameters(cfg);
            const double c_los = std::sqrt(k_f / (k_f + 1.0));
            const double c_rss = std::sqrt(1.0 / (k_f + 1.0));
            const double ph0 = -2.0 * pi * std::fmod(los.d_los / cfg.wavelength(), 1.0);
            for (std::size_t m = 0; m < len; ++m)
            {
                const double t = static_cast<double>(m) / fs;
                const double ph = ph0 + 2.0 * pi * std::fmod(los.f_los * t, 1.0);
                g.samples[m] = c_rss * g.samples[m] + c_los * std::complex<double>(std::cos(ph), std::sin(ph));
            }
        }
        return g;
    }

    namespace
    {
        std::mutex &fftw_planner_mutex()
        {
            static std::mutex m;
            return m;
        }

        // In-place complex DFT of the given sign through FFTW; the planner is serialized.
        void fft_inplace(std::vector<std::complex<double>> &data, int sign)
        {
            auto *ptr = reinterpret_cast<fftw_complex *>(data.data());
            fftw_plan plan;
            {
                std::lock_guard<std::mutex> lock(fftw_planner_mutex());
                plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
            }
            fftw_execute(plan);
            {
                std::lock_guard<std::mutex> lock(fftw_planner_mutex());
                fftw_destroy_plan(plan);
            }
        }

        std::size_t next_pow2(std::size_t n)
        {
            std::size_t p = 1;
            while (p < n)
                p <<= 1;
            return p;
        }

        // Biased autocorrelation r[k] = (1/L) sum_i x[i+k] conj(x[i]) for k = 0..max_lag.
        std::vector<std::complex<double>> biased_acf(const std::vector<std::complex<double>> &x, std::size_t max_lag)
        {
            const std::size_t len = x.size();
            std::vector<std::complex<double>> buf(next_pow2(2 * len), {0.0, 0.0});
            std::copy(x.begin(), x.end(), buf.begin());
            fft_inplace(buf, FFTW_FORWARD);
            for (auto &v : buf)
                v = std::norm(v);
            fft_inplace(buf, FFTW_BACKWARD);
            // The inverse transform of |X|^2 gives sum_i x[i] conj(x[i-k]) at index k.
            const double scale = 1.0 / (static_cast<double>(buf.size()) * static_cast<double>(len));
            std::vector<std::complex<double>> r(max_lag + 1);
            for (std::size_t k = 0; k <= max_lag; ++k)
                r[k] = buf[k] * scale;
            return r;
        }
    }

    SpectrumCurve estimate_dpsd(const std::vector<GainSeries> &series, PsdOptions opt, unsigned threads)
    {
        if (series.empty())
            throw EmptyInput("no gain series to estimate from");
        const double fs = series.front().fs;
        std::size_t len = series.front().samples.size();
        for (const auto &s : series)
        {
            if (s.fs != fs)
                throw ConfigError("gain series must share one sampling rate");
            len = std::min(len, s.samples.size());
        }
        const std::size_t max_lag = opt.max_lag ? opt.max_lag : len / 4;
        if (len < 2 || max_lag + 1 > len)
            throw InsufficientLength("series of " + std::to_string(len) + " samples is shorter than " + std::to_string(max_lag + 1) + " lags");
        const std::size_t nfft = opt.nfft ? opt.nfft : next_pow2(2 * max_lag + 1);
        if (nfft < 2 * max_lag + 1)
            throw InsufficientLength("FFT length must hold the two-sided lag window");

        std::vector<std::vector<std::complex<double>>> acfs(series.size());
        parallel_for(series.size(), [&](std::size_t i)
                     {
            auto x = series[i].samples;
            x.resize(len);
            acfs[i] = biased_acf(x, max_lag); }, threads);

        std::vector<std::complex<double>> r(max_lag + 1, {0.0, 0.0});
        for (const auto &a : acfs) // fixed order over realizations
            for (std::size_t k = 0; k <= max_lag; ++k)
                r[k] += a[k];
        for (auto &v : r)
            v /= static_cast<double>(series.size());

        // S(f) = sum_k r[k] exp(-j 2 pi f k / fs), using r[-k] = conj(r[k]).
        std::vector<std::complex<double>> buf(nfft, {0.0, 0.0});
        buf[0] = r[0];
        for (std::size_t k = 1; k <= max_lag; ++k)
        {
            buf[k] = r[k];
            buf[nfft - k] = std::conj(r[k]);
        }
        fft_inplace(buf, FFTW_FORWARD);

        SpectrumCurve c;
        c.nu.resize(nfft);
        c.values.resize(nfft);
        const double df = fs / static_cast<double>(nfft);
        for (std::size_t i = 0; i < nfft; ++i)
        {
            const std::size_t src = (i + nfft / 2) % nfft; // shift zero frequency to the middle
            c.nu[i] = (static_cast<double>(i) - static_cast<double>(nfft / 2)) * df;
            c.values[i] = std::max(buf[src].real(), 0.0);
        }
        double area = 0.0;
        for (double v : c.values)
            area += v * df;
        if (area > 0.0)
            for (double &v : c.values)
                v /= area;
        c.convention = WeightConvention::Power;
        c.nu_min = c.nu.front();
        c.nu_max = c.nu.back();
        return c;
    }
}
