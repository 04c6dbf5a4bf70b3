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

#include "rss/error.hpp"
#include "rss/montecarlo.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <limits>

namespace rss
{
    double HistogramEstimate::mass() const
    {
        double m = 0.0;
        const bool two_d = !edges2.empty();
        const std::size_t n1 = edges1.size() - 1;
        const std::size_t n2 = two_d ? edges2.size() - 1 : 1;
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j)
            {
                const double w = (edges1[i + 1] - edges1[i]) * (two_d ? edges2[j + 1] - edges2[j] : 1.0);
                m += density[i * n2 + j] * w;
            }
        return m;
    }

    namespace
    {
        std::vector<double> edges_of(const HistogramSpec &s)
        {
            std::vector<double> e(s.bins + 1);
            for (std::size_t i = 0; i <= s.bins; ++i)
                e[i] = s.edge(i);
            e.back() = s.hi;
            return e;
        }

        // Bin index of v, or -1 outside [lo, hi]. The upper edge belongs to the last bin.
        long bin_of(const HistogramSpec &s, double v)
        {
            if (!(v >= s.lo && v <= s.hi))
                return -1;
            const auto i = static_cast<long>((v - s.lo) / s.width());
            return std::min<long>(i, static_cast<long>(s.bins) - 1);
        }

        void finish(HistogramEstimate &h)
        {
            h.total_bins = h.counts.size();
            h.empty.resize(h.counts.size());
            h.nonempty_bins = 0;
            for (std::size_t i = 0; i < h.counts.size(); ++i)
            {
                h.empty[i] = h.counts[i] == 0;
                h.nonempty_bins += h.counts[i] != 0;
            }
        }
    }

    HistogramEstimate estimate_histogram(const std::vector<std::vector<double>> &repetitions, const HistogramSpec &spec)
    {
        if (spec.bins == 0 || !(spec.hi > spec.lo))
            throw DegenerateBins("histogram needs at least one bin of positive width");
        HistogramEstimate h;
        h.edges1 = edges_of(spec);
        h.density.assign(spec.bins, 0.0);
        h.counts.assign(spec.bins, 0);
        h.repetitions = repetitions.size();
        std::vector<std::uint64_t> rep_counts(spec.bins);
        for (const auto &rep : repetitions)
        {
            std::fill(rep_counts.begin(), rep_counts.end(), 0);
            std::uint64_t n = 0;
            for (double v : rep)
            {
                const long i = bin_of(spec, v);
                if (i < 0)
                {
                    ++h.out_of_range;
                    continue;
                }
                ++rep_counts[static_cast<std::size_t>(i)];
                ++n;
            }
            // Normalized by every sample of the repetition so out-of-range mass stays visible.
            const double norm = rep.empty() ? 0.0 : 1.0 / (static_cast<double>(rep.size()) * spec.width());
            for (std::size_t i = 0; i < spec.bins; ++i)
            {
                h.counts[i] += rep_counts[i];
                h.density[i] += static_cast<double>(rep_counts[i]) * norm;
            }
            h.samples += n;
        }
        if (h.repetitions > 0)
            for (double &d : h.density)
                d /= static_cast<double>(h.repetitions);
        finish(h);
        return h;
    }

    HistogramEstimate estimate_histogram(const std::vector<std::vector<std::array<double, 2>>> &repetitions,
                                         const HistogramSpec &spec1, const HistogramSpec &spec2)
    {
        if (spec1.bins == 0 || spec2.bins == 0 || !(spec1.hi > spec1.lo) || !(spec2.hi > spec2.lo))
            throw DegenerateBins("histogram needs at least one bin of positive width per axis");
        HistogramEstimate h;
        h.edges1 = edges_of(spec1);
        h.edges2 = edges_of(spec2);
        const std::size_t cells = spec1.bins * spec2.bins;
        h.density.assign(cells, 0.0);
        h.counts.assign(cells, 0);
        h.repetitions = repetitions.size();
        const double area = spec1.width() * spec2.width();
        std::vector<std::uint64_t> rep_counts(cells);
        for (const auto &rep : repetitions)
        {
            std::fill(rep_counts.begin(), rep_counts.end(), 0);
            for (const auto &v : rep)
            {
                const long i = bin_of(spec1, v[0]);
                const long j = bin_of(spec2, v[1]);
                if (i < 0 || j < 0)
                {
                    ++h.out_of_range;
                    continue;
                }
                ++rep_counts[static_cast<std::size_t>(i) * spec2.bins + static_cast<std::size_t>(j)];
                ++h.samples;
            }
            const double norm = rep.empty() ? 0.0 : 1.0 / (static_cast<double>(rep.size()) * area);
            for (std::size_t c = 0; c < cells; ++c)
            {
                h.counts[c] += rep_counts[c];
                h.density[c] += static_cast<double>(rep_counts[c]) * norm;
            }
        }
        if (h.repetitions > 0)
            for (double &d : h.density)
                d /= static_cast<double>(h.repetitions);
        finish(h);
        return h;
    }

    double chi_square_critical(std::size_t dof, double p)
    {
        boost::math::chi_squared dist(static_cast<double>(dof));
        return boost::math::quantile(boost::math::complement(dist, p));
    }

    GofReport chi_square_test(const HistogramEstimate &hist, const std::vector<double> &bin_probability, double p, double min_expected)
    {
        if (bin_probability.size() != hist.counts.size())
            throw DegenerateBins("bin probabilities do not match the histogram");
        const double n = static_cast<double>(hist.samples);
        if (!(n > 0.0))
            throw DegenerateBins("histogram holds no samples");

        // Pool adjacent bins in order until each group expects at least min_expected counts.
        // A trailing group below the floor is merged into its predecessor.
        std::vector<std::pair<double, double>> groups; // (observed, expected)
        double obs = 0.0, exp = 0.0;
        double stray = 0.0; // counts in bins of zero probability
        for (std::size_t i = 0; i < hist.counts.size(); ++i)
        {
            const double e = n * bin_probability[i];
            const double o = static_cast<double>(hist.counts[i]);
            if (!(e > 0.0))
            {
                stray += o;
                continue;
            }
            obs += o;
            exp += e;
            if (exp >= min_expected)
            {
                groups.push_back({obs, exp});
                obs = exp = 0.0;
            }
        }
        if (exp > 0.0)
        {
            if (groups.empty())
                groups.push_back({obs, exp});
            else
            {
                groups.back().first += obs;
                groups.back().second += exp;
            }
        }
        if (groups.size() < 2 || groups.front().second < min_expected)
            throw DegenerateBins("pooling could not reach the expected-count floor with two or more groups");

        GofReport r;
        r.p = p;
        r.bins_used = groups.size();
        r.dof = groups.size() - 1;
        for (const auto &[o, e] : groups)
            r.Z += (o - e) * (o - e) / e;
        if (stray > 0.0)
            r.Z = std::numeric_limits<double>::infinity();
        r.z_alpha = chi_square_critical(r.dof, p);
        r.accept = r.Z <= r.z_alpha;

        // MSE between the averaged histogram density and the analytic bin average.
        double se = 0.0;
        const bool two_d = !hist.edges2.empty();
        const std::size_t n2 = two_d ? hist.edges2.size() - 1 : 1;
        for (std::size_t c = 0; c < hist.counts.size(); ++c)
        {
            const std::size_t i = c / n2, j = c % n2;
            const double w = (hist.edges1[i + 1] - hist.edges1[i]) * (two_d ? hist.edges2[j + 1] - hist.edges2[j] : 1.0);
            const double d = hist.density[c] - bin_probability[c] / w;
            se += d * d;
        }
        r.mse = se / static_cast<double>(hist.counts.size());
        return r;
    }

    std::vector<double> doppler_bin_probabilities(const DopplerDensity &density, const std::vector<double> &edges)
    {
        std::vector<double> p;
        p.reserve(edges.size() - 1);
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            p.push_back(density.mass(edges[i], edges[i + 1]));
        return p;
    }

    GofReport chi_square_test(const HistogramEstimate &hist, const DopplerDensity &density, double p, double min_expected)
    {
        if (!hist.edges2.empty())
            throw DegenerateBins("Doppler test expects a 1D histogram");
        return chi_square_test(hist, doppler_bin_probabilities(density, hist.edges1), p, min_expected);
    }

    double mean_square_error(const std::vector<double> &a, const std::vector<double> &b)
    {
        const std::size_t n = std::min(a.size(), b.size());
        if (n == 0)
            throw EmptyInput("mean square error of empty vectors");
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += (a[i] - b[i]) * (a[i] - b[i]);
        return s / static_cast<double>(n);
    }

    std::vector<double> cell_average(const std::vector<double> &x, const std::vector<double> &y, double lo, double width,
                                     std::size_t cells)
    {
        std::vector<double> sum(cells, 0.0), cnt(cells, 0.0);
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double c = (x[i] - lo) / width;
            if (c < 0.0 || c >= static_cast<double>(cells))
                continue;
            const auto k = static_cast<std::size_t>(c);
            sum[k] += y[i];
            cnt[k] += 1.0;
        }
        for (std::size_t k = 0; k < cells; ++k)
            sum[k] = cnt[k] > 0.0 ? sum[k] / cnt[k] : 0.0;
        return sum;
    }
}
