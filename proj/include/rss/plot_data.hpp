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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rss
{
    struct PlotCurve
    {
        std::string series;
        std::vector<double> x;
        std::vector<double> y;
    };

    inline constexpr double db_floor = -80.0;

    // 10 log10(y), clamped below at db_floor (zeros and negatives map to the floor).
    double to_db(double y) noexcept;

    // Long format `series,x,y[,y_db]`, curves in the order given.
    void emit_plot_data(const std::vector<PlotCurve> &curves, std::ostream &out, bool with_db = false);
    void emit_plot_data(const std::vector<PlotCurve> &curves, const std::string &path, bool with_db = false);

    extern const char *const tool_version;

    struct RunManifest
    {
        std::string command;
        std::vector<std::string> argv; // full invocation, replayed by `rss rerun`
        std::string config;            // resolved config text (empty when not applicable)
        std::map<std::string, std::uint64_t> seeds;
        std::map<std::string, std::string> grids;
        std::vector<std::string> outputs;
        std::string version = tool_version;
        std::string timestamp; // UTC, ISO 8601

        std::string to_json() const;
        static RunManifest from_json(const std::string &text);
    };

    std::string utc_timestamp();
    void write_manifest(const RunManifest &m, const std::string &path);
    RunManifest read_manifest(const std::string &path);
}
