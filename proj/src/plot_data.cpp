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

#include "rss/plot_data.hpp"

#include "rss/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rss
{
    const char *const tool_version = "1.0.0";

    double to_db(double y) noexcept
    {
        if (!(y > 0.0))
            return db_floor;
        return std::max(10.0 * std::log10(y), db_floor);
    }

    void emit_plot_data(const std::vector<PlotCurve> &curves, std::ostream &out, bool with_db)
    {
        out << (with_db ? "series,x,y,y_db\n" : "series,x,y\n") << std::setprecision(12);
        for (const auto &c : curves)
        {
            const std::size_t n = std::min(c.x.size(), c.y.size());
            for (std::size_t i = 0; i < n; ++i)
            {
                out << c.series << ',' << c.x[i] << ',' << c.y[i];
                if (with_db)
                    out << ',' << to_db(c.y[i]);
                out << '\n';
            }
        }
    }

    void emit_plot_data(const std::vector<PlotCurve> &curves, const std::string &path, bool with_db)
    {
        std::ofstream out(path);
        if (!out)
            throw ConfigError("cannot write " + path);
        emit_plot_data(curves, out, with_db);
    }

    std::string utc_timestamp()
    {
        const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::ostringstream s;
        s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        return s.str();
    }

    std::string RunManifest::to_json() const
    {
        nlohmann::json j;
        j["command"] = command;
        j["argv"] = argv;
        j["config"] = config;
        j["seeds"] = seeds;
        j["grids"] = grids;
        j["outputs"] = outputs;
        j["version"] = version;
        j["timestamp"] = timestamp;
        return j.dump(2);
    }

    RunManifest RunManifest::from_json(const std::string &text)
    {
        try
        {
            const auto j = nlohmann::json::parse(text);
            RunManifest m;
            m.command = j.at("command").get<std::string>();
            m.argv = j.at("argv").get<std::vector<std::string>>();
            m.config = j.value("config", std::string{});
            m.seeds = j.value("seeds", std::map<std::string, std::uint64_t>{});
            m.grids = j.value("grids", std::map<std::string, std::string>{});
            m.outputs = j.value("outputs", std::vector<std::string>{});
            m.version = j.value("version", std::string{});
            m.timestamp = j.value("timestamp", std::string{});
            return m;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("malformed manifest: ") + e.what());
        }
    }

    void write_manifest(const RunManifest &m, const std::string &path)
    {
        std::ofstream out(path);
        if (!out)
            throw ConfigError("cannot write " + path);
        out << m.to_json() << '\n';
    }

    RunManifest read_manifest(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open manifest " + path);
        std::stringstream s;
        s << in.rdbuf();
        return RunManifest::from_json(s.str());
    }
}
