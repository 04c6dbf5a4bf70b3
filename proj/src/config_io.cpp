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

#include "rss/config_io.hpp"

#include "rss/error.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace rss
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        double to_number(const std::string &text, const std::string &where)
        {
            if (text == "pi")
                return pi;
            if (text == "-pi")
                return -pi;
            const char *b = text.c_str();
            char *e = nullptr;
            const double v = std::strtod(b, &e);
            if (e == b || *e != '\0')
                throw ConfigError(where + ": not a number: '" + text + "'");
            return v;
        }

        const char *const required[] = {"x_t", "y_t", "v_t", "x_r", "y_r", "v_r", "a1", "b1",
                                        "c1",  "d1",  "a2",  "b2",  "c2",  "d2"};
        const char *const optional[] = {"gamma_t", "gamma_r", "fc", "k_factor"};
    }

    ModelConfig parse_config(std::istream &in, const std::string &source)
    {
        std::map<std::string, double> values;
        double speed_scale = 1.0;
        bool unit_seen = false;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const std::string where = source + ":" + std::to_string(lineno);
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(where + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));

            if (key == "speed_unit")
            {
                if (unit_seen)
                    throw ConfigError(where + ": speed_unit given twice");
                unit_seen = true;
                if (val == "kmh" || val == "km/h")
                    speed_scale = 1.0 / 3.6;
                else if (val == "ms" || val == "m/s")
                    speed_scale = 1.0;
                else
                    throw ConfigError(where + ": speed_unit must be m/s or km/h");
                continue;
            }
            bool known = false;
            for (const char *k : required)
                known = known || key == k;
            for (const char *k : optional)
                known = known || key == k;
            if (!known)
                throw ConfigError(where + ": unknown key '" + key + "'");
            if (!values.emplace(key, to_number(val, where)).second)
                throw ConfigError(where + ": key '" + key + "' given twice");
        }
        for (const char *k : required)
            if (!values.count(k))
                throw ConfigError(source + ": missing key '" + k + "'");

        auto get = [&](const char *k, double dflt) {
            const auto it = values.find(k);
            return it == values.end() ? dflt : it->second;
        };
        ModelConfig c;
        c.tx = {get("x_t", 0), get("y_t", 0), get("v_t", 0) * speed_scale, get("gamma_t", 0)};
        c.rx = {get("x_r", 0), get("y_r", 0), get("v_r", 0) * speed_scale, get("gamma_r", 0)};
        c.upper = {get("a1", 0), get("b1", 0), get("c1", 0), get("d1", 0)};
        c.lower = {get("a2", 0), get("b2", 0), get("c2", 0), get("d2", 0)};
        c.fc = get("fc", c.fc);
        c.k_factor = get("k_factor", 0.0);
        return c;
    }

    ModelConfig read_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config " + path);
        return parse_config(in, path);
    }

    void write_config(std::ostream &out, const ModelConfig &c)
    {
        out << std::setprecision(17);
        out << "x_t = " << c.tx.x << "\ny_t = " << c.tx.y << "\nv_t = " << c.tx.v << "\ngamma_t = " << c.tx.gamma << '\n';
        out << "x_r = " << c.rx.x << "\ny_r = " << c.rx.y << "\nv_r = " << c.rx.v << "\ngamma_r = " << c.rx.gamma << '\n';
        out << "a1 = " << c.upper.a << "\nb1 = " << c.upper.b << "\nc1 = " << c.upper.c << "\nd1 = " << c.upper.d << '\n';
        out << "a2 = " << c.lower.a << "\nb2 = " << c.lower.b << "\nc2 = " << c.lower.c << "\nd2 = " << c.lower.d << '\n';
        out << "fc = " << c.fc << "\nk_factor = " << c.k_factor << '\n';
    }

    std::string format_config(const ModelConfig &cfg)
    {
        std::ostringstream s;
        write_config(s, cfg);
        return s.str();
    }

    void write_csv(std::ostream &out, const std::vector<std::string> &header,
                   const std::vector<const std::vector<double> *> &columns)
    {
        if (header.size() != columns.size())
            throw ConfigError("csv header and column count differ");
        const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
        for (const auto *c : columns)
            if (c->size() != rows)
                throw ConfigError("csv columns differ in length");
        for (std::size_t j = 0; j < header.size(); ++j)
            out << (j ? "," : "") << header[j];
        out << '\n' << std::setprecision(12);
        for (std::size_t i = 0; i < rows; ++i)
        {
            for (std::size_t j = 0; j < columns.size(); ++j)
                out << (j ? "," : "") << (*columns[j])[i];
            out << '\n';
        }
    }

    void write_csv_file(const std::string &path, const std::vector<std::string> &header,
                        const std::vector<const std::vector<double> *> &columns)
    {
        std::ofstream out(path);
        if (!out)
            throw ConfigError("cannot write " + path);
        write_csv(out, header, columns);
    }
}
