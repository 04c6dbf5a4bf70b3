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

#include "rss/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rss
{
    // Plain `key = value` files, one entry per line, `#` starts a comment.
    //
    //   x_t y_t v_t gamma_t      transmitter position [m], speed, heading [rad]
    //   x_r y_r v_r gamma_r      receiver
    //   a1 b1 c1 d1 a2 b2 c2 d2  scatterer rectangles [m]
    //   fc                       carrier [Hz], default 5.9e9
    //   k_factor                 linear Rician K, default 0
    //   speed_unit               m/s (default) or km/h
    //
    // Headings accept the literals pi and -pi. Unknown or repeated keys are errors.
    ModelConfig parse_config(std::istream &in, const std::string &source = "<stream>");
    ModelConfig read_config(const std::string &path);

    // Writes every key in m/s with round-trip precision.
    void write_config(std::ostream &out, const ModelConfig &cfg);
    std::string format_config(const ModelConfig &cfg);

    // Column-oriented CSV writer; all columns must have the same length.
    void write_csv(std::ostream &out, const std::vector<std::string> &header,
                   const std::vector<const std::vector<double> *> &columns);
    void write_csv_file(const std::string &path, const std::vector<std::string> &header,
                        const std::vector<const std::vector<double> *> &columns);
}
