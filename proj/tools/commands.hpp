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

#include <string>
#include <vector>

namespace rss::cli
{
    inline constexpr int exit_ok = 0;
    inline constexpr int exit_failure = 1;
    inline constexpr int exit_usage = 2;

    // Parses and executes one invocation. args excludes the program name.
    int run(const std::vector<std::string> &args);

    // Scenes used by the figure recipes: fig3_4, fig5_sd, fig5_od, fig6, fig7, fig8, fig9.
    ModelConfig builtin_config(const std::string &name);
    std::vector<std::string> builtin_config_names();
}
