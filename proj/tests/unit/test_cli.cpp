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

#include "commands.hpp"
#include "scenes.hpp"

#include "rss/config_io.hpp"
#include "rss/fitting.hpp"
#include "rss/plot_data.hpp"
#include "rss/spectrum.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace rss;
using Catch::Approx;
namespace fs = std::filesystem;

namespace
{
    struct Captured
    {
        int code = -1;
        std::string out;
        std::string err;
    };

    Captured invoke(const std::vector<std::string> &args)
    {
        std::ostringstream o, e;
        auto *old_out = std::cout.rdbuf(o.rdbuf());
        auto *old_err = std::cerr.rdbuf(e.rdbuf());
        Captured c;
        c.code = cli::run(args);
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        c.out = o.str();
        c.err = e.str();
        return c;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path scratch(const std::string &name)
    {
        const fs::path d = fs::current_path() / "cli_scratch" / name;
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }
}

TEST_CASE("exit codes separate usage errors from runtime errors", "[cli]")
{
    CHECK(invoke({"--version"}).code == cli::exit_ok);
    CHECK(invoke({"--help"}).code == cli::exit_ok);
    CHECK(invoke({}).code == cli::exit_usage);
    CHECK(invoke({"frobnicate"}).code == cli::exit_usage);
    CHECK(invoke({"stats"}).code == cli::exit_usage);
    CHECK(invoke({"sweep", "--config-template", "builtin:fig6", "--param", "speed", "--values", "1", "--out", "x"}).code ==
          cli::exit_usage);

    const Captured missing = invoke({"stats", "--config", "/nonexistent/scene.cfg"});
    CHECK(missing.code == cli::exit_failure);
    CHECK(missing.err.find("cannot open config") != std::string::npos);

    const fs::path d = scratch("invalid");
    ModelConfig bad = testing::highway_sd();
    bad.upper.c = -30.0;
    std::ofstream(d / "bad.cfg") << format_config(bad);
    const Captured invalid = invoke({"stats", "--config", (d / "bad.cfg").string()});
    CHECK(invalid.code == cli::exit_failure);
    CHECK(invalid.err.find("constraint") != std::string::npos);
}

TEST_CASE("stats prints one CSV row matching the library", "[cli]")
{
    const Captured c = invoke({"stats", "--config", "builtin:fig7"});
    REQUIRE(c.code == cli::exit_ok);
    std::istringstream in(c.out);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "nu_min,nu_max,B_d,B_1,B_2");
    double v[5];
    char comma;
    std::istringstream r(row);
    r >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3] >> comma >> v[4];
    const DopplerStats s = doppler_stats(validate_config(cli::builtin_config("fig7")));
    CHECK(v[2] == Approx(s.B_d).epsilon(1e-8));
    CHECK(v[3] == Approx(s.B_1).epsilon(1e-8).margin(1e-8));
    CHECK(v[4] == Approx(s.B_2).epsilon(1e-8));
}

TEST_CASE("dpsd output carries the LoS header line", "[cli]")
{
    const fs::path d = scratch("dpsd");
    const fs::path out = d / "s.csv";
    REQUIRE(invoke({"dpsd", "--config", "builtin:fig8", "--grid", "128", "--convention", "power", "--out", out.string()})
                .code == cli::exit_ok);
    std::ifstream in(out);
    std::string l1, l2, l3;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    CHECK(l1 == "# manifest=s.csv.manifest.json");
    CHECK(l2.rfind("# los_impulse_hz=", 0) == 0);
    CHECK(l2.find(" weight=0.60552") != std::string::npos);
    CHECK(l3 == "nu_hz,density");
    CHECK(fs::exists(d / "s.csv.manifest.json"));
    CHECK(invoke({"dpsd", "--config", "builtin:fig8", "--convention", "linear", "--out", out.string()}).code ==
          cli::exit_usage);
}

TEST_CASE("dpdf and joint grids are written with their headers", "[cli]")
{
    const fs::path d = scratch("grids");
    REQUIRE(invoke({"dpdf", "--config", "builtin:fig5_od", "--grid", "64", "--out", (d / "p.csv").string()}).code == 0);
    REQUIRE(invoke({"pdf-aoa", "--config", "builtin:fig3_4", "--n1", "10", "--n2", "12", "--out", (d / "a.csv").string()})
                .code == 0);
    REQUIRE(invoke({"pdf-doppler-aoa", "--config", "builtin:fig3_4", "--n1", "10", "--n2", "12", "--out",
                    (d / "b.csv").string()})
                .code == 0);
    CHECK(slurp(d / "p.csv").find("\nnu_hz,density\n") != std::string::npos);
    const std::string a = slurp(d / "a.csv");
    CHECK(a.find("\naxis1,axis2,value\n") != std::string::npos);
    CHECK(std::count(a.begin(), a.end(), '\n') == 3 + 120);
}

TEST_CASE("fig9 plot data clamps to the dB floor", "[cli]")
{
    const fs::path d = scratch("fig9");
    REQUIRE(invoke({"repro", "fig9", "--out-dir", d.string()}).code == cli::exit_ok);
    bool found_floor = false;
    for (const auto &e : fs::directory_iterator(d))
    {
        if (e.path().extension() != ".csv")
            continue;
        std::ifstream in(e.path());
        std::string line;
        while (std::getline(in, line))
        {
            if (line.rfind("series,", 0) == 0 || line[0] == '#')
                continue;
            const auto pos = line.find_last_of(',');
            if (line.find("db") != std::string::npos)
                continue;
            const double v = std::atof(line.c_str() + pos + 1);
            if (e.path().filename().string().find("plot") != std::string::npos)
            {
                CHECK(v >= db_floor);
                found_floor = found_floor || v == db_floor;
            }
        }
    }
    CHECK(found_floor);
}

TEST_CASE("rerun reproduces outputs byte for byte", "[cli]")
{
    const fs::path d = scratch("rerun");
    const fs::path prefix = d / "sim";
    REQUIRE(invoke({"--threads", "2", "simulate", "--config", "builtin:fig7", "--n", "50", "--seed", "9", "--duration",
                    "0.25", "--reps", "2", "--hist-n", "2000", "--hist-reps", "2", "--out-prefix", prefix.string()})
                .code == cli::exit_ok);
    std::vector<fs::path> outputs;
    for (const auto &e : fs::directory_iterator(d))
        if (e.path().extension() == ".csv")
            outputs.push_back(e.path());
    REQUIRE(outputs.size() >= 4);
    std::vector<std::string> before;
    for (const auto &p : outputs)
        before.push_back(slurp(p));

    const fs::path manifest = d / "sim_manifest.json";
    REQUIRE(fs::exists(manifest));
    fs::copy_file(manifest, d / "saved_manifest.json");
    for (const auto &p : outputs)
        fs::remove(p);
    REQUIRE(invoke({"rerun", (d / "saved_manifest.json").string()}).code == cli::exit_ok);
    for (std::size_t i = 0; i < outputs.size(); ++i)
        CHECK(slurp(outputs[i]) == before[i]);

    // a fixed seed gives the same gain series regardless of thread count
    const fs::path d2 = scratch("rerun1");
    REQUIRE(invoke({"--threads", "1", "simulate", "--config", "builtin:fig7", "--n", "50", "--seed", "9", "--duration",
                    "0.25", "--reps", "2", "--hist-n", "2000", "--hist-reps", "2", "--out-prefix", (d2 / "sim").string()})
                .code == cli::exit_ok);
    CHECK(slurp(d2 / "sim_gain.csv") == slurp(d / "sim_gain.csv"));
}

TEST_CASE("fit writes a restart table and the fitted scene", "[cli]")
{
    const fs::path d = scratch("fit");
    const ModelConfig truth = cli::builtin_config("fig7");
    const MeasuredSpectrum s = synthesize_spectrum(validate_config(truth), -600.0, 10.0, 121);
    {
        std::ofstream f(d / "measured.csv");
        write_spectrum(f, s);
        std::ofstream(d / "scene.cfg") << format_config(truth);
    }
    const Captured c = invoke({"fit", "--config-scene", (d / "scene.cfg").string(), "--measured",
                               (d / "measured.csv").string(), "--eps1", "0.01", "--eps2", "0.01", "--road-width-max",
                               "40", "--restarts", "1", "--max-evals", "200", "--out", (d / "report.csv").string()});
    CHECK(c.code == cli::exit_ok);
    const std::string table = slurp(d / "report.csv");
    CHECK(table.find("restart,a1,b1,c1,d1,a2,b2,c2,d2,K,lse,mse,mdse,rdse,feasible") != std::string::npos);
    CHECK(fs::exists(d / "report.csv.fitted.cfg"));
    CHECK(invoke({"fit", "--config-scene", (d / "scene.cfg").string(), "--measured", (d / "measured.csv").string(),
                  "--out", (d / "r.csv").string()})
              .code == cli::exit_usage);
}

TEST_CASE("builtin scenes are valid", "[cli]")
{
    for (const auto &name : cli::builtin_config_names())
        CHECK_NOTHROW(validate_config(cli::builtin_config(name)));
    CHECK_THROWS(cli::builtin_config("fig42"));
}

TEST_CASE("shipped scene files match the builtin scenes", "[cli]")
{
    for (const auto &name : cli::builtin_config_names())
    {
        INFO(name);
        const ModelConfig f = read_config(std::string(RSS_CONFIG_DIR) + "/" + name + ".cfg");
        const ModelConfig b = cli::builtin_config(name);
        const FitParams pf = params_of(f), pb = params_of(b);
        for (std::size_t j = 0; j < fit_dim; ++j)
            CHECK(pf[j] == Approx(pb[j]).margin(1e-3));
        CHECK(f.tx.x == b.tx.x);
        CHECK(f.rx.y == b.rx.y);
        CHECK(f.tx.v == Approx(b.tx.v).epsilon(1e-12));
        CHECK(f.rx.v == Approx(b.rx.v).epsilon(1e-12));
        CHECK(f.rx.gamma == b.rx.gamma);
        CHECK(f.fc == b.fc);
    }
}
