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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rss
{
    // A Doppler spectrum sampled on nu_m = nu_min + m * delta_nu, m = 0..M-1.
    struct MeasuredSpectrum
    {
        double nu_min = 0.0;
        double nu_max = 0.0;
        double delta_nu = 0.0;
        std::size_t M = 0;
        std::vector<double> values; // 1/Hz
        std::string label;
        double B_1 = 0.0; // target mean Doppler shift [Hz]
        double B_2 = 0.0; // target RMS Doppler spread [Hz]

        double nu(std::size_t m) const { return nu_min + delta_nu * static_cast<double>(m); }
        std::vector<double> grid() const;
        double area() const; // sum(values) * delta_nu
    };

    // Builds a spectrum from (nu, value) pairs. The grid must be strictly increasing and
    // uniform to 1e-6 relative. Values are renormalized to unit area and the targets are the
    // discrete moments of the normalized samples.
    MeasuredSpectrum make_measured(const std::vector<double> &nu, std::vector<double> values, std::string label = {});

    // CSV with header `nu_hz,value`. In per-tap mode every column after the first is one delay
    // tap and the taps are summed before normalizing.
    MeasuredSpectrum ingest_spectrum(std::istream &in, bool per_tap = false, std::string label = {});
    MeasuredSpectrum ingest_spectrum(const std::string &path, bool per_tap = false, std::string label = {});

    void write_spectrum(std::ostream &out, const MeasuredSpectrum &s);

    // Parameter vector (a1, b1, c1, d1, a2, b2, c2, d2, K).
    using FitParams = std::array<double, 9>;
    inline constexpr std::size_t fit_dim = 9;
    extern const std::array<const char *, 9> fit_param_names;

    FitParams params_of(const ModelConfig &cfg);
    ModelConfig config_of(const ModelConfig &scene, const FitParams &x);

    // Model spectrum sampled the way the objective compares it: continuous part with power
    // weights, LoS impulse spread over the bin that contains it. Targets are the exact
    // statistics of the config, and no renormalization is applied.
    MeasuredSpectrum synthesize_spectrum(const ValidatedConfig &cfg, double nu_min, double delta_nu, std::size_t M,
                                         std::string label = {});

    struct FitProblem
    {
        ModelConfig scene; // vehicles and carrier; regions and K are ignored
        double eps1 = 0.001;
        double eps2 = 0.001;
        double road_width_max = 0.0;  // c1 - d2 <= road_width_max
        double min_region_width = 3.0;
        double margin = 1e-3;         // keeps the strict placement inequalities strict
        FitParams lower{};
        FitParams upper{};

        int restarts = 8;
        int max_evaluations = 1500;   // direct-search budget per restart
        int max_polish_iterations = 40;
        double jitter = 0.10;         // relative jitter of geometry for restarts > 0
        double k_jitter = 0.3;
        double penalty = 1e-6;        // exact-penalty weight per Hz on the first restart
        double penalty_growth = 4.0;
        std::uint64_t seed = 1;
        unsigned threads = 0;
    };

    // Box bounds derived from the scene and an initial guess; the linear constraints are
    // checked for consistency. Throws Infeasible when the road-width cap cannot hold the
    // vehicles.
    FitProblem make_fit_problem(const ModelConfig &scene, const FitParams &init, double road_width_max,
                                double eps1 = 0.001, double eps2 = 0.001);

    // Nearest point (coordinate-wise repair) satisfying the box and the linear constraints.
    FitParams project(const FitProblem &problem, FitParams x);

    // Sum of violations of box and linear constraints (zero when feasible).
    double linear_violation(const FitProblem &problem, const FitParams &x);

    struct ObjectiveValue
    {
        double value = 0.0; // LSE, or the penalty for unusable x
        double B_1 = 0.0;
        double B_2 = 0.0;
        bool valid = false;
        bool quadrature_failure = false;
    };

    // Sum of squared differences between the measured samples and the model spectrum.
    // Parameter vectors that do not give a valid scene return 1 + (constraint violation).
    ObjectiveValue objective(const FitParams &x, const MeasuredSpectrum &measured, const ModelConfig &scene);

    struct RestartRecord
    {
        int index = 0;
        FitParams start{};
        FitParams x{};
        double lse = 0.0;
        double mse = 0.0;
        double mdse = 0.0; // |B~1 - B1(x)|
        double rdse = 0.0; // |B~2 - B2(x)|
        bool feasible = false;
        bool converged = false;
        int iterations = 0;
        int evaluations = 0;
        std::string status;
    };

    struct FitReport
    {
        FitParams x{};
        ModelConfig config;
        double lse = 0.0;
        double mse = 0.0;
        double mdse = 0.0;
        double rdse = 0.0;
        int iterations = 0;
        int best_restart = -1;
        bool feasible = false;
        bool box_ok = false;
        bool linear_ok = false;
        bool stats_ok = false;
        std::vector<RestartRecord> restarts;
    };

    // Runs every restart (concurrently) and returns the full table without selecting.
    std::vector<RestartRecord> run_restarts(const FitProblem &problem, const MeasuredSpectrum &measured,
                                            const FitParams &init);

    // Best feasible restart (lowest LSE, ties by index), errors recomputed from x*.
    // Throws Infeasible when no restart meets the tolerances, MaxIterations when none
    // converged either.
    FitReport select_best(const FitProblem &problem, const MeasuredSpectrum &measured,
                          std::vector<RestartRecord> restarts);

    FitReport fit(const FitProblem &problem, const MeasuredSpectrum &measured, const FitParams &init);

    void write_restart_table(std::ostream &out, const std::vector<RestartRecord> &restarts);
}
