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

#include <array>
#include <numbers>

namespace rss
{
    inline constexpr double pi = std::numbers::pi;
    inline constexpr double speed_of_light = 299792458.0; // m/s

    // Wraps an angle into (-pi, pi]. The only place where wrap-around is handled.
    double wrap_angle(double angle) noexcept;

    // Position [m], speed [m/s] and direction of motion [rad] of one vehicle.
    struct VehicleState
    {
        double x = 0.0;
        double y = 0.0;
        double v = 0.0;
        double gamma = 0.0;
    };

    // Axis-aligned scatterer rectangle {a <= x <= b, c <= y <= d}.
    struct RssRegion
    {
        double a = 0.0;
        double b = 0.0;
        double c = 0.0;
        double d = 0.0;

        double length() const noexcept { return b - a; }
        double width() const noexcept { return d - c; }
        double area() const noexcept { return (b - a) * (d - c); }
        bool contains(double x, double y) const noexcept { return a <= x && x <= b && c <= y && y <= d; }
    };

    // Full scene description as read from a config file. Not validated.
    struct ModelConfig
    {
        VehicleState tx;
        VehicleState rx;
        RssRegion upper;
        RssRegion lower;
        double fc = 5.9e9;     // carrier frequency [Hz]
        double k_factor = 0.0; // Rician K factor (linear)
    };

    // A scene that satisfies every model constraint, with the derived quantities cached.
    // Only validate_config() can produce one; all analytic and simulation code takes this type.
    class ValidatedConfig
    {
    public:
        const ModelConfig &scene() const noexcept { return cfg_; }
        const VehicleState &tx() const noexcept { return cfg_.tx; }
        const VehicleState &rx() const noexcept { return cfg_.rx; }
        const RssRegion &region(int i) const noexcept { return i == 1 ? cfg_.upper : cfg_.lower; }
        double k_factor() const noexcept { return cfg_.k_factor; }

        double wavelength() const noexcept { return wavelength_; }
        double f_tmax() const noexcept { return f_tmax_; }
        double f_rmax() const noexcept { return f_rmax_; }
        double f_dmax() const noexcept { return f_tmax_ + f_rmax_; }
        double road_width() const noexcept { return cfg_.upper.c - cfg_.lower.d; }
        double area() const noexcept { return cfg_.upper.area() + cfg_.lower.area(); }

    private:
        ValidatedConfig() = default;
        friend ValidatedConfig validate_config(const ModelConfig &cfg);

        ModelConfig cfg_;
        double wavelength_ = 0.0;
        double f_tmax_ = 0.0;
        double f_rmax_ = 0.0;
    };

    // Checks the seven placement constraints (strict inequalities) plus positivity of
    // speeds, carrier and K. Throws ConstraintViolation, NonPositiveArea or NonPositiveFrequency.
    ValidatedConfig validate_config(const ModelConfig &cfg);

    // Angle of departure / arrival of the single-bounce path through scatterer (x, y), in (-pi, pi].
    double aod_of_point(const ValidatedConfig &cfg, double x, double y);
    double aoa_of_point(const ValidatedConfig &cfg, double x, double y);

    // Doppler shift [Hz] of the path leaving Tx at alpha and arriving at Rx from beta.
    double doppler_of_angles(const ValidatedConfig &cfg, double alpha, double beta) noexcept;
    double doppler_of_point(const ValidatedConfig &cfg, double x, double y);

    struct LosParameters
    {
        double f_los = 0.0;     // Doppler shift of the direct path [Hz]
        double d_los = 0.0;     // Tx-Rx distance [m]
        double alpha_los = 0.0; // AoD of the direct path [rad]
        double m_los = 0.0;     // slope of the Tx-Rx line
    };
    LosParameters los_parameters(const ValidatedConfig &cfg) noexcept;

    // Critical AoDs/AoAs at the eight region vertices v1..v8:
    // v1=(b1,c1) v2=(b1,d1) v3=(a1,d1) v4=(a1,c1) v5=(a2,d2) v6=(a2,c2) v7=(b2,c2) v8=(b2,d2).
    struct CriticalAngles
    {
        std::array<double, 8> alpha{};
        std::array<double, 8> beta{};

        double alpha_c(int r) const { return alpha.at(static_cast<std::size_t>(r - 1)); }
        double beta_c(int r) const { return beta.at(static_cast<std::size_t>(r - 1)); }
    };
    CriticalAngles critical_angles(const ValidatedConfig &cfg);

    // Position of vertex v_r (r = 1..8) in the numbering above.
    std::array<double, 2> vertex(const ValidatedConfig &cfg, int r);

    // Slope/ratio constants m_1..m_20 that parametrise the piecewise support boundaries.
    struct GeometryConstants
    {
        std::array<double, 20> m{};
        double m_los = 0.0;
        double alpha_los = 0.0;
        double d_los = 0.0;
        double f_los = 0.0;

        double operator()(int q) const { return m.at(static_cast<std::size_t>(q - 1)); }
    };
    GeometryConstants geometry_constants(const ValidatedConfig &cfg);
}
