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
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rss
{
    // Position of the LoS direction relative to the critical AoDs of the upper region.
    enum class SwitchCase
    {
        Base,    // alpha_C8 < alpha_LoS < alpha_C1
        Case15,  // alpha_C1 < alpha_LoS < alpha_C2
        Case1256 // alpha_C2 < alpha_LoS < pi/2
    };
    std::string to_string(SwitchCase c);

    // Rectangle edge that bounds the AoA of a piece. Horizontal edges use the
    // atan2(t, m t + m') form, vertical edges the arctan(m t + m') form.
    enum class BoundEdge
    {
        Right1,  // x = b1   (m1, m2)
        Bottom1, // y = c1   (m3, m4)
        Top1,    // y = d1   (m5, m6)
        Left1,   // x = a1   (m7, m8)
        Top2,    // y = d2   (m9, m10)
        Left2,   // x = a2   (m11, m12)
        Bottom2, // y = c2   (m13, m14)
        Right2   // x = b2   (m15, m16)
    };

    // AoA of the point where the Tx ray at angle alpha meets the line carrying edge e.
    double edge_aoa(const GeometryConstants &g, BoundEdge e, double alpha);

    struct AnglePiece
    {
        int index = 0;  // 1..8
        int region = 1; // 1 upper, 2 lower
        double alpha_lo = 0.0;
        double alpha_hi = 0.0;
        BoundEdge lower_edge = BoundEdge::Right1; // bound listed as the lower one in the base regime
        BoundEdge upper_edge = BoundEdge::Bottom1;
        bool regime_swap = false; // whole-piece swap flag of the regime table (reporting only)
    };

    // Sample space of (AoD, AoA) split into eight AoD pieces. The bound order inside a piece
    // is decided per alpha from the side of the LoS line the ray lies on, which reproduces
    // the regime table and stays correct when alpha_LoS falls inside a piece.
    class AngleSupport
    {
    public:
        std::array<AnglePiece, 8> pieces{};
        SwitchCase switch_case = SwitchCase::Base;
        GeometryConstants constants;
        CriticalAngles critical;

        const AnglePiece &piece(int k) const { return pieces.at(static_cast<std::size_t>(k - 1)); }

        // Ordered AoA bounds of piece k at AoD alpha: {beta_lo, beta_hi}.
        std::pair<double, double> beta_bounds(int k, double alpha) const;

        // Piece index (1..8) containing (alpha, beta), or 0 when outside the support.
        int piece_of(double alpha, double beta) const;
        bool contains(double alpha, double beta) const { return piece_of(alpha, beta) != 0; }
    };

    // Throws UnsupportedRegime when alpha_LoS is outside (alpha_C8, pi/2).
    AngleSupport build_angle_support(const ValidatedConfig &cfg);

    // Point (x, y) seen from Tx at alpha and from Rx at beta. Throws ParallelRays.
    std::array<double, 2> inverse_point(const ValidatedConfig &cfg, double alpha, double beta);

    // AoD in region i whose Doppler shift together with AoA beta equals nu.
    // Throws OutOfBand when |z| > 1, UnsupportedRegime when gamma_T does not separate the regions.
    double inverse_doppler(const ValidatedConfig &cfg, double nu, double beta, int region);

    // Jacobian magnitude of the (x, y) -> (alpha, beta) map, without the support indicator.
    double aoa_aod_jacobian(const ValidatedConfig &cfg, double alpha, double beta) noexcept;

    // Closed-form joint AoD-AoA density [1/rad^2]; zero outside the support.
    double joint_aoa_aod_pdf(const ValidatedConfig &cfg, const AngleSupport &support, double alpha, double beta);
    double joint_aoa_aod_pdf(const ValidatedConfig &cfg, double alpha, double beta);

    // Convex polygon given by its vertices in counter-clockwise order.
    using Polygon = std::vector<std::array<double, 2>>;

    struct DopplerPiece
    {
        int index = 0;
        int region = 1;
        double beta_lo = 0.0;
        double beta_hi = 0.0;
        bool empty = false; // zero-measure piece (flagged in output metadata)
        Polygon polygon;    // scatterer set of the piece: region clipped to the AoD wedge
    };

    // Doppler-AoA sample space. For each piece and AoA the admissible Doppler band is the
    // image of the Rx ray segment inside the piece polygon; F_D is monotone along it.
    class DopplerSupport
    {
    public:
        DopplerSupport(const ValidatedConfig &cfg, const AngleSupport &angles);

        const ValidatedConfig &config() const noexcept { return cfg_; }
        const AngleSupport &angles() const noexcept { return angles_; }
        SwitchCase switch_case() const noexcept { return angles_.switch_case; }
        const std::array<DopplerPiece, 8> &pieces() const noexcept { return pieces_; }
        const DopplerPiece &piece(int k) const { return pieces_.at(static_cast<std::size_t>(k - 1)); }

        // {f_min, f_max} of piece k at AoA beta; empty optional-like flag via ok.
        struct Band
        {
            bool ok = false;
            double f_min = 0.0;
            double f_max = 0.0;
        };
        Band band(int k, double beta) const noexcept;

        // Whether (nu, beta) lies in piece k.
        bool contains(int k, double nu, double beta) const noexcept;

        // Number of non-empty pieces.
        int active_pieces() const noexcept;

    private:
        ValidatedConfig cfg_;
        AngleSupport angles_;
        std::array<DopplerPiece, 8> pieces_{};
    };

    // Throws UnsupportedRegime for an unsupported LoS regime or gamma_T outside {0, pi},
    // DegenerateGeometry when f_Tmax is zero.
    DopplerSupport build_doppler_support(const ValidatedConfig &cfg);

    struct DisjointInterval
    {
        double beta_lo = 0.0;
        double beta_hi = 0.0;
        std::vector<int> pieces; // indices of the bands active on this interval
    };

    struct DisjointSupport
    {
        std::vector<DisjointInterval> intervals;
        double measure() const noexcept;
    };

    // Splits the piece AoA ranges into disjoint intervals. Extra breakpoints (for example
    // AoAs where the integrand is singular) are inserted when they fall inside an interval.
    DisjointSupport disjointify(const DopplerSupport &support, const std::vector<double> &extra_breaks = {});

    // Union measure of the AoA ranges of the non-empty pieces.
    double support_measure(const DopplerSupport &support);

    // Joint Doppler-AoA density [1/(Hz rad)]; zero outside the support.
    double joint_doppler_aoa_pdf(const DopplerSupport &support, double nu, double beta);
    double joint_doppler_aoa_pdf(const ValidatedConfig &cfg, double nu, double beta);

    struct DopplerBounds
    {
        double nu_min = 0.0;
        double nu_max = 0.0;
    };

    // Exact extremes of F_D over both rectangles (edge search).
    DopplerBounds doppler_bounds(const ValidatedConfig &cfg);

    // Extremes of F_D over the critical vertices {1,8} and {4,5} only.
    DopplerBounds doppler_bounds_vertex_rule(const ValidatedConfig &cfg);

    struct DpdfOptions
    {
        int table_size = 2048;          // tabulated AoA samples per piece
        double abs_tol = 1e-8;          // quadrature tolerance per frequency [1/Hz]
        double inversion_tol_hz = 1e-10; // bound-inversion refinement tolerance
    };

    // Marginal Doppler density. Building it tabulates and splits the bound curves once;
    // evaluation is then a pure function of nu and safe to call concurrently.
    class DopplerDensity
    {
    public:
        explicit DopplerDensity(const ValidatedConfig &cfg, DpdfOptions opt = {});
        ~DopplerDensity();
        DopplerDensity(DopplerDensity &&) noexcept;
        DopplerDensity &operator=(DopplerDensity &&) noexcept;

        const DopplerSupport &support() const noexcept;
        const DisjointSupport &disjoint() const noexcept;
        DopplerBounds bounds() const noexcept;

        // Density at nu [1/Hz]. Throws QuadratureFailure when the tolerance is not met.
        double operator()(double nu) const;

        // AoA intervals of piece k on which nu lies inside the band.
        std::vector<std::pair<double, double>> beta_intervals(int k, double nu) const;

        // Integral of nu^p f(nu) over the support for p = 0, 1, 2.
        std::array<double, 3> moments() const;

        // Probability mass on [lo, hi], from the radial area of each Rx ray segment.
        double mass(double lo, double hi) const;

        // Frequencies where the set of active AoA intervals changes (bound extrema and corners).
        std::vector<double> critical_frequencies() const;

        // Density on a grid, evaluated in parallel. threads = 0 selects all cores.
        std::vector<double> evaluate(const std::vector<double> &nu, unsigned threads = 0) const;

    private:
        struct Impl;
        std::unique_ptr<Impl> impl_;
    };

    double dpdf(const ValidatedConfig &cfg, double nu);

    // Uniform grid of n points on [lo, hi].
    std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

    // Default DPDF grid: n points spanning [nu_min - 1 Hz, nu_max + 1 Hz].
    std::vector<double> default_dpdf_grid(const ValidatedConfig &cfg, std::size_t n = 4096);

    // Density sampled on a rectangular grid.
    struct DensityGrid
    {
        std::vector<double> axis1;
        std::vector<double> axis2;
        std::vector<double> values; // row-major, values[i * axis2.size() + j]
        double total_mass = 0.0;    // trapezoidal integral over the grid

        double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }
    };

    DensityGrid aoa_aod_grid(const ValidatedConfig &cfg, std::size_t n_alpha, std::size_t n_beta, unsigned threads = 0);
    DensityGrid doppler_aoa_grid(const ValidatedConfig &cfg, std::size_t n_nu, std::size_t n_beta, unsigned threads = 0);
}
