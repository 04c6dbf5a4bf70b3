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

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace rss::detail
{
    struct QuadResult
    {
        double value = 0.0;
        double error = 0.0;
    };

    // Adaptive Gauss-Kronrod (10/21) with an absolute tolerance split evenly between halves.
    // The rule is applied to the map onto [-1, 1] so the error estimate is in the caller's units.
    template <typename F>
    QuadResult adaptive_gk(const F &f, double a, double b, double abs_tol, int depth = 18)
    {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double err = 0.0;
        const double est = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
            [&](double x) { return f(mid + half * x) * half; }, -1.0, 1.0, 0, 0.0, &err);
        if (err <= abs_tol || depth <= 0 || !(half > 1e-15 * (std::abs(mid) + 1.0)))
            return {est, err};
        const QuadResult l = adaptive_gk(f, a, mid, 0.5 * abs_tol, depth - 1);
        const QuadResult r = adaptive_gk(f, mid, b, 0.5 * abs_tol, depth - 1);
        return {l.value + r.value, l.error + r.error};
    }

    // Integral over [a, b] with the square-root substitution x = a + t^2 on the left half and
    // x = b - t^2 on the right half, which removes inverse-square-root endpoint behaviour.
    template <typename F>
    QuadResult endpoint_substituted(const F &f, double a, double b, double abs_tol, int depth = 18)
    {
        if (!(b > a))
            return {};
        const double m = 0.5 * (a + b);
        const double L = std::sqrt(m - a);
        const QuadResult l = adaptive_gk([&](double t) { return 2.0 * t * f(a + t * t); }, 0.0, L, 0.5 * abs_tol, depth);
        const QuadResult r = adaptive_gk([&](double t) { return 2.0 * t * f(b - t * t); }, 0.0, L, 0.5 * abs_tol, depth);
        return {l.value + r.value, l.error + r.error};
    }
}
