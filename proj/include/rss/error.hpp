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

#include <stdexcept>
#include <string>

namespace rss
{
    // Base of every error raised by the library. The CLI maps these to exit code 1.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

#define RSS_DEFINE_ERROR(Name)            \
    class Name : public Error             \
    {                                     \
    public:                               \
        using Error::Error;               \
    };

    // geometry
    RSS_DEFINE_ERROR(ConstraintViolation)
    RSS_DEFINE_ERROR(NonPositiveArea)
    RSS_DEFINE_ERROR(NonPositiveFrequency)
    RSS_DEFINE_ERROR(CoincidentPoint)
    RSS_DEFINE_ERROR(DegenerateGeometry)
    RSS_DEFINE_ERROR(ConfigError)

    // analytic densities
    RSS_DEFINE_ERROR(ParallelRays)
    RSS_DEFINE_ERROR(UnsupportedRegime)
    RSS_DEFINE_ERROR(OutOfBand)

    // simulation and estimation
    RSS_DEFINE_ERROR(InsufficientLength)
    RSS_DEFINE_ERROR(DegenerateBins)

    // fitting
    RSS_DEFINE_ERROR(NonUniformGrid)
    RSS_DEFINE_ERROR(EmptyInput)
    RSS_DEFINE_ERROR(NegativeDensity)
    RSS_DEFINE_ERROR(Infeasible)
    RSS_DEFINE_ERROR(MaxIterations)

#undef RSS_DEFINE_ERROR

    // Adaptive quadrature did not reach its absolute tolerance.
    class QuadratureFailure : public Error
    {
    public:
        QuadratureFailure(const std::string &what, double error_estimate)
            : Error(what + " (error estimate " + std::to_string(error_estimate) + ")"),
              error_estimate_(error_estimate) {}

        double error_estimate() const noexcept { return error_estimate_; }

    private:
        double error_estimate_;
    };
}
