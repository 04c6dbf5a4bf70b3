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
#include <cstdint>
#include <limits>

namespace rss
{
    // Philox4x32-10 counter-based block function.
    struct Philox4x32
    {
        using counter_type = std::array<std::uint32_t, 4>;
        using key_type = std::array<std::uint32_t, 2>;

        static counter_type block(counter_type ctr, key_type key) noexcept;
    };

    // Stream identifiers. Every simulation draw comes from exactly one of these.
    enum class Stream : std::uint32_t
    {
        Region1 = 1,
        Region2 = 2,
        Phases = 3,
        Samples = 4,
        Jitter = 5
    };

    // Random-access stream of 32-bit words keyed by (seed, stream, substream). Word i is a pure
    // function of the key and i, so parallel consumers can address disjoint ranges directly.
    class PhiloxStream
    {
    public:
        using result_type = std::uint32_t;

        PhiloxStream(std::uint64_t seed, Stream stream, std::uint32_t substream = 0) noexcept;

        static constexpr result_type min() noexcept { return 0; }
        static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

        result_type operator()() noexcept;

        // Uniform double in [0, 1) with 53 random bits.
        double uniform() noexcept;
        double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

        // Jump to word index i.
        void seek(std::uint64_t i) noexcept;
        std::uint64_t position() const noexcept { return index_; }

    private:
        Philox4x32::key_type key_{};
        std::uint32_t stream_ = 0;
        std::uint32_t substream_ = 0;
        std::uint64_t index_ = 0;
        std::uint64_t block_index_ = ~0ull;
        Philox4x32::counter_type buffer_{};
    };
}
