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

#include "rss/random.hpp"

namespace rss
{
    namespace
    {
        constexpr std::uint32_t M0 = 0xD2511F53u;
        constexpr std::uint32_t M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u;
        constexpr std::uint32_t W1 = 0xBB67AE85u;

        inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) noexcept
        {
            const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
            hi = static_cast<std::uint32_t>(p >> 32);
            lo = static_cast<std::uint32_t>(p);
        }
    }

    Philox4x32::counter_type Philox4x32::block(counter_type c, key_type k) noexcept
    {
        for (int r = 0; r < 10; ++r)
        {
            if (r > 0)
            {
                k[0] += W0;
                k[1] += W1;
            }
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(M0, c[0], hi0, lo0);
            mulhilo(M1, c[2], hi1, lo1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        }
        return c;
    }

    PhiloxStream::PhiloxStream(std::uint64_t seed, Stream stream, std::uint32_t substream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(static_cast<std::uint32_t>(stream)), substream_(substream) {}

    PhiloxStream::result_type PhiloxStream::operator()() noexcept
    {
        const std::uint64_t b = index_ >> 2;
        if (b != block_index_)
        {
            buffer_ = Philox4x32::block({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), stream_, substream_}, key_);
            block_index_ = b;
        }
        return buffer_[index_++ & 3u];
    }

    double PhiloxStream::uniform() noexcept
    {
        const std::uint32_t a = (*this)() >> 5;
        const std::uint32_t b = (*this)() >> 6;
        return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);
    }

    void PhiloxStream::seek(std::uint64_t i) noexcept
    {
        index_ = i;
    }
}
