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

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rss
{
    inline unsigned resolve_threads(unsigned requested)
    {
        if (requested != 0)
            return requested;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1u : hw;
    }

    // Runs body(i) for i in [0, n) on a fixed set of threads with static contiguous chunks.
    // Each index is handled exactly once and results are written by index, so the output
    // does not depend on the thread count. The first exception is rethrown on the caller.
    template <typename Body>
    void parallel_for(std::size_t n, Body &&body, unsigned threads = 0)
    {
        const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }

        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
        {
            const std::size_t lo = n * w / workers;
            const std::size_t hi = n * (w + 1) / workers;
            pool.emplace_back([&, lo, hi]
                              {
                try
                {
                    for (std::size_t i = lo; i < hi; ++i)
                        body(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                } });
        }
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
}
