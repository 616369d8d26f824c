// SPDX-License-Identifier: Apache-2.0
//
// rismimo - link-level simulation of RIS-assisted uplink massive MIMO
// Copyright (C) 2026 The rismimo authors
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

#ifndef RISMIMO_PARALLEL_HPP
#define RISMIMO_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rismimo
{
    // Calls fn(i) for i in [0, count) on up to `threads` workers. The first exception is rethrown
    // after all workers have stopped.
    template <typename Fn>
    void parallel_for(std::size_t count, std::size_t threads, Fn &&fn)
    {
        threads = std::max<std::size_t>(1, std::min(threads, count));
        if (threads == 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&]() {
            while (true)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = count;
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
}

#endif
