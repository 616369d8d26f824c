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

#include "rismimo/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace rismimo::log
{
    namespace
    {
        std::atomic<int> g_level{static_cast<int>(Level::warning)};
        std::mutex g_mutex;

        const char *tag(Level level)
        {
            switch (level)
            {
            case Level::debug:
                return "debug";
            case Level::info:
                return "info";
            case Level::warning:
                return "warning";
            case Level::error:
                return "error";
            default:
                return "";
            }
        }
    }

    void set_level(Level level) { g_level.store(static_cast<int>(level)); }

    Level level() { return static_cast<Level>(g_level.load()); }

    void write(Level level, const std::string &message)
    {
        if (static_cast<int>(level) < g_level.load() || level == Level::off)
            return;
        std::lock_guard<std::mutex> lock(g_mutex);
        std::clog << "[rismimo:" << tag(level) << "] " << message << '\n';
    }
}
