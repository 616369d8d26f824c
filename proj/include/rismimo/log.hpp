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

#ifndef RISMIMO_LOG_HPP
#define RISMIMO_LOG_HPP

#include <string>

namespace rismimo::log
{
    enum class Level
    {
        debug = 0,
        info = 1,
        warning = 2,
        error = 3,
        off = 4
    };

    // Messages below this level are dropped. Default: warning.
    void set_level(Level level);
    Level level();

    void write(Level level, const std::string &message);

    inline void debug(const std::string &message) { write(Level::debug, message); }
    inline void info(const std::string &message) { write(Level::info, message); }
    inline void warning(const std::string &message) { write(Level::warning, message); }
}

#endif
