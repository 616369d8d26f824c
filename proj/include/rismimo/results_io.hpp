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

#ifndef RISMIMO_RESULTS_IO_HPP
#define RISMIMO_RESULTS_IO_HPP

#include "rismimo/harness.hpp"

#include <string>

namespace rismimo
{
    enum class ResultFormat
    {
        csv,
        json
    };

    // csv: per-drop rows at `path` and the CDF table next to it as <stem>.cdf.csv
    // json: the complete result including metadata
    void emit_results(const RunResult &result, const std::string &path, ResultFormat format);

    std::string results_to_json(const RunResult &result);
    RunResult results_from_json(const std::string &text);
    RunResult read_results_json(const std::string &path);

    // CDF table as CSV text (columns se_bits_per_hz, probability)
    std::string cdf_csv(const RunResult &result);

    // Path of the CDF table written alongside a CSV result file
    std::string cdf_path_for(const std::string &csv_path);
}

#endif
