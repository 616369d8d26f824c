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

#ifndef RISMIMO_VALIDATION_CRITERIA_HPP
#define RISMIMO_VALIDATION_CRITERIA_HPP

#include "rismimo/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rismimo::validation
{
    struct CriterionReport
    {
        int id = 0;
        std::string title;
        bool passed = false;
        std::string detail;
        double seconds = 0.0;
    };

    constexpr int criterion_count = 8;

    // Reduced-size setup used for the trend checks: M=16, two 8x8 surfaces, K=4, R=4, 50 drops, 500 blocks
    Scenario desk_scale_scenario();

    CriterionReport correlation_accuracy();
    CriterionReport lmmse_equivalence(std::uint64_t seed);
    CriterionReport cascaded_second_moment(std::uint64_t seed);
    CriterionReport phase_solver(std::uint64_t seed);
    CriterionReport power_control(std::uint64_t seed);
    CriterionReport pipeline_exactness(std::uint64_t seed);
    CriterionReport trend_ordering(std::uint64_t seed);
    CriterionReport determinism(std::uint64_t seed);

    // Throws ConfigError for an id outside 1..criterion_count
    CriterionReport run_criterion(int id, std::uint64_t seed);

    // One line: "criterion <id> PASS|FAIL <title>: <detail> (<seconds> s)"
    std::string format_report(const CriterionReport &report);
}

#endif
