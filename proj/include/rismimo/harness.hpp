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

#ifndef RISMIMO_HARNESS_HPP
#define RISMIMO_HARNESS_HPP

#include "rismimo/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rismimo
{
    struct DropResult
    {
        std::vector<double> se;     // per UE, bits/s/Hz
        std::vector<double> sinr;
        std::vector<double> powers; // W
        std::vector<long> ris_owner; // per RIS, -1 when unassigned
        std::size_t power_iterations = 0;
        bool power_converged = true;
    };

    struct CdfPoint
    {
        double se = 0.0;
        double probability = 0.0;
    };

    struct RunMetadata
    {
        std::string scenario_id;
        std::string mode;
        std::string estimator;
        std::string scheme;
        std::string combiner;
        std::string power_control;
        std::uint64_t seed = 0;
        std::size_t pilot_length = 0;
        std::size_t coherence_length = 0;
        std::size_t ue_count = 0;
        std::size_t drop_count = 0;
        std::size_t mc_blocks = 0;
        double elapsed_seconds = 0.0;
    };

    struct RunResult
    {
        RunMetadata metadata;
        std::vector<std::vector<double>> se; // [drop][ue]
        std::vector<CdfPoint> cdf;
        double quantile_10 = 0.0; // SE at CDF level 0.1
        double quantile_50 = 0.0; // median
    };

    // One UE placement: drop-specific placement, statistics, assignment, pipeline and SE evaluation
    DropResult run_drop(const Scenario &scenario, std::uint64_t drop, std::size_t threads = 1);

    // All drops (in parallel when scenario.threads > 1), merged in drop order
    RunResult run_experiment(const Scenario &scenario);

    // Empirical CDF of all values: sorted values with probabilities i / n
    std::vector<CdfPoint> empirical_cdf(const std::vector<std::vector<double>> &values);

    // Smallest value whose CDF reaches q (0 for an empty CDF)
    double cdf_quantile(const std::vector<CdfPoint> &cdf, double q);

    // Recomputes the CDF and quantiles from the per-drop values
    void finalize_distribution(RunResult &result);
}

#endif
