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

#ifndef RISMIMO_PIPELINE_HPP
#define RISMIMO_PIPELINE_HPP

#include "rismimo/channel_model.hpp"
#include "rismimo/combining.hpp"
#include "rismimo/pilot_training.hpp"
#include "rismimo/power_control.hpp"
#include "rismimo/ris_config.hpp"
#include "rismimo/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace rismimo
{
    // Generators of one coherence block
    struct BlockStreams
    {
        Rng channel;
        Rng noise;
        Rng phases;
    };

    BlockStreams block_streams(std::uint64_t seed, std::uint64_t drop, std::uint64_t block);
    BlockStreams error_covariance_streams(std::uint64_t seed, std::uint64_t drop, std::uint64_t draw);

    struct BlockOutcome
    {
        std::vector<arma::cx_vec> channels; // true overall channels b_k
        EstimateSet estimates;              // overall estimates always filled
        PhaseConfig phases;
    };

    // Estimation and RIS configuration for one UE placement in the configured mode
    class Pipeline
    {
    public:
        // `noise_power` overrides the scenario's thermal noise (e.g. 0 for exactness checks)
        Pipeline(const Scenario &scenario, const ChannelStatistics &stats, const RisAssignment &assignment,
                 std::uint64_t drop, std::optional<double> noise_power = std::nullopt);

        // sample -> pilots -> estimate -> select phases -> (second stage) overall estimate
        BlockOutcome run_block(BlockStreams &streams) const;

        // Same for a given channel realization
        BlockOutcome run_block(const ChannelRealization &realization, BlockStreams &streams) const;

        // Error covariances for the AMMSE-type combiners: closed form where the estimator provides
        // one, Monte Carlo otherwise
        std::vector<arma::cx_mat> error_covariances(std::uint64_t seed, std::uint64_t drop) const;

        std::size_t pilot_length() const { return pilot_length_; }
        double prelog() const;
        const PilotPlan &plan() const { return plan_; }
        const RisAssignment &assignment() const { return assignment_; }
        double noise_power() const { return noise_power_; }
        const ChannelStatistics &statistics() const { return *stats_; }

        // Set for the fixed-configuration modes
        const std::optional<PhaseConfig> &fixed_phases() const { return fixed_phases_; }

    private:
        std::vector<arma::cx_vec> surface_diagonals(const PhaseConfig &phases) const;
        PhaseConfig select_phases(const EstimateSet &first_stage, Rng &rng) const;

        Scenario scenario_;
        const ChannelStatistics *stats_;
        RisAssignment assignment_;
        PilotPlan plan_;
        double noise_power_ = 0.0;
        std::size_t pilot_length_ = 0;
        std::optional<PhaseConfig> fixed_phases_;
        std::unique_ptr<ShortTermLmmse> short_term_;
        std::unique_ptr<OverallLmmse> overall_; // fixed-configuration modes
    };

    struct SeEvaluation
    {
        arma::vec se;
        arma::vec sinr;
        arma::vec powers;
        SinrCoefficients coefficients;
        std::size_t power_iterations = 0;
        bool power_converged = true;
    };

    // Monte-Carlo evaluation of the use-and-forget SE over `blocks` coherence blocks. Blocks are
    // accumulated in fixed chunks merged in order, so the result does not depend on `threads`.
    SeEvaluation evaluate_se(const Scenario &scenario, const Pipeline &pipeline, std::uint64_t drop, std::size_t blocks,
                             std::size_t threads = 1);
}

#endif
