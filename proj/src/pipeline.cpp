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

#include "rismimo/pipeline.hpp"

#include "rismimo/errors.hpp"
#include "rismimo/parallel.hpp"
#include "rismimo/phase_select.hpp"

#include <cmath>

namespace rismimo
{
    BlockStreams block_streams(std::uint64_t seed, std::uint64_t drop, std::uint64_t block)
    {
        return {make_stream(seed, drop, Stream::channel, block), make_stream(seed, drop, Stream::noise, block),
                make_stream(seed, drop, Stream::phases, block + 1)};
    }

    BlockStreams error_covariance_streams(std::uint64_t seed, std::uint64_t drop, std::uint64_t draw)
    {
        const auto family = static_cast<std::uint64_t>(Stream::error_covariance);
        return {make_stream(seed, {drop, family, draw, static_cast<std::uint64_t>(Stream::channel)}),
                make_stream(seed, {drop, family, draw, static_cast<std::uint64_t>(Stream::noise)}),
                make_stream(seed, {drop, family, draw, static_cast<std::uint64_t>(Stream::phases)})};
    }

    Pipeline::Pipeline(const Scenario &scenario, const ChannelStatistics &stats, const RisAssignment &assignment,
                       std::uint64_t drop, std::optional<double> noise_power)
        : scenario_(scenario), stats_(&stats), assignment_(assignment)
    {
        scenario.validate();
        stats.validate();
        assignment.validate();
        if (stats.surfaces != scenario.active_ris_count() || stats.ue_count != scenario.ue_count ||
            stats.bs_antennas != scenario.bs_antennas)
            throw DimensionError("Pipeline: statistics do not match the scenario");
        if (assignment.ue_count() != stats.ue_count || assignment.surfaces != stats.surfaces ||
            (stats.surfaces > 0 && assignment.elements_per_surface != stats.elements_per_surface))
            throw DimensionError("Pipeline: assignment does not match the statistics");

        noise_power_ = noise_power ? *noise_power : scenario.noise_power_w();
        pilot_length_ = scenario.pilot_length();
        const std::size_t reps = scenario.mode == Mode::conv_mimo ? scenario.conv_pilot_repetitions : scenario.pilot_repetitions;
        plan_ = PilotPlan::make(scenario.ue_count, stats.surfaces, scenario.sub_surfaces, scenario.ris_rows, scenario.ris_cols,
                                scenario.pilot_power_w, reps);

        const bool fixed_mode = scenario.mode == Mode::long_term || scenario.mode == Mode::conv_mimo;
        switch (scenario.phase_scheme)
        {
        case PhaseScheme::longterm:
            fixed_phases_ = ps_longterm(stats, assignment_);
            break;
        case PhaseScheme::zero:
            fixed_phases_ = ps_zero(assignment_);
            break;
        case PhaseScheme::random:
            if (fixed_mode)
            {
                Rng rng = make_stream(scenario.seed, drop, Stream::phases, 0);
                fixed_phases_ = ps_random(assignment_, rng);
            }
            break;
        default:
            break;
        }
        if (scenario.mode == Mode::conv_mimo)
            fixed_phases_ = ps_zero(assignment_);

        if (fixed_mode)
        {
            if (scenario.estimator == Estimator::lmmse)
                overall_ = std::make_unique<OverallLmmse>(stats, surface_diagonals(*fixed_phases_), plan_.overall_gain(), noise_power_);
        }
        else if (scenario.estimator == Estimator::lmmse)
            short_term_ = std::make_unique<ShortTermLmmse>(stats, plan_, noise_power_);
    }

    double Pipeline::prelog() const
    {
        return static_cast<double>(scenario_.coherence_length - pilot_length_) / static_cast<double>(scenario_.coherence_length);
    }

    std::vector<arma::cx_vec> Pipeline::surface_diagonals(const PhaseConfig &phases) const
    {
        std::vector<arma::cx_vec> d;
        for (std::size_t l = 0; l < stats_->surfaces; ++l)
            d.push_back(phases.surface_diagonal(assignment_, l));
        return d;
    }

    PhaseConfig Pipeline::select_phases(const EstimateSet &first_stage, Rng &rng) const
    {
        if (fixed_phases_)
            return *fixed_phases_;
        switch (scenario_.phase_scheme)
        {
        case PhaseScheme::ps1:
            return select_from_estimates(first_stage.direct, first_stage.cascaded, assignment_, false);
        case PhaseScheme::per_element:
            return select_from_estimates(first_stage.direct, first_stage.cascaded, assignment_, true);
        case PhaseScheme::random:
            return ps_random(assignment_, rng);
        default:
            return ps_zero(assignment_);
        }
    }

    BlockOutcome Pipeline::run_block(BlockStreams &streams) const
    {
        return run_block(sample_realization(*stats_, streams.channel), streams);
    }

    BlockOutcome Pipeline::run_block(const ChannelRealization &realization, BlockStreams &streams) const
    {
        BlockOutcome out;
        const std::size_t K = stats_->ue_count, L = stats_->surfaces;

        if (scenario_.mode == Mode::conv_mimo || scenario_.mode == Mode::long_term)
        {
            out.phases = *fixed_phases_;
            out.channels = L > 0 ? overall_channel_surface_form(realization, assignment_, out.phases) : realization.direct;
            const auto z = simulate_pilot_rx_long(out.channels, plan_, noise_power_, streams.noise);
            if (overall_)
                overall_->estimate(z, out.estimates);
            else
                ls_overall(z, plan_.overall_gain(), noise_power_, out.estimates);
            return out;
        }

        // short-term protocol: direct channels and sub-surface sums
        const auto blocks = simulate_pilot_rx_short(realization, plan_, noise_power_, streams.noise);
        const ShortTermObservation obs = sufficient_stats_short(blocks, plan_);
        if (short_term_)
            short_term_->estimate(obs, out.estimates);
        else
            ls_short(obs, plan_, out.estimates);

        out.phases = select_phases(out.estimates, streams.phases);
        const std::vector<arma::cx_vec> diagonals = surface_diagonals(out.phases);
        out.channels = overall_channel_surface_form(realization, assignment_, out.phases);

        if (scenario_.mode == Mode::short_term_single)
        {
            out.estimates.overall.resize(K);
            for (std::size_t k = 0; k < K; ++k)
            {
                arma::cx_vec b = out.estimates.direct[k];
                for (std::size_t l = 0; l < L; ++l)
                    b += out.estimates.cascaded[k * L + l] * diagonals[l];
                out.estimates.overall[k] = std::move(b);
            }
            return out;
        }

        // second stage under the selected configuration
        const auto z = simulate_pilot_rx_long(out.channels, plan_, noise_power_, streams.noise);
        if (scenario_.estimator == Estimator::lmmse)
            OverallLmmse(*stats_, diagonals, plan_.overall_gain(), noise_power_).estimate(z, out.estimates);
        else
            ls_overall(z, plan_.overall_gain(), noise_power_, out.estimates);
        return out;
    }

    std::vector<arma::cx_mat> Pipeline::error_covariances(std::uint64_t seed, std::uint64_t drop) const
    {
        if (scenario_.mode == Mode::conv_mimo || scenario_.mode == Mode::long_term)
        {
            EstimateSet est;
            const std::vector<arma::cx_vec> zeros(stats_->ue_count, arma::cx_vec(stats_->bs_antennas, arma::fill::zeros));
            if (overall_)
                overall_->estimate(zeros, est);
            else
                ls_overall(zeros, plan_.overall_gain(), noise_power_, est);
            return est.error_covariance;
        }
        const OverallDraw draw = [&](std::size_t d) {
            BlockStreams streams = error_covariance_streams(seed, drop, d);
            BlockOutcome o = run_block(streams);
            return std::make_pair(std::move(o.channels), std::move(o.estimates.overall));
        };
        return error_covariance_mc(draw, scenario_.error_cov_draws);
    }

    SeEvaluation evaluate_se(const Scenario &scenario, const Pipeline &pipeline, std::uint64_t drop, std::size_t blocks,
                             std::size_t threads)
    {
        if (blocks == 0)
            throw ConfigError("evaluate_se: at least one coherence block is required");
        const std::size_t K = scenario.ue_count;
        const double noise = pipeline.noise_power();

        const bool needs_covariance = scenario.combiner == CombinerKind::ammse || scenario.combiner == CombinerKind::conv_mmse;
        const std::vector<arma::cx_mat> covariances = needs_covariance ? pipeline.error_covariances(scenario.seed, drop)
                                                                       : std::vector<arma::cx_mat>(K);
        const arma::vec design_powers(K, arma::fill::value(scenario.max_power_w));

        constexpr std::size_t chunk = 50;
        const std::size_t chunks = (blocks + chunk - 1) / chunk;
        std::vector<SinrAccumulator> partial(chunks, SinrAccumulator(K));
        parallel_for(chunks, threads, [&](std::size_t c) {
            for (std::size_t b = c * chunk; b < std::min(blocks, (c + 1) * chunk); ++b)
            {
                BlockStreams streams = block_streams(scenario.seed, drop, b);
                const BlockOutcome o = pipeline.run_block(streams);
                const auto v = combine(scenario.combiner, o.estimates.overall, covariances, design_powers, noise);
                partial[c].add(v, o.channels);
            }
        });
        SinrAccumulator total(K);
        for (const auto &p : partial)
            total.merge(p);

        SeEvaluation out;
        out.coefficients = total.coefficients(noise, scenario.max_power_w);
        const PowerSolution sol = scenario.power_control == PowerControlKind::maxmin
                                      ? maxmin_fixed_point(out.coefficients, scenario.power_tolerance, scenario.power_max_iterations)
                                      : full_power(out.coefficients);
        out.powers = sol.powers;
        out.sinr = sol.sinr;
        out.power_iterations = sol.iterations;
        out.power_converged = sol.converged;
        out.se = spectral_efficiency(out.sinr, pipeline.prelog());
        return out;
    }
}
