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

#include <catch_amalgamated.hpp>

#include "rismimo/channel_model.hpp"
#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/pilot_training.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/validation/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <vector>

using namespace rismimo;
using Catch::Matchers::WithinRel;

namespace
{
    validation::ToySpec spec_4x4()
    {
        validation::ToySpec spec;
        spec.ris_rows = 2;
        spec.ris_cols = 2;
        spec.ue_count = 3;
        spec.surfaces = 2;
        return spec;
    }

    PilotPlan plan_for(const validation::ToySpec &spec, std::size_t R, double eta = 1.0, std::size_t reps = 2)
    {
        return PilotPlan::make(spec.ue_count, spec.surfaces, R, spec.ris_rows, spec.ris_cols, eta, reps);
    }

    double mse(const arma::cx_mat &a, const arma::cx_mat &b)
    {
        return std::pow(arma::norm(a - b, "fro"), 2);
    }
}

TEST_CASE("Pilot plan: orthogonal pilots and training schedule", "[pilot]")
{
    const PilotPlan plan = PilotPlan::make(4, 2, 4, 4, 4, 0.1, 33);
    CHECK(plan.intervals() == 9);
    CHECK(plan.short_term_length() == 36);
    CHECK(plan.overall_length() == 132);
    CHECK_THAT(plan.short_term_gain(), WithinRel(3.6, 1e-14));
    CHECK_THAT(plan.overall_gain(), WithinRel(13.2, 1e-14));

    const arma::cx_mat gram = plan.ue_pilots.t() * plan.ue_pilots;
    CHECK(arma::abs(gram - arma::eye<arma::cx_mat>(4, 4)).max() < 1e-14);

    REQUIRE(plan.schedule.n_rows == 9);
    REQUIRE(plan.schedule.n_cols == 8);
    CHECK(arma::max(arma::abs(arma::abs(arma::vectorise(plan.schedule)) - 1.0)) < 1e-14);
    arma::cx_mat full = arma::join_rows(arma::ones<arma::cx_vec>(9), plan.schedule);
    CHECK(arma::abs(full.t() * full - 9.0 * arma::eye<arma::cx_mat>(9, 9)).max() < 1e-12);

    CHECK_THROWS_AS(PilotPlan::make(0, 1, 1, 2, 2, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(PilotPlan::make(2, 1, 1, 2, 2, 0.0, 1), ConfigError);
}

TEST_CASE("Surface partition covers every element once", "[pilot]")
{
    const std::vector<std::tuple<int, int, int>> cases{{16, 16, 16}, {8, 8, 4}, {2, 2, 2}, {4, 2, 8}, {3, 5, 5}};
    for (auto [rows, cols, parts] : cases)
    {
        const auto sets = partition_surface(rows, cols, parts);
        REQUIRE(sets.size() == static_cast<std::size_t>(parts));
        std::set<std::size_t> seen;
        for (const auto &s : sets)
        {
            CHECK(s.size() == static_cast<std::size_t>(rows * cols / parts));
            seen.insert(s.begin(), s.end());
        }
        CHECK(seen.size() == static_cast<std::size_t>(rows * cols));
        CHECK(*seen.rbegin() == static_cast<std::size_t>(rows * cols - 1));
    }
    const auto tiles = partition_surface(8, 8, 4);
    CHECK(tiles[0] == std::vector<std::size_t>{0, 1, 2, 3, 8, 9, 10, 11, 16, 17, 18, 19, 24, 25, 26, 27});
    CHECK_THROWS_AS(partition_surface(4, 4, 3), ConfigError);
}

TEST_CASE("Noise-free short-term observations recover channel sums", "[pilot]")
{
    Rng rng = make_stream(21, {1});
    const auto spec = spec_4x4();
    const ChannelStatistics stats = validation::toy_statistics(spec, rng);
    const ChannelRealization real = sample_realization(stats, rng);
    const PilotPlan plan = plan_for(spec, 2, 0.3);

    const auto blocks = simulate_pilot_rx_short(real, plan, 0.0, rng);
    REQUIRE(blocks.size() == plan.intervals());
    const ShortTermObservation obs = sufficient_stats_short(blocks, plan);
    EstimateSet ls;
    ls_short(obs, plan, ls);

    for (std::size_t k = 0; k < spec.ue_count; ++k)
    {
        CHECK(arma::norm(ls.direct[k] - real.direct[k]) < 1e-12 * arma::norm(real.direct[k]));
        for (std::size_t l = 0; l < spec.surfaces; ++l)
        {
            const arma::cx_mat H = cascaded_channel(real, k, l);
            for (std::size_t r = 0; r < plan.sub_surfaces; ++r)
            {
                arma::cx_vec sum(H.n_rows, arma::fill::zeros);
                for (std::size_t n : plan.sub_surface_elements[r])
                    sum += H.col(n);
                const arma::cx_vec z = obs.sub_sums[k][l * plan.sub_surfaces + r] / std::sqrt(plan.short_term_gain());
                CHECK(arma::norm(z - sum) < 1e-12 * arma::norm(sum));
            }
        }
    }
    CHECK_THROWS_AS(sufficient_stats_short({blocks[0]}, plan), DimensionError);
}

TEST_CASE("Short-term LMMSE filters: structure and accuracy", "[pilot]")
{
    Rng rng = make_stream(22, {1});
    const auto spec = spec_4x4();
    const ChannelStatistics stats = validation::toy_statistics(spec, rng);
    const PilotPlan plan = plan_for(spec, 2);
    const double s2 = 1.0;
    const ShortTermLmmse lmmse(stats, plan, s2);

    const double c = plan.short_term_gain();
    const arma::cx_mat Rh = stats.direct[0].second_moment();
    const arma::cx_mat expected = std::sqrt(c) * Rh * arma::inv(c * Rh + s2 * arma::eye<arma::cx_mat>(4, 4));
    CHECK(relative_frobenius_error(lmmse.direct_filter(0), expected) < 1e-10);
    CHECK(is_hermitian(lmmse.sub_sum_moment(1, 0, 1), 1e-12));

    double lmmse_err = 0.0, ls_err = 0.0;
    for (int d = 0; d < 400; ++d)
    {
        const ChannelRealization real = sample_realization(stats, rng);
        const ShortTermObservation obs = sufficient_stats_short(simulate_pilot_rx_short(real, plan, s2, rng), plan);
        EstimateSet a, b;
        lmmse.estimate(obs, a);
        ls_short(obs, plan, b);
        for (std::size_t k = 0; k < spec.ue_count; ++k)
        {
            lmmse_err += mse(a.direct[k], real.direct[k]);
            ls_err += mse(b.direct[k], real.direct[k]);
            for (std::size_t l = 0; l < spec.surfaces; ++l)
            {
                lmmse_err += mse(a.cascaded[k * spec.surfaces + l], cascaded_channel(real, k, l));
                ls_err += mse(b.cascaded[k * spec.surfaces + l], cascaded_channel(real, k, l));
            }
        }
    }
    CHECK(lmmse_err < ls_err);
}

TEST_CASE("Short-term LMMSE filters match regression on samples", "[pilot]")
{
    Rng rng = make_stream(23, {1});
    validation::ToySpec spec;
    spec.bs_antennas = 2;
    const ChannelStatistics stats = validation::toy_statistics(spec, rng);
    const PilotPlan plan = PilotPlan::make(spec.ue_count, 1, 1, 2, 2, 1.0, 2);
    const ShortTermLmmse lmmse(stats, plan, 1.0);

    validation::RegressionAccumulator direct(2, 2), column(2, 2);
    for (int d = 0; d < 200000; ++d)
    {
        const ChannelRealization real = sample_realization(stats, rng);
        const ShortTermObservation obs = sufficient_stats_short(simulate_pilot_rx_short(real, plan, 1.0, rng), plan);
        direct.add(real.direct[0], obs.direct[0]);
        column.add(cascaded_channel(real, 0, 0).col(2), obs.sub_sums[0][0]);
    }
    CHECK(relative_frobenius_error(direct.filter(), lmmse.direct_filter(0)) < 0.02);
    CHECK(relative_frobenius_error(column.filter(), lmmse.cascaded_filter(0, 0, 2)) < 0.02);
}

TEST_CASE("Overall LMMSE: error covariance matches sampling", "[pilot]")
{
    Rng rng = make_stream(24, {1});
    const auto spec = spec_4x4();
    const ChannelStatistics stats = validation::toy_statistics(spec, rng);
    const PilotPlan plan = plan_for(spec, 1, 0.5, 3);
    const RisAssignment assignment = RisAssignment::whole_surfaces(4, spec.ue_count, {0, 2});

    PhaseConfig phases;
    for (const auto &e : assignment.ue_elements)
    {
        arma::vec a(e.size());
        for (double &x : a)
            x = uniform_phase(rng);
        phases.angles.push_back(a);
    }
    std::vector<arma::cx_vec> diagonals;
    for (std::size_t l = 0; l < spec.surfaces; ++l)
        diagonals.push_back(phases.surface_diagonal(assignment, l));

    const double s2 = 0.8;
    const OverallLmmse lmmse(stats, diagonals, plan.overall_gain(), s2);
    const std::size_t draws = 40000;
    const auto errors = error_covariance_mc(
        [&](std::size_t) {
            const ChannelRealization real = sample_realization(stats, rng);
            const auto truth = overall_channel(real, assignment, phases);
            EstimateSet est;
            lmmse.estimate(simulate_pilot_rx_long(truth, plan, s2, rng), est);
            return std::make_pair(truth, est.overall);
        },
        draws);

    validation::MomentAccumulator moment(spec.bs_antennas);
    for (std::size_t d = 0; d < draws; ++d)
        moment.add(overall_channel(sample_realization(stats, rng), assignment, phases)[2]);

    for (std::size_t k = 0; k < spec.ue_count; ++k)
    {
        CHECK(relative_frobenius_error(errors[k], lmmse.error_covariance(k)) < 0.05);
        CHECK(min_eigenvalue(lmmse.error_covariance(k)) > -1e-12);
    }
    CHECK(relative_frobenius_error(moment.mean(), overall_second_moment(stats, 2, diagonals)) < 0.05);
    CHECK(relative_frobenius_error(lmmse.second_moment(2), overall_second_moment(stats, 2, diagonals)) < 1e-12);

    EstimateSet ls;
    ls_overall({arma::cx_vec(4, arma::fill::ones)}, 4.0, s2, ls);
    CHECK(std::abs(ls.overall[0](0) - 0.5) < 1e-15);
    CHECK(arma::abs(ls.error_covariance[0] - 0.2 * arma::eye<arma::cx_mat>(4, 4)).max() < 1e-15);
}
