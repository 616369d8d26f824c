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
#include "rismimo/ris_config.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/scenario.hpp"
#include "rismimo/validation/criteria.hpp"
#include "rismimo/validation/oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>

using namespace rismimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    PhaseConfig random_phases(const RisAssignment &assignment, Rng &rng)
    {
        PhaseConfig p;
        for (const auto &elements : assignment.ue_elements)
        {
            arma::vec a(elements.size());
            for (double &x : a)
                x = uniform_phase(rng);
            p.angles.push_back(a);
        }
        return p;
    }
}

TEST_CASE("UE link samples reproduce the second moment", "[channel]")
{
    Rng rng = make_stream(3, {1});
    const ChannelStatistics stats = validation::toy_statistics({}, rng);
    for (const UeLinkStatistics *link : {&stats.direct[0], &stats.ris_link(1, 0)})
    {
        validation::MomentAccumulator acc(link->nonspecular_corr.n_rows);
        for (int d = 0; d < 100000; ++d)
            acc.add(link->sample(rng));
        CHECK(relative_frobenius_error(acc.mean(), link->second_moment()) < 0.03);
    }
}

TEST_CASE("Specular phases are reported and uniform", "[channel]")
{
    Rng rng = make_stream(4, {1});
    const ChannelStatistics stats = validation::toy_statistics({}, rng);
    const UeLinkStatistics &link = stats.ris_link(0, 0);
    double c = 0.0, s = 0.0;
    const int draws = 20000;
    for (int d = 0; d < draws; ++d)
    {
        std::vector<double> phases;
        link.sample(rng, &phases);
        REQUIRE(phases.size() == link.specular.size());
        c += std::cos(phases[0]);
        s += std::sin(phases[0]);
    }
    CHECK(std::abs(c / draws) < 0.03);
    CHECK(std::abs(s / draws) < 0.03);
}

TEST_CASE("Cascaded second moment matches sampling", "[channel]")
{
    Rng rng = make_stream(5, {1});
    const ChannelStatistics stats = validation::toy_statistics({}, rng);
    const arma::cx_mat closed = validation::cascaded_moment_closed(stats, 0, 0);
    const arma::cx_mat mc = validation::cascaded_moment_mc(stats, 0, 0, 50000, rng);
    CHECK(relative_frobenius_error(mc, closed) < 0.05);
    CHECK(is_hermitian(closed, 1e-12 * arma::abs(closed).max()));
}

TEST_CASE("Overall channel: element form equals surface form", "[channel]")
{
    Rng rng = make_stream(6, {1});
    validation::ToySpec spec;
    spec.surfaces = 2;
    spec.ue_count = 3;
    const ChannelStatistics stats = validation::toy_statistics(spec, rng);
    const ChannelRealization real = sample_realization(stats, rng);

    RisAssignment assignment;
    assignment.surfaces = 2;
    assignment.elements_per_surface = 4;
    assignment.ue_elements = {{0, 5}, {}, {1, 2, 7}};
    assignment.validate();
    const PhaseConfig phases = random_phases(assignment, rng);

    const auto a = overall_channel(real, assignment, phases);
    const auto b = overall_channel_surface_form(real, assignment, phases);
    REQUIRE(a.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(arma::norm(a[k] - b[k]) < 1e-12 * arma::norm(b[k]));

    const arma::cx_mat H = cascaded_assigned(real, assignment, 1, 2);
    REQUIRE(H.n_cols == 3);
    CHECK(arma::norm(H.col(2) - cascaded_channel(real, 1, 1).col(3)) == 0.0);
}

TEST_CASE("Empty assignment leaves only the direct channel", "[channel]")
{
    Rng rng = make_stream(7, {1});
    const ChannelStatistics stats = validation::toy_statistics({}, rng);
    const ChannelRealization real = sample_realization(stats, rng);
    const RisAssignment none = RisAssignment::empty(1, 4, 2);
    const PhaseConfig phases = random_phases(none, rng);
    const auto b = overall_channel(real, none, phases);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(arma::norm(b[k] - real.direct[k]) == 0.0);
}

TEST_CASE("Assignment validation", "[channel]")
{
    RisAssignment a;
    a.surfaces = 1;
    a.elements_per_surface = 4;
    a.ue_elements = {{0, 1}, {1}};
    CHECK_THROWS_AS(a.validate(), AssignmentError);
    a.ue_elements = {{0, 4}, {}};
    CHECK_THROWS_AS(a.validate(), AssignmentError);
    a.ue_elements = {{3}, {0, 2}};
    CHECK_NOTHROW(a.validate());
    CHECK(a.owners() == std::vector<long>{1, -1, 1, 0});

    const RisAssignment whole = RisAssignment::whole_surfaces(3, 2, {1, -1});
    CHECK(whole.ue_elements[0].empty());
    CHECK(whole.ue_elements[1] == std::vector<std::size_t>{0, 1, 2});

    PhaseConfig p;
    p.angles = {arma::vec{0.0}, arma::vec{0.1}};
    CHECK_THROWS_AS(p.check(a), DimensionError);
    CHECK(PhaseConfig::angles_of(arma::cx_vec{{0.0, 0.0}, {0.0, 2.0}})(1) == std::numbers::pi / 2.0);
}

TEST_CASE("LOS probability", "[channel]")
{
    CHECK_THAT(los_probability(1.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(los_probability(18.0), WithinAbs(1.0, 1e-15));
    const double d = 100.0;
    CHECK_THAT(los_probability(d), WithinRel(0.18 * (1.0 - std::exp(-d / 36.0)) + std::exp(-d / 36.0), 1e-14));
    CHECK(los_probability(300.0) < los_probability(200.0));
}

TEST_CASE("Scenario statistics: dimensions and link states", "[channel]")
{
    Scenario s = validation::desk_scale_scenario();
    Rng rng = make_stream(8, {1});
    const auto ues = place_ues(s, rng);
    REQUIRE(ues.size() == s.ue_count);
    for (const Point3 &p : ues)
    {
        CHECK(p.x >= s.ue_region.x_min);
        CHECK(p.x <= s.ue_region.x_max);
        CHECK(p.y >= s.ue_region.y_min);
        CHECK(p.y <= s.ue_region.y_max);
    }

    const ChannelStatistics stats = build_statistics(s, ues, rng);
    CHECK_NOTHROW(stats.validate());
    CHECK(stats.bs_antennas == s.bs_antennas);
    CHECK(stats.elements_per_surface == s.ris_elements());
    CHECK(stats.ue_ris.size() == s.ue_count * s.ris_count);
    for (const auto &link : stats.ue_ris)
    {
        CHECK(link.los);
        CHECK(link.kfactor > 0.0);
    }
    for (const auto &g : stats.bs_ris)
    {
        CHECK(g.los_fixed);
        CHECK(g.specular.size() == 1);
    }

    const RisAssignment assignment = default_assignment(s, stats);
    CHECK_NOTHROW(assignment.validate());
    std::size_t weakest = 0;
    for (std::size_t k = 1; k < s.ue_count; ++k)
        if (stats.direct[k].gain < stats.direct[weakest].gain)
            weakest = k;
    CHECK(assignment.ue_elements[weakest].size() == s.ris_elements());

    s.assignment = AssignmentPolicy::none;
    for (const auto &e : default_assignment(s, stats).ue_elements)
        CHECK(e.empty());
}

TEST_CASE("Never-LOS links have no specular part", "[channel]")
{
    Scenario s = validation::desk_scale_scenario();
    s.direct.los = LosModel::never;
    Rng rng = make_stream(9, {1});
    const ChannelStatistics stats = build_statistics(s, place_ues(s, rng), rng);
    for (const auto &link : stats.direct)
    {
        CHECK_FALSE(link.los);
        CHECK(link.specular.empty());
        CHECK_THAT(std::real(arma::trace(link.second_moment())) / s.bs_antennas, WithinRel(link.gain, 1e-9));
    }
}

TEST_CASE("Scenario derived quantities", "[scenario]")
{
    Scenario s;
    CHECK(s.pilot_length() == 264);
    s.mode = Mode::long_term;
    CHECK(s.pilot_length() == 264);
    s.mode = Mode::two_stage;
    CHECK(s.pilot_length() == 528);
    s.mode = Mode::conv_mimo;
    CHECK(s.pilot_length() == 240);
    CHECK(s.active_ris_count() == 0);
    CHECK_THAT(s.prelog(), WithinAbs(0.976, 1e-15));
    CHECK_THAT(10.0 * std::log10(s.noise_power_w()) + 30.0, WithinAbs(-107.0, 1e-12));
    s.noise_power_dbm = -90.0;
    CHECK_THAT(s.noise_power_w(), WithinRel(1e-12, 1e-12));
}

TEST_CASE("Scenario JSON round trip and field overrides", "[scenario]")
{
    const Scenario desk = validation::desk_scale_scenario();
    const Scenario back = parse_scenario(scenario_to_string(desk));
    CHECK(scenario_to_string(back) == scenario_to_string(desk));

    const Scenario edited = with_field(desk, "propagation.kfactor.std_db", "2.5");
    CHECK(edited.kfactor.std_db == 2.5);
    CHECK(with_field(desk, "processing.mode", "conv_mimo").mode == Mode::conv_mimo);
    CHECK_THROWS_AS(with_field(desk, "no.such.field", "1"), ConfigError);
    CHECK_THROWS_AS(with_field(desk, "propagation.kfactor.std_db", "[1"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("{\"dimensions\": {\"ue_count\": 0}}"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), IoError);
}

TEST_CASE("Bundled presets parse", "[scenario]")
{
    const std::string root = RISMIMO_SOURCE_DIR;
    const Scenario desk = load_scenario(root + "/scenarios/desk_scale.json");
    Scenario expected = validation::desk_scale_scenario();
    expected.seed = desk.seed;
    CHECK(scenario_to_string(desk) == scenario_to_string(expected));

    const Scenario full = load_scenario(root + "/scenarios/full_scale.json");
    Scenario defaults;
    defaults.seed = full.seed;
    CHECK(scenario_to_string(full) == scenario_to_string(defaults));
}
