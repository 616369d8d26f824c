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
#include "rismimo/harness.hpp"
#include "rismimo/pipeline.hpp"
#include "rismimo/results_io.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/scenario.hpp"

#include <filesystem>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace rismimo;
using Catch::Matchers::WithinAbs;

namespace
{
    Scenario tiny_scenario()
    {
        Scenario s;
        s.id = "tiny";
        s.bs_antennas = 4;
        s.ris_count = 2;
        s.ris_rows = 2;
        s.ris_cols = 2;
        s.ue_count = 3;
        s.sub_surfaces = 2;
        s.pilot_repetitions = 2;
        s.conv_pilot_repetitions = 3;
        s.drop_count = 3;
        s.mc_blocks = 100;
        s.error_cov_draws = 1000;
        s.seed = 17;
        return s;
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
}

TEST_CASE("Empirical CDF and quantiles", "[harness]")
{
    const std::vector<std::vector<double>> one_drop{{8, 3, 5, 1, 7, 2, 6, 4}};
    const auto cdf = empirical_cdf(one_drop);
    REQUIRE(cdf.size() == 8);
    for (std::size_t i = 0; i < 8; ++i)
    {
        CHECK(cdf[i].se == static_cast<double>(i + 1));
        CHECK_THAT(cdf[i].probability, WithinAbs(static_cast<double>(i + 1) / 8.0, 1e-15));
    }
    CHECK(cdf_quantile(cdf, 0.1) == 1.0);
    CHECK(cdf_quantile(cdf, 0.125) == 1.0);
    CHECK(cdf_quantile(cdf, 0.5) == 4.0);
    CHECK(cdf_quantile(cdf, 1.0) == 8.0);
    CHECK(cdf_quantile({}, 0.5) == 0.0);

    const auto merged = empirical_cdf({{2.0, 1.0}, {3.0, 0.5}});
    CHECK(merged.front().se == 0.5);
    CHECK(merged.back().probability == 1.0);
}

TEST_CASE("Noise-free pipeline recovers the overall channels", "[harness]")
{
    Scenario s = tiny_scenario();
    Rng rng = make_stream(s.seed, {99});
    const ChannelStatistics stats = build_statistics(s, place_ues(s, rng), rng);
    const RisAssignment assignment = default_assignment(s, stats);
    s.sub_surfaces = 4;
    for (Mode mode : {Mode::short_term_single, Mode::two_stage, Mode::long_term})
    {
        s.mode = mode;
        s.phase_scheme = mode == Mode::long_term ? PhaseScheme::longterm : PhaseScheme::ps1;
        const Pipeline pipeline(s, stats, assignment, 0, 0.0);
        for (std::uint64_t block = 0; block < 3; ++block)
        {
            BlockStreams streams = block_streams(s.seed, 0, block);
            const BlockOutcome out = pipeline.run_block(streams);
            for (std::size_t k = 0; k < s.ue_count; ++k)
                CHECK(arma::norm(out.estimates.overall[k] - out.channels[k]) < 1e-9 * arma::norm(out.channels[k]));
        }
    }
}

TEST_CASE("Pipeline pilot lengths follow the mode", "[harness]")
{
    Scenario s = tiny_scenario();
    Rng rng = make_stream(s.seed, {98});
    const ChannelStatistics stats = build_statistics(s, place_ues(s, rng), rng);
    const RisAssignment assignment = default_assignment(s, stats);
    s.mode = Mode::two_stage;
    const Pipeline two(s, stats, assignment, 0);
    CHECK(two.pilot_length() == s.pilot_length());
    CHECK(two.pilot_length() == (2 * 2 + 1) * 3 + 2 * 3);
    CHECK_THAT(two.prelog(), WithinAbs(s.prelog(), 1e-15));
    CHECK_FALSE(two.fixed_phases().has_value());

    s.mode = Mode::long_term;
    s.phase_scheme = PhaseScheme::longterm;
    const Pipeline lt(s, stats, assignment, 0);
    CHECK(lt.fixed_phases().has_value());
}

TEST_CASE("SE evaluation does not depend on the thread count", "[harness]")
{
    const Scenario s = tiny_scenario();
    const DropResult a = run_drop(s, 1, 1);
    const DropResult b = run_drop(s, 1, 3);
    REQUIRE(a.se.size() == s.ue_count);
    CHECK(a.se == b.se);
    CHECK(a.powers == b.powers);
    for (double se : a.se)
        CHECK(se > 0.0);
    CHECK(a.ris_owner.size() == s.ris_count);
}

TEST_CASE("Experiments are reproducible and seed dependent", "[harness]")
{
    Scenario s = tiny_scenario();
    s.drop_count = 2;
    RunResult a = run_experiment(s);
    s.threads = 2;
    RunResult b = run_experiment(s);
    a.metadata.elapsed_seconds = b.metadata.elapsed_seconds = 0.0;
    CHECK(results_to_json(a) == results_to_json(b));
    CHECK(a.metadata.pilot_length == s.pilot_length());
    CHECK(a.cdf.size() == s.drop_count * s.ue_count);

    s.seed = 18;
    const RunResult c = run_experiment(s);
    CHECK(c.se != a.se);
}

TEST_CASE("Schemes and combiners run end to end", "[harness]")
{
    Scenario s = tiny_scenario();
    s.drop_count = 1;
    const std::vector<std::tuple<Mode, PhaseScheme, CombinerKind, Estimator>> variants{
        {Mode::conv_mimo, PhaseScheme::zero, CombinerKind::conv_mmse, Estimator::lmmse},
        {Mode::short_term_single, PhaseScheme::per_element, CombinerKind::mr, Estimator::ls},
        {Mode::short_term_single, PhaseScheme::random, CombinerKind::rzf, Estimator::lmmse},
        {Mode::long_term, PhaseScheme::zero, CombinerKind::ammse, Estimator::lmmse},
        {Mode::two_stage, PhaseScheme::ps1, CombinerKind::ammse, Estimator::ls},
    };
    for (const auto &[mode, scheme, combiner, estimator] : variants)
    {
        s.mode = mode;
        s.phase_scheme = scheme;
        s.combiner = combiner;
        s.estimator = estimator;
        const RunResult r = run_experiment(s);
        REQUIRE(r.se.size() == 1);
        for (double se : r.se[0])
        {
            CHECK(std::isfinite(se));
            CHECK(se >= 0.0);
        }
    }
    s.power_control = PowerControlKind::full;
    const DropResult full = run_drop(s, 0);
    for (double p : full.powers)
        CHECK(p == s.max_power_w);
}

TEST_CASE("Result files", "[harness]")
{
    Scenario s = tiny_scenario();
    s.drop_count = 2;
    const RunResult r = run_experiment(s);

    const auto dir = std::filesystem::temp_directory_path() / "rismimo_test_results";
    std::filesystem::create_directories(dir);
    const auto json_path = (dir / "r.json").string();
    emit_results(r, json_path, ResultFormat::json);
    const RunResult back = read_results_json(json_path);
    CHECK(results_to_json(back) == results_to_json(r));

    const auto csv_path = (dir / "r.csv").string();
    emit_results(r, csv_path, ResultFormat::csv);
    CHECK(cdf_path_for(csv_path) == (dir / "r.cdf.csv").string());
    const std::string csv = slurp(csv_path);
    CHECK(csv.rfind("scenario_id,drop,ue,se_bits_per_hz,mode,scheme,combiner\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6);
    const std::string cdf = slurp(cdf_path_for(csv_path));
    CHECK(cdf == cdf_csv(r));
    CHECK(cdf.rfind("se_bits_per_hz,probability\n", 0) == 0);

    CHECK_THROWS_AS(read_results_json((dir / "missing.json").string()), IoError);
    CHECK_THROWS_AS(results_from_json("{\"metadata\": 3}"), ConfigError);
    CHECK_THROWS_AS(emit_results(r, "/nonexistent/dir/r.json", ResultFormat::json), IoError);
    std::filesystem::remove_all(dir);
}
