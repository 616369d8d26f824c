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

#include "rismimo/harness.hpp"

#include "rismimo/channel_model.hpp"
#include "rismimo/errors.hpp"
#include "rismimo/log.hpp"
#include "rismimo/parallel.hpp"
#include "rismimo/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rismimo
{
    DropResult run_drop(const Scenario &scenario, std::uint64_t drop, std::size_t threads)
    {
        scenario.validate();
        Rng placement = make_stream(scenario.seed, drop, Stream::placement);
        const std::vector<Point3> ues = place_ues(scenario, placement);
        Rng statistics = make_stream(scenario.seed, drop, Stream::statistics);
        const ChannelStatistics stats = build_statistics(scenario, ues, statistics);
        const RisAssignment assignment = default_assignment(scenario, stats);

        const Pipeline pipeline(scenario, stats, assignment, drop);
        const SeEvaluation eval = evaluate_se(scenario, pipeline, drop, scenario.mc_blocks, threads);

        DropResult out;
        out.se = arma::conv_to<std::vector<double>>::from(eval.se);
        out.sinr = arma::conv_to<std::vector<double>>::from(eval.sinr);
        out.powers = arma::conv_to<std::vector<double>>::from(eval.powers);
        out.ris_owner.assign(stats.surfaces, -1);
        const std::vector<long> owners = assignment.owners();
        for (std::size_t l = 0; l < stats.surfaces; ++l)
            out.ris_owner[l] = owners[l * stats.elements_per_surface];
        out.power_iterations = eval.power_iterations;
        out.power_converged = eval.power_converged;
        return out;
    }

    std::vector<CdfPoint> empirical_cdf(const std::vector<std::vector<double>> &values)
    {
        std::vector<double> all;
        for (const auto &row : values)
            all.insert(all.end(), row.begin(), row.end());
        std::sort(all.begin(), all.end());
        std::vector<CdfPoint> cdf(all.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            cdf[i] = {all[i], static_cast<double>(i + 1) / static_cast<double>(all.size())};
        return cdf;
    }

    double cdf_quantile(const std::vector<CdfPoint> &cdf, double q)
    {
        if (cdf.empty())
            return 0.0;
        const std::size_t n = cdf.size();
        const double pos = std::ceil(q * static_cast<double>(n) - 1e-9);
        const std::size_t idx = static_cast<std::size_t>(std::clamp(pos, 1.0, static_cast<double>(n))) - 1;
        return cdf[idx].se;
    }

    void finalize_distribution(RunResult &result)
    {
        result.cdf = empirical_cdf(result.se);
        result.quantile_10 = cdf_quantile(result.cdf, 0.1);
        result.quantile_50 = cdf_quantile(result.cdf, 0.5);
    }

    RunResult run_experiment(const Scenario &scenario)
    {
        scenario.validate();
        const auto start = std::chrono::steady_clock::now();

        RunResult result;
        RunMetadata &m = result.metadata;
        m.scenario_id = scenario.id;
        m.mode = to_string(scenario.mode);
        m.estimator = to_string(scenario.estimator);
        m.scheme = scenario.mode == Mode::conv_mimo ? "none" : to_string(scenario.phase_scheme);
        m.combiner = to_string(scenario.combiner);
        m.power_control = to_string(scenario.power_control);
        m.seed = scenario.seed;
        m.pilot_length = scenario.pilot_length();
        m.coherence_length = scenario.coherence_length;
        m.ue_count = scenario.ue_count;
        m.drop_count = scenario.drop_count;
        m.mc_blocks = scenario.mc_blocks;

        log::info("run_experiment: " + scenario.id + ", mode " + m.mode + ", pilot length " + std::to_string(m.pilot_length) +
                  ", prelog " + std::to_string(scenario.prelog()));

        std::vector<DropResult> drops(scenario.drop_count);
        parallel_for(scenario.drop_count, scenario.threads, [&](std::size_t d) { drops[d] = run_drop(scenario, d); });

        result.se.reserve(drops.size());
        for (auto &d : drops)
            result.se.push_back(std::move(d.se));
        finalize_distribution(result);
        m.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return result;
    }
}
