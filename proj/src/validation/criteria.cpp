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

#include "rismimo/validation/criteria.hpp"

#include "rismimo/channel_model.hpp"
#include "rismimo/correlation.hpp"
#include "rismimo/errors.hpp"
#include "rismimo/harness.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/phase_select.hpp"
#include "rismimo/pilot_training.hpp"
#include "rismimo/pipeline.hpp"
#include "rismimo/power_control.hpp"
#include "rismimo/results_io.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/validation/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>

namespace rismimo::validation
{
    namespace
    {
        using Clock = std::chrono::steady_clock;

        double seconds_since(Clock::time_point start)
        {
            return std::chrono::duration<double>(Clock::now() - start).count();
        }

        std::string fmt(const char *format, double value)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, format, value);
            return buf;
        }

        std::string sci(double value) { return fmt("%.2e", value); }
    }

    Scenario desk_scale_scenario()
    {
        Scenario s;
        s.id = "desk_scale";
        s.bs_antennas = 16;
        s.ris_count = 2;
        s.ris_rows = 8;
        s.ris_cols = 8;
        s.ue_count = 4;
        s.sub_surfaces = 4;
        s.ue_ris.los = LosModel::always;
        s.bs_ris.los = LosModel::always;
        s.drop_count = 50;
        s.mc_blocks = 500;
        return s;
    }

    CriterionReport correlation_accuracy()
    {
        const auto start = Clock::now();
        CriterionReport r{1, "correlation closed form vs quadrature", true, "", 0.0};
        const double deg = std::numbers::pi / 180.0;
        const ArrayGeometry geometry = ArrayGeometry::upa(4, 4, 0.25);
        const std::pair<double, double> directions[] = {{0.0, 0.0}, {30.0, 10.0}};

        std::ostringstream detail;
        detail << "4x4 UPA, spacing 0.25, worst entry relative error:";
        for (double spread : {5.0, 10.0, 15.0})
        {
            double worst = 0.0;
            for (const auto &[az, el] : directions)
            {
                const ScatteringSpec spec{az * deg, el * deg, spread * deg, spread * deg};
                const arma::cx_mat closed = correlation_closed_form(geometry, spec);
                const arma::cx_mat numeric = correlation_numeric(geometry, spec, 96);
                worst = std::max(worst, arma::max(arma::vectorise(arma::abs(closed - numeric) / arma::abs(numeric))));
            }
            detail << " " << spread << "deg=" << fmt("%.4f", worst);
            r.passed = r.passed && worst <= 0.05;
        }
        r.seconds = seconds_since(start);
        r.passed = r.passed && r.seconds < 5.0;
        detail << " (limit 0.05, directions az/el 0/0 and 30/10)";
        r.detail = detail.str();
        return r;
    }

    CriterionReport lmmse_equivalence(std::uint64_t seed)
    {
        const auto start = Clock::now();
        CriterionReport r{2, "LMMSE filters vs sample regression", true, "", 0.0};
        constexpr std::size_t draws = 1000000;
        const double noise_power = 1.0;
        double worst_direct = 0.0;
        double worst_cascaded = 0.0;
        double worst_overall = 0.0;

        std::uint64_t instance = 0;
        for (std::size_t M : {2, 4})
            for (std::size_t N : {2, 4})
            {
                Rng rng = make_stream(seed, {2, instance++});
                ToySpec spec;
                spec.bs_antennas = M;
                spec.ris_rows = N / 2;
                spec.ris_cols = 2;
                spec.surfaces = 1;
                spec.ue_count = 2;
                const ChannelStatistics stats = toy_statistics(spec, rng);
                const std::size_t R = N / 2;
                const PilotPlan plan = PilotPlan::make(spec.ue_count, 1, R, spec.ris_rows, spec.ris_cols, 1.0, 2);

                const RisAssignment assignment = RisAssignment::whole_surfaces(N, spec.ue_count, {0});
                PhaseConfig phases;
                phases.angles.resize(spec.ue_count);
                phases.angles[0] = arma::vec(N);
                for (double &a : phases.angles[0])
                    a = uniform_phase(rng);
                const std::vector<arma::cx_vec> diagonals{phases.surface_diagonal(assignment, 0)};

                const ShortTermLmmse short_term(stats, plan, noise_power);
                const OverallLmmse overall(stats, diagonals, plan.overall_gain(), noise_power);

                std::vector<RegressionAccumulator> direct_acc(spec.ue_count, RegressionAccumulator(M, M));
                std::vector<RegressionAccumulator> overall_acc(spec.ue_count, RegressionAccumulator(M, M));
                std::vector<RegressionAccumulator> cascaded_acc(spec.ue_count * N, RegressionAccumulator(M, M));

                for (std::size_t d = 0; d < draws; ++d)
                {
                    const ChannelRealization real = sample_realization(stats, rng);
                    const ShortTermObservation obs =
                        sufficient_stats_short(simulate_pilot_rx_short(real, plan, noise_power, rng), plan);
                    const std::vector<arma::cx_vec> b = overall_channel(real, assignment, phases);
                    const std::vector<arma::cx_vec> z = simulate_pilot_rx_long(b, plan, noise_power, rng);
                    for (std::size_t k = 0; k < spec.ue_count; ++k)
                    {
                        direct_acc[k].add(real.direct[k], obs.direct[k]);
                        overall_acc[k].add(b[k], z[k]);
                        const arma::cx_mat H = cascaded_channel(real, k, 0);
                        for (std::size_t n = 0; n < N; ++n)
                            cascaded_acc[k * N + n].add(H.col(n), obs.sub_sums[k][plan.sub_surface_of[n]]);
                    }
                }

                for (std::size_t k = 0; k < spec.ue_count; ++k)
                {
                    worst_direct = std::max(worst_direct,
                                            relative_frobenius_error(direct_acc[k].filter(), short_term.direct_filter(k)));
                    worst_overall =
                        std::max(worst_overall, relative_frobenius_error(overall_acc[k].filter(), overall.filter(k)));
                    for (std::size_t n = 0; n < N; ++n)
                        worst_cascaded = std::max(worst_cascaded, relative_frobenius_error(cascaded_acc[k * N + n].filter(),
                                                                                           short_term.cascaded_filter(k, 0, n)));
                }
            }

        r.seconds = seconds_since(start);
        r.passed = worst_direct < 0.01 && worst_cascaded < 0.01 && worst_overall < 0.01 && r.seconds < 120.0;
        r.detail = "M,N in {2,4}, 1e6 draws each, worst filter error direct " + sci(worst_direct) + ", cascaded " +
                   sci(worst_cascaded) + ", overall " + sci(worst_overall) + " (limit 1e-2, 120 s)";
        return r;
    }

    CriterionReport cascaded_second_moment(std::uint64_t seed)
    {
        const auto start = Clock::now();
        CriterionReport r{3, "cascaded channel second moment", true, "", 0.0};
        Rng rng = make_stream(seed, {3});
        ToySpec spec;
        spec.bs_antennas = 4;
        spec.ris_rows = 2;
        spec.ris_cols = 2;
        spec.surfaces = 1;
        spec.ue_count = 1;
        spec.surface_specular = 2;
        const ChannelStatistics stats = toy_statistics(spec, rng);
        const arma::cx_mat closed = cascaded_moment_closed(stats, 0, 0);
        const arma::cx_mat mc = cascaded_moment_mc(stats, 0, 0, 100000, rng);
        const double err = relative_frobenius_error(mc, closed);
        r.seconds = seconds_since(start);
        r.passed = err < 0.05;
        r.detail = "M=4, N=4, two BS-RIS specular paths, 1e5 draws, relative Frobenius error " + sci(err) + " (limit 5e-2)";
        return r;
    }

    CriterionReport phase_solver(std::uint64_t seed)
    {
        const auto start = Clock::now();
        CriterionReport r{4, "relaxed phase solver optimality", true, "", 0.0};
        Rng rng = make_stream(seed, {4});
        constexpr std::size_t instances = 100;
        constexpr arma::uword M = 8;
        constexpr arma::uword N = 6;
        double worst_kkt = 0.0;
        double worst_secular = 0.0;
        double worst_dual = 0.0;
        double worst_margin = arma::datum::inf;
        double ratio_sum = 0.0;
        for (std::size_t t = 0; t < instances; ++t)
        {
            const arma::cx_mat H = complex_gaussian_matrix(M, N, rng);
            const arma::cx_vec h = complex_gaussian_vector(M, rng);
            const RelaxedSolution sol = solve_relaxed(H, h);
            const RelaxedCheck check = check_relaxed(H, h, sol.phi, sol.multiplier);
            worst_kkt = std::max({worst_kkt, check.stationarity, check.feasibility});
            worst_secular = std::max(worst_secular, check.secular);
            worst_dual = std::max(worst_dual, check.dual_gap);

            const double relaxed = relaxed_objective(H, h, sol.phi);
            const double best_random = random_unit_modulus_best(H, h, 10000, rng);
            worst_margin = std::min(worst_margin, (relaxed - best_random) / relaxed);

            const arma::cx_vec projected = arma::exp(std::complex<double>(0.0, 1.0) * ps1_project(sol));
            ratio_sum += relaxed_objective(H, h, projected) / relaxed;
        }
        const double mean_ratio = ratio_sum / static_cast<double>(instances);
        r.seconds = seconds_since(start);
        r.passed = worst_kkt < 1e-8 && worst_dual == 0.0 && worst_secular < 1e-10 * static_cast<double>(N) &&
                   worst_margin >= -1e-12;
        r.detail = "100 instances M=8 N=6, worst KKT residual " + sci(worst_kkt) + ", secular residual " +
                   sci(worst_secular) + " (limit " + sci(1e-10 * static_cast<double>(N)) + "), min margin over 1e4 random " +
                   sci(worst_margin) + ", mean PS-1/relaxed " + fmt("%.4f", mean_ratio) +
                   (mean_ratio >= 0.95 ? "" : " (below 0.95, tracked)");
        return r;
    }

    CriterionReport power_control(std::uint64_t seed)
    {
        const auto start = Clock::now();
        CriterionReport r{5, "max-min power control", true, "", 0.0};
        Rng rng = make_stream(seed, {5});
        const double pmax = 0.1;
        const double tolerance = 1e-4;

        double worst_excess = 0.0;
        std::size_t grid_failures = 0;
        for (std::size_t t = 0; t < 100; ++t)
        {
            const SinrCoefficients c = random_coefficients(2, pmax, rng);
            const PowerSolution sol = maxmin_fixed_point(c, tolerance, 500);
            const GridSearch grid = grid_maxmin_two(c, 1e-3);
            const double gap = std::abs(sol.min_sinr - grid.best_min_sinr);
            const double allowed = grid.cell_variation + tolerance;
            worst_excess = std::max(worst_excess, gap / allowed);
            if (gap > allowed || sol.min_sinr < grid.best_min_sinr - tolerance)
                ++grid_failures;
        }

        double worst_spread = 0.0;
        std::size_t worst_iterations = 0;
        std::size_t balance_failures = 0;
        for (std::size_t t = 0; t < 100; ++t)
        {
            const SinrCoefficients c = random_coefficients(8, pmax, rng);
            const PowerSolution sol = maxmin_fixed_point(c, tolerance, 500);
            worst_spread = std::max(worst_spread, sol.spread);
            worst_iterations = std::max(worst_iterations, sol.iterations);
            const arma::vec sinr = sinr_from_powers(c, sol.powers);
            const bool balanced = sinr.max() - sinr.min() < tolerance;
            if (!sol.converged || !balanced || sol.iterations >= 500 || std::abs(sol.powers.max() - pmax) > 1e-12 * pmax)
                ++balance_failures;
        }
        r.seconds = seconds_since(start);
        r.passed = grid_failures == 0 && balance_failures == 0;
        r.detail = "K=2: " + std::to_string(grid_failures) + "/100 outside grid tolerance (worst gap/tolerance " +
                   fmt("%.3f", worst_excess) + "); K=8: worst spread " + sci(worst_spread) + ", max iterations " +
                   std::to_string(worst_iterations) + ", " + std::to_string(balance_failures) + "/100 unbalanced";
        return r;
    }

    CriterionReport pipeline_exactness(std::uint64_t seed)
    {
        const auto start = Clock::now();
        CriterionReport r{6, "noiseless pipeline exactness", true, "", 0.0};
        Scenario s;
        s.id = "exactness";
        s.bs_antennas = 4;
        s.ris_count = 2;
        s.ris_rows = 2;
        s.ris_cols = 2;
        s.ue_count = 2;
        s.sub_surfaces = 4;
        s.mode = Mode::short_term_single;
        s.estimator = Estimator::lmmse;
        s.phase_scheme = PhaseScheme::ps1;
        s.seed = seed;
        s.validate();

        double worst = 0.0;
        for (std::uint64_t drop = 0; drop < 3; ++drop)
        {
            Rng placement = make_stream(seed, drop, Stream::placement);
            Rng statistics = make_stream(seed, drop, Stream::statistics);
            const ChannelStatistics stats = build_statistics(s, place_ues(s, placement), statistics);
            const RisAssignment assignment = default_assignment(s, stats);
            const Pipeline pipeline(s, stats, assignment, drop, 0.0);
            for (std::uint64_t block = 0; block < 10; ++block)
            {
                BlockStreams streams = block_streams(seed, drop, block);
                const ChannelRealization real = sample_realization(stats, streams.channel);
                const BlockOutcome out = pipeline.run_block(real, streams);
                const std::vector<arma::cx_vec> b = overall_channel(real, assignment, out.phases);
                for (std::size_t k = 0; k < s.ue_count; ++k)
                {
                    worst = std::max(worst, relative_frobenius_error(out.estimates.direct[k], real.direct[k]));
                    for (std::size_t l = 0; l < s.ris_count; ++l)
                        worst = std::max(worst, relative_frobenius_error(out.estimates.cascaded[k * s.ris_count + l],
                                                                         cascaded_channel(real, k, l)));
                    worst = std::max(worst, relative_frobenius_error(out.estimates.overall[k], b[k]));
                    worst = std::max(worst, relative_frobenius_error(out.channels[k], b[k]));
                }
            }
        }
        r.seconds = seconds_since(start);
        r.passed = worst < 1e-9;
        r.detail = "R=N, zero noise, 3 drops x 10 blocks, worst relative error over direct, cascaded and overall " +
                   sci(worst) + " (limit 1e-9)";
        return r;
    }

    CriterionReport trend_ordering(std::uint64_t seed)
    {
        const auto start = Clock::now();
        CriterionReport r{7, "desk-scale SE orderings", true, "", 0.0};
        Scenario base = desk_scale_scenario();
        base.seed = seed;

        auto run = [&](Mode mode, Estimator estimator, PhaseScheme scheme, CombinerKind combiner) {
            Scenario s = base;
            s.mode = mode;
            s.estimator = estimator;
            s.phase_scheme = scheme;
            s.combiner = combiner;
            return run_experiment(s);
        };
        const RunResult ps1 = run(Mode::short_term_single, Estimator::lmmse, PhaseScheme::ps1, CombinerKind::ammse);
        const RunResult conv = run(Mode::conv_mimo, Estimator::lmmse, PhaseScheme::zero, CombinerKind::conv_mmse);
        const RunResult random = run(Mode::short_term_single, Estimator::lmmse, PhaseScheme::random, CombinerKind::ammse);
        const RunResult zero = run(Mode::short_term_single, Estimator::lmmse, PhaseScheme::zero, CombinerKind::ammse);
        const RunResult ls = run(Mode::short_term_single, Estimator::ls, PhaseScheme::ps1, CombinerKind::ammse);

        const bool a = ps1.quantile_10 > conv.quantile_10 && ps1.quantile_50 > conv.quantile_50;
        const bool b = ps1.quantile_50 > random.quantile_50 && ps1.quantile_50 > zero.quantile_50;
        const bool c = ps1.quantile_50 > ls.quantile_50;
        r.seconds = seconds_since(start);
        r.passed = a && b && c && r.seconds < 1800.0;

        auto q = [](const RunResult &x) { return fmt("%.3f", x.quantile_10) + "/" + fmt("%.3f", x.quantile_50); };
        r.detail = std::string("q10/q50 PS-1+AMMSE ") + q(ps1) + ", Conv+MMSE " + q(conv) + ", random " + q(random) +
                   ", zero " + q(zero) + ", LS " + q(ls) + "; (a) " + (a ? "ok" : "violated") + " (b) " +
                   (b ? "ok" : "violated") + " (c) " + (c ? "ok" : "violated");
        return r;
    }

    CriterionReport determinism(std::uint64_t seed)
    {
        const auto start = Clock::now();
        CriterionReport r{8, "bit-identical repeated runs", true, "", 0.0};
        Scenario base = desk_scale_scenario();
        base.seed = seed;
        base.drop_count = 3;
        base.mc_blocks = 100;

        struct Variant
        {
            Mode mode;
            PhaseScheme scheme;
            CombinerKind combiner;
        };
        const Variant variants[] = {{Mode::short_term_single, PhaseScheme::ps1, CombinerKind::ammse},
                                    {Mode::long_term, PhaseScheme::longterm, CombinerKind::ammse},
                                    {Mode::two_stage, PhaseScheme::ps1, CombinerKind::rzf},
                                    {Mode::conv_mimo, PhaseScheme::zero, CombinerKind::conv_mmse}};

        auto canonical = [](RunResult result) {
            result.metadata.elapsed_seconds = 0.0;
            return results_to_json(result);
        };
        auto same_bits = [](const std::vector<double> &x, const std::vector<double> &y) {
            return x.size() == y.size() && (x.empty() || std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
        };

        std::size_t mismatches = 0;
        std::size_t comparisons = 0;
        for (const Variant &v : variants)
        {
            Scenario s = base;
            s.mode = v.mode;
            s.phase_scheme = v.scheme;
            s.combiner = v.combiner;
            s.threads = 1;
            const RunResult first = run_experiment(s);
            const RunResult second = run_experiment(s);
            s.threads = 3;
            const RunResult parallel = run_experiment(s);
            comparisons += 2;
            mismatches += canonical(first) != canonical(second);
            mismatches += canonical(first) != canonical(parallel);
            for (std::size_t d = 0; d < first.se.size(); ++d)
            {
                ++comparisons;
                mismatches += !same_bits(first.se[d], parallel.se[d]);
            }

            const DropResult serial_drop = run_drop(s, 0, 1);
            const DropResult threaded_drop = run_drop(s, 0, 3);
            ++comparisons;
            mismatches += !(same_bits(serial_drop.se, threaded_drop.se) && same_bits(serial_drop.sinr, threaded_drop.sinr) &&
                            same_bits(serial_drop.powers, threaded_drop.powers));
        }
        r.seconds = seconds_since(start);
        r.passed = mismatches == 0;
        r.detail = std::to_string(comparisons) + " comparisons over 4 modes (1 vs 1 vs 3 threads, drop- and block-level), " +
                   std::to_string(mismatches) + " mismatches";
        return r;
    }

    CriterionReport run_criterion(int id, std::uint64_t seed)
    {
        switch (id)
        {
        case 1:
            return correlation_accuracy();
        case 2:
            return lmmse_equivalence(seed);
        case 3:
            return cascaded_second_moment(seed);
        case 4:
            return phase_solver(seed);
        case 5:
            return power_control(seed);
        case 6:
            return pipeline_exactness(seed);
        case 7:
            return trend_ordering(seed);
        case 8:
            return determinism(seed);
        default:
            throw ConfigError("unknown criterion " + std::to_string(id) + " (valid: 1.." + std::to_string(criterion_count) + ")");
        }
    }

    std::string format_report(const CriterionReport &report)
    {
        return "criterion " + std::to_string(report.id) + (report.passed ? " PASS " : " FAIL ") + report.title + ": " +
               report.detail + " (" + fmt("%.1f", report.seconds) + " s)";
    }
}
