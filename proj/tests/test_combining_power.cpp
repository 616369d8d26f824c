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

#include "rismimo/combining.hpp"
#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/power_control.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/validation/oracles.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace rismimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    std::vector<arma::cx_vec> random_channels(std::size_t M, std::size_t K, Rng &rng)
    {
        std::vector<arma::cx_vec> out;
        for (std::size_t k = 0; k < K; ++k)
            out.push_back(complex_gaussian_vector(M, rng));
        return out;
    }
}

TEST_CASE("Combiners reduce to their closed forms", "[combining]")
{
    Rng rng = make_stream(41, {1});
    const auto b = random_channels(4, 3, rng);
    const arma::vec p{0.1, 0.05, 0.2};
    const double s2 = 0.3;

    const auto mr = combine_mr(b);
    CHECK(arma::norm(mr[1] - b[1]) == 0.0);

    arma::cx_mat A = s2 * arma::eye<arma::cx_mat>(4, 4);
    for (std::size_t i = 0; i < 3; ++i)
        A += p(i) * b[i] * b[i].t();
    const auto rzf = combine_rzf(b, p, s2);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(arma::norm(A * rzf[k] - b[k]) < 1e-12);

    const std::vector<arma::cx_mat> zero(3, arma::zeros<arma::cx_mat>(4, 4));
    const auto ammse0 = combine_ammse(b, zero, p, s2);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(arma::norm(ammse0[k] - p(k) * rzf[k]) < 1e-12 * arma::norm(ammse0[k]));

    std::vector<arma::cx_mat> C;
    for (std::size_t k = 0; k < 3; ++k)
    {
        const arma::cx_mat X = complex_gaussian_matrix(4, 2, rng);
        C.push_back(0.1 * X * X.t());
    }
    arma::cx_mat B = A;
    for (std::size_t i = 0; i < 3; ++i)
        B += p(i) * C[i];
    const auto ammse = combine_ammse(b, C, p, s2);
    CHECK(arma::norm(B * ammse[2] - p(2) * b[2]) < 1e-12);
    const auto dispatched = combine(CombinerKind::conv_mmse, b, C, p, s2);
    CHECK(arma::norm(dispatched[2] - ammse[2]) < 1e-14);
}

TEST_CASE("SINR accumulator: deterministic channels and merging", "[combining]")
{
    Rng rng = make_stream(42, {1});
    const auto b = random_channels(3, 2, rng);
    const auto v = random_channels(3, 2, rng);

    SinrAccumulator one(2), two(2), both(2);
    one.add(v, b);
    two.add(v, b);
    both.add(v, b);
    both.add(v, b);
    one.merge(two);
    CHECK(one.draws() == 2);
    CHECK(arma::norm(one.mean_cross() - both.mean_cross(), "fro") < 1e-15);

    const SinrCoefficients c = one.coefficients(0.5, 0.1);
    CHECK_THAT(c.signal(0), WithinRel(std::norm(arma::cdot(v[0], b[0])), 1e-13));
    CHECK_THAT(c.cross(0, 1), WithinRel(std::norm(arma::cdot(v[0], b[1])), 1e-13));
    CHECK_THAT(c.noise(1), WithinRel(0.5 * std::pow(arma::norm(v[1]), 2), 1e-13));
    CHECK(c.max_power == 0.1);

    CHECK_THROWS_AS(one.add({v[0]}, b), DimensionError);
}

TEST_CASE("Spectral efficiency", "[combining]")
{
    const arma::vec se = spectral_efficiency(arma::vec{0.0, 1.0, 3.0}, 0.5);
    CHECK(se(0) == 0.0);
    CHECK_THAT(se(1), WithinRel(0.5, 1e-15));
    CHECK_THAT(se(2), WithinRel(1.0, 1e-15));
}

TEST_CASE("SINR from powers", "[power]")
{
    SinrCoefficients c;
    c.signal = {4.0, 1.0};
    c.cross = {{5.0, 1.0}, {2.0, 1.5}};
    c.noise = {0.5, 0.25};
    c.max_power = 1.0;
    const arma::vec s = sinr_from_powers(c, {1.0, 0.5});
    CHECK_THAT(s(0), WithinRel(4.0 / (1.0 + 0.5 + 0.5), 1e-15));
    CHECK_THAT(s(1), WithinRel(0.5 / (2.0 + 0.25 + 0.25), 1e-15));

    const PowerSolution full = full_power(c);
    CHECK(arma::all(full.powers == 1.0));
    CHECK_THAT(full.min_sinr, WithinRel(arma::min(sinr_from_powers(c, {1.0, 1.0})), 1e-15));

    SinrCoefficients bad = c;
    bad.noise = {0.5};
    CHECK_THROWS_AS(bad.validate(), DimensionError);
    bad = c;
    bad.signal(0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("Max-min powers balance the SINR", "[power]")
{
    Rng rng = make_stream(43, {1});
    for (int trial = 0; trial < 20; ++trial)
    {
        const SinrCoefficients c = validation::random_coefficients(6, 0.1, rng);
        const PowerSolution sol = maxmin_fixed_point(c, 1e-6, 2000);
        CHECK(sol.converged);
        CHECK_THAT(sol.powers.max(), WithinRel(0.1, 1e-12));
        CHECK(sol.spread < 1e-6);
        CHECK(sol.min_sinr >= full_power(c).min_sinr * (1.0 - 1e-9));
        CHECK(arma::abs(sol.sinr - sinr_from_powers(c, sol.powers)).max() < 1e-12 * sol.sinr.max());
    }
}

TEST_CASE("Max-min powers agree with a two-user grid search", "[power]")
{
    Rng rng = make_stream(44, {1});
    for (int trial = 0; trial < 10; ++trial)
    {
        const SinrCoefficients c = validation::random_coefficients(2, 0.1, rng);
        const PowerSolution sol = maxmin_fixed_point(c, 1e-8, 5000);
        const validation::GridSearch grid = validation::grid_maxmin_two(c, 1e-3);
        CHECK(std::abs(sol.min_sinr - grid.best_min_sinr) <= grid.cell_variation + 1e-6 * grid.best_min_sinr);
    }
}

TEST_CASE("UEs without signal gain are excluded from balancing", "[power]")
{
    SinrCoefficients c;
    c.signal = {2.0, 0.0, 1.0};
    c.cross = {{3.0, 0.1, 0.2}, {0.1, 1.0, 0.1}, {0.3, 0.2, 1.5}};
    c.noise = {0.1, 0.1, 0.1};
    c.max_power = 1.0;
    const PowerSolution sol = maxmin_fixed_point(c);
    REQUIRE(sol.excluded.n_elem == 1);
    CHECK(sol.excluded(0) == 1);
    CHECK(sol.powers(1) == 1.0);
    CHECK(sol.converged);
    CHECK(std::abs(sol.sinr(0) - sol.sinr(2)) < 1e-4 * sol.sinr.max());
}
