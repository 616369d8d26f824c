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
#include "rismimo/phase_select.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/validation/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace rismimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Relaxed solution satisfies the optimality conditions", "[phase]")
{
    Rng rng = make_stream(31, {1});
    for (int trial = 0; trial < 50; ++trial)
    {
        const arma::cx_mat H = complex_gaussian_matrix(8, 6, rng);
        const arma::cx_vec h = complex_gaussian_vector(8, rng);
        const RelaxedSolution sol = solve_relaxed(H, h);
        const validation::RelaxedCheck chk = validation::check_relaxed(H, h, sol.phi, sol.multiplier);
        CHECK(chk.stationarity < 1e-8);
        CHECK(chk.feasibility < 1e-10);
        CHECK(chk.dual_gap == 0.0);
        CHECK(sol.multiplier > sol.eigenvalues.max());
        CHECK_FALSE(sol.hard_case);
        CHECK(sol.secular_residual < 1e-9);
    }
}

TEST_CASE("Relaxed optimum bounds unit-modulus configurations", "[phase]")
{
    Rng rng = make_stream(32, {1});
    const arma::cx_mat H = complex_gaussian_matrix(6, 4, rng);
    const arma::cx_vec h = complex_gaussian_vector(6, rng);
    const RelaxedSolution sol = solve_relaxed(H, h);
    const double relaxed = relaxed_objective(H, h, sol.phi);
    const double sampled = validation::random_unit_modulus_best(H, h, 20000, rng);
    CHECK(relaxed >= sampled);

    const arma::vec angles = ps1_project(sol);
    REQUIRE(angles.n_elem == 4);
    const arma::cx_vec phi = arma::exp(std::complex<double>(0.0, 1.0) * arma::cx_vec(angles, arma::zeros(4)));
    CHECK(relaxed_objective(H, h, phi) <= relaxed * (1.0 + 1e-12));
    CHECK(relaxed_objective(H, h, phi) > relaxed_objective(H, h, arma::zeros<arma::cx_vec>(4)));
}

TEST_CASE("Relaxed solution with a single element", "[phase]")
{
    arma::cx_mat H(2, 1);
    H(0, 0) = {1.0, 1.0};
    H(1, 0) = {0.0, -2.0};
    const arma::cx_vec h{{3.0, 0.0}, {0.0, 1.0}};
    const RelaxedSolution sol = solve_relaxed(H, h);
    const std::complex<double> b = arma::cdot(H.col(0), h);
    CHECK_THAT(std::abs(sol.phi(0)), WithinAbs(1.0, 1e-12));
    CHECK_THAT(std::arg(sol.phi(0)), WithinAbs(std::arg(b), 1e-12));
    CHECK_THAT(ps_per_element(H, h)(0), WithinAbs(std::arg(b), 1e-14));
}

TEST_CASE("Zero linear term falls back to the dominant eigenvector", "[phase]")
{
    const arma::cx_mat H = arma::diagmat(arma::cx_vec{{1.0, 0.0}, {3.0, 0.0}, {2.0, 0.0}});
    const arma::cx_vec h(3, arma::fill::zeros);
    const RelaxedSolution sol = solve_relaxed(H, h);
    CHECK(sol.linear_term_zero);
    CHECK_THAT(std::abs(sol.phi(1)), WithinAbs(std::sqrt(3.0), 1e-12));
    CHECK_THAT(relaxed_objective(H, h, sol.phi), WithinRel(27.0, 1e-12));
    CHECK(arma::all(ps_per_element(H, h) == 0.0));
}

TEST_CASE("Hard case: linear term orthogonal to the dominant eigenvector", "[phase]")
{
    const arma::cx_mat H = arma::diagmat(arma::cx_vec{{2.0, 0.0}, {0.5, 0.0}});
    const arma::cx_vec h{{0.0, 0.0}, {0.1, 0.0}};
    const RelaxedSolution sol = solve_relaxed(H, h);
    CHECK(sol.hard_case);
    CHECK_THAT(arma::norm(sol.phi), WithinRel(std::sqrt(2.0), 1e-10));
    const validation::RelaxedCheck chk = validation::check_relaxed(H, h, sol.phi, sol.multiplier);
    CHECK(chk.stationarity < 1e-8);
    CHECK(chk.dual_gap == 0.0);
}

TEST_CASE("Per-element selection aligns each cascaded column with the direct channel", "[phase]")
{
    Rng rng = make_stream(33, {1});
    const arma::cx_mat H = complex_gaussian_matrix(5, 3, rng);
    const arma::cx_vec h = complex_gaussian_vector(5, rng);
    const arma::vec angles = ps_per_element(H, h);
    for (arma::uword n = 0; n < 3; ++n)
    {
        const std::complex<double> term = arma::cdot(h, H.col(n) * std::polar(1.0, angles(n)));
        CHECK(std::abs(term.imag()) < 1e-12);
        CHECK(term.real() > 0.0);
    }
    CHECK_THROWS_AS(ps_per_element(H, arma::cx_vec(4)), DimensionError);
}

TEST_CASE("Configurations cover every assigned element", "[phase]")
{
    Rng rng = make_stream(34, {1});
    validation::ToySpec spec;
    spec.surfaces = 2;
    spec.ue_count = 3;
    const ChannelStatistics stats = validation::toy_statistics(spec, rng);
    const RisAssignment assignment = RisAssignment::whole_surfaces(4, 3, {2, 0});

    const PhaseConfig lt = ps_longterm(stats, assignment);
    CHECK_NOTHROW(lt.check(assignment));
    CHECK(lt.angles[1].n_elem == 0);
    CHECK(arma::is_finite(lt.angles[0]));

    const PhaseConfig zero = ps_zero(assignment);
    CHECK(arma::all(zero.angles[2] == 0.0));
    const PhaseConfig random = ps_random(assignment, rng);
    CHECK_NOTHROW(random.check(assignment));
    CHECK(arma::all(random.angles[0] >= 0.0 && random.angles[0] < 2.0 * std::numbers::pi));

    const ChannelRealization real = sample_realization(stats, rng);
    std::vector<arma::cx_mat> cascaded;
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 2; ++l)
            cascaded.push_back(cascaded_channel(real, k, l));
    CHECK(arma::norm(gather_assigned(cascaded, assignment, 1, 2) - cascaded_assigned(real, assignment, 1, 2), "fro") == 0.0);

    const PhaseConfig ps1 = select_from_estimates(real.direct, cascaded, assignment, false);
    CHECK_NOTHROW(ps1.check(assignment));
    const arma::cx_mat H = cascaded_assigned(real, assignment, 2, 2);
    const RelaxedSolution relaxed = solve_relaxed(H, real.direct[2]);
    CHECK(arma::abs(ps1.angles[2] - ps1_project(relaxed)).max() < 1e-12);

    const PhaseConfig pe = select_from_estimates(real.direct, cascaded, assignment, true);
    CHECK(arma::abs(pe.angles[0] - ps_per_element(cascaded_assigned(real, assignment, 0, 0), real.direct[0])).max() < 1e-12);
}
