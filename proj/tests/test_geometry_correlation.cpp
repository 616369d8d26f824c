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

#include "rismimo/array_geometry.hpp"
#include "rismimo/correlation.hpp"
#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/validation/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace rismimo;
using Catch::Matchers::WithinAbs;

static constexpr double deg = std::numbers::pi / 180.0;

TEST_CASE("Array response: reference element and ULA phases", "[geometry]")
{
    const ArrayGeometry ula = ArrayGeometry::ula(2, 0.5);
    const ArrayGeometry upa = ArrayGeometry::upa(4, 3, 0.25);
    for (double az : {-1.0, 0.0, 0.7})
        for (double el : {-0.3, 0.0, 0.4})
        {
            const arma::cx_vec a = array_response(upa, az, el);
            CHECK(std::abs(a(0) - std::complex<double>(1.0, 0.0)) < 1e-15);
            CHECK(arma::max(arma::abs(arma::abs(a) - 1.0)) < 1e-14);
            const arma::cx_vec b = array_response(ula, 0.0, el);
            CHECK(std::abs(b(1) - std::complex<double>(1.0, 0.0)) < 1e-15);
        }

    const arma::cx_vec c = array_response(ula, std::numbers::pi / 2.0, 0.0);
    CHECK_THAT(c(1).real(), WithinAbs(-1.0, 1e-14));
    CHECK_THAT(c(1).imag(), WithinAbs(0.0, 1e-14));
}

TEST_CASE("Array geometry: UPA indexing and validation", "[geometry]")
{
    const ArrayGeometry g = ArrayGeometry::upa(3, 2, 0.25);
    REQUIRE(g.size() == 6);
    CHECK(g.horizontal[4] == 0.25);
    CHECK(g.vertical[4] == 0.25);
    CHECK(g.horizontal[2] == 0.5);
    CHECK(g.vertical[2] == 0.0);

    ArrayGeometry bad = g;
    bad.vertical.pop_back();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    ArrayGeometry shifted = g;
    shifted.horizontal[0] = 0.1;
    CHECK_THROWS_AS(shifted.validate(), ConfigError);
    CHECK_THROWS_AS(ArrayGeometry::upa(0, 2, 0.5), ConfigError);
}

TEST_CASE("Local angles follow the array_response convention", "[geometry]")
{
    const ArrayFrame frame = ArrayFrame::facing({0.0, 0.0, 10.0}, 0.0, 1.0, {100.0, 0.0, 0.0});
    CHECK(frame.boresight_x == 1.0);

    const LocalAngles broadside = local_angles(frame, {100.0, 0.0, 10.0});
    CHECK_THAT(broadside.azimuth, WithinAbs(0.0, 1e-15));
    CHECK_THAT(broadside.elevation, WithinAbs(0.0, 1e-15));

    const Point3 target{30.0, 40.0, -2.0};
    const LocalAngles a = local_angles(frame, target);
    const double r = distance(frame.position, target);
    CHECK_THAT(std::sin(a.azimuth) * std::cos(a.elevation), WithinAbs(40.0 / r, 1e-14));
    CHECK_THAT(std::sin(a.elevation), WithinAbs(-12.0 / r, 1e-14));
    CHECK_THROWS_AS(local_angles(frame, frame.position), ConfigError);
}

TEST_CASE("Gauss-Hermite rule integrates polynomials exactly", "[correlation]")
{
    for (std::size_t n : {1, 2, 5, 32, 96, 128})
    {
        const GaussHermiteRule rule = gauss_hermite(n);
        REQUIRE(rule.nodes.n_elem == n);
        CHECK_THAT(arma::accu(rule.weights), WithinAbs(std::sqrt(std::numbers::pi), 1e-12));
        if (n >= 3)
        {
            const double second = arma::accu(rule.weights % arma::square(rule.nodes));
            const double fourth = arma::accu(rule.weights % arma::pow(rule.nodes, 4));
            CHECK_THAT(second, WithinAbs(std::sqrt(std::numbers::pi) / 2.0, 1e-12));
            CHECK_THAT(fourth, WithinAbs(3.0 * std::sqrt(std::numbers::pi) / 4.0, 1e-11));
        }
        CHECK(rule.nodes.is_sorted());
    }
    CHECK_THROWS_AS(gauss_hermite(0), ConfigError);
}

TEST_CASE("Closed-form correlation: unit diagonal, Hermitian, PSD", "[correlation]")
{
    const ArrayGeometry g = ArrayGeometry::upa(4, 4, 0.25);
    for (double spread : {5.0, 10.0, 15.0})
    {
        const ScatteringSpec spec{30.0 * deg, 10.0 * deg, spread * deg, spread * deg};
        const arma::cx_mat R = correlation_closed_form(g, spec);
        CHECK(arma::max(arma::abs(R.diag() - 1.0)) < 1e-12);
        CHECK(is_hermitian(R, 1e-14));
        CHECK(min_eigenvalue(R) >= -1e-9 * std::real(arma::trace(R)));
    }
}

TEST_CASE("Closed-form correlation matches quadrature on a 2x2 UPA at 5 degrees", "[correlation]")
{
    const ArrayGeometry g = ArrayGeometry::upa(2, 2, 0.25);
    const ScatteringSpec spec{30.0 * deg, 10.0 * deg, 5.0 * deg, 5.0 * deg};
    const arma::cx_mat closed = correlation_closed_form(g, spec);
    const arma::cx_mat numeric = correlation_numeric(g, spec, 96);
    CHECK(arma::max(arma::vectorise(arma::abs(closed - numeric) / arma::abs(numeric))) < 0.02);
}

TEST_CASE("Closed-form correlation error shrinks with the angular spread", "[correlation]")
{
    const ArrayGeometry g = ArrayGeometry::upa(4, 4, 0.25);
    double previous = arma::datum::inf;
    for (double spread : {15.0, 10.0, 5.0, 1.0})
    {
        const ScatteringSpec spec{0.0, 0.0, spread * deg, spread * deg};
        const double err = relative_frobenius_error(correlation_closed_form(g, spec), correlation_numeric(g, spec));
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous < 1e-4);
}

TEST_CASE("Zero spreads: point mass limits and the degenerate-spread error", "[correlation]")
{
    const ArrayGeometry g = ArrayGeometry::upa(3, 2, 0.25);
    const double az = 20.0 * deg, el = -5.0 * deg;
    const arma::cx_vec a = array_response(g, az, el);
    const arma::cx_mat aa = a * a.t();

    const ScatteringSpec none{az, el, 0.0, 0.0};
    CHECK_THROWS_AS(correlation_closed_form(g, none), DegenerateSpreadError);
    CHECK(arma::norm(correlation_closed_form(g, none, ZeroSpread::point_mass) - aa, "fro") < 1e-12);
    CHECK(arma::norm(correlation_numeric(g, none, 32) - aa, "fro") < 1e-12);

    const ScatteringSpec tiny{az, el, 1e-7, 1e-7};
    CHECK(arma::norm(correlation_closed_form(g, tiny) - aa, "fro") < 1e-9);

    const ScatteringSpec only_elevation{az, el, 0.0, 10.0 * deg};
    const arma::cx_mat closed = correlation_closed_form(g, only_elevation, ZeroSpread::point_mass);
    const arma::cx_mat numeric = correlation_numeric(g, only_elevation, 96);
    CHECK(relative_frobenius_error(closed, numeric) < 0.02);
}

TEST_CASE("Quadrature converges between 64 and 128 points at 15 degrees", "[correlation]")
{
    const ArrayGeometry g = ArrayGeometry::upa(4, 4, 0.25);
    const ScatteringSpec spec{30.0 * deg, 10.0 * deg, 15.0 * deg, 15.0 * deg};
    const arma::cx_mat a = correlation_numeric(g, spec, 64);
    const arma::cx_mat b = correlation_numeric(g, spec, 128);
    CHECK(arma::abs(a - b).max() < 1e-6);
    CHECK(arma::max(arma::abs(a.diag() - 1.0)) < 1e-12);
    CHECK_THROWS_AS(correlation_numeric(g, spec, 16), ConfigError);
}

TEST_CASE("Kronecker sampler: covariance and degenerate inputs", "[correlation]")
{
    Rng rng = make_stream(11, {1});
    const arma::uword M = 3, N = 2;
    const arma::cx_mat eye_m = arma::eye<arma::cx_mat>(M, M);
    const arma::cx_mat eye_n = arma::eye<arma::cx_mat>(N, N);

    validation::MomentAccumulator white(M * N);
    const KroneckerSampler sampler(eye_m, eye_n);
    for (int d = 0; d < 100000; ++d)
        white.add(arma::vectorise(sampler.sample(rng)));
    CHECK(arma::abs(white.mean() - arma::eye<arma::cx_mat>(M * N, M * N)).max() < 0.05);

    CHECK(arma::norm(kronecker_nonspecular_sample(eye_m, arma::zeros<arma::cx_mat>(N, N), rng), "fro") == 0.0);

    const ArrayGeometry bs = ArrayGeometry::ula(M, 0.5);
    const ArrayGeometry ris = ArrayGeometry::upa(2, 1, 0.25);
    const arma::cx_mat Rbs = 2.0 * correlation_closed_form(bs, {0.3, 0.1, 15.0 * deg, 15.0 * deg});
    const arma::cx_mat Rris = correlation_closed_form(ris, {-0.4, 0.2, 15.0 * deg, 15.0 * deg});
    const KroneckerSampler correlated(Rbs, Rris);
    validation::MomentAccumulator acc(M * N);
    for (int d = 0; d < 100000; ++d)
        acc.add(arma::vectorise(correlated.sample(rng)));
    const arma::cx_mat moment = acc.mean();
    for (arma::uword n = 0; n < N; ++n)
        for (arma::uword n2 = 0; n2 < N; ++n2)
        {
            const arma::cx_mat block = moment.submat(n * M, n2 * M, n * M + M - 1, n2 * M + M - 1);
            CHECK(relative_frobenius_error(block, Rris(n2, n) * Rbs) < 0.05);
        }

    arma::cx_mat indefinite = eye_m;
    indefinite(0, 0) = -1.0;
    CHECK_THROWS_AS(KroneckerSampler(indefinite, eye_n), NotPsdError);
}

TEST_CASE("Linear algebra helpers", "[linalg]")
{
    Rng rng = make_stream(5, {2});
    const arma::cx_mat X = complex_gaussian_matrix(5, 3, rng);
    const arma::cx_mat P = X * X.t();

    const arma::cx_mat S = psd_sqrt(P);
    CHECK(relative_frobenius_error(S * S, P) < 1e-12);

    const PsdRepair kept = psd_repair(P + arma::eye<arma::cx_mat>(5, 5));
    CHECK(kept.clamped_mass == 0.0);
    arma::cx_mat D = arma::diagmat(arma::cx_vec{2.0, -0.5, 1.0});
    const PsdRepair fixed = psd_repair(D);
    CHECK_THAT(fixed.clamped_mass, WithinAbs(0.5, 1e-14));
    CHECK(min_eigenvalue(fixed.matrix) >= 0.0);

    const arma::cx_mat A = P + arma::eye<arma::cx_mat>(5, 5);
    CHECK(relative_frobenius_error(hermitian_inverse(A) * A, arma::eye<arma::cx_mat>(5, 5)) < 1e-12);
    const HermitianSolver solver(A);
    const arma::cx_vec b = complex_gaussian_vector(5, rng);
    CHECK(relative_frobenius_error(A * solver.solve(b), b) < 1e-13);
    const arma::cx_mat pinv = hermitian_inverse(P);
    CHECK(relative_frobenius_error(P * pinv * P, P) < 1e-9);

    const arma::cx_mat iso = 3.0 * arma::eye<arma::cx_mat>(4, 4);
    const DominantEigenpair e = dominant_eigenpair(iso);
    CHECK(e.multiplicity == 4);
    CHECK_THAT(e.vector(0).real(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(e.value, WithinAbs(3.0, 1e-12));
}
