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

#ifndef RISMIMO_RNG_HPP
#define RISMIMO_RNG_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace rismimo
{
    using Rng = std::mt19937_64;

    // Named sub-streams. Every random quantity in a run is drawn from exactly one of these,
    // keyed by (scenario seed, drop, stream, index), so results do not depend on scheduling.
    enum class Stream : std::uint64_t
    {
        placement = 1,
        statistics = 2,
        channel = 3,
        noise = 4,
        phases = 5,
        error_covariance = 6
    };

    // Deterministic generator for the given key path (splitmix64 mixing of all components)
    Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);
    Rng make_stream(std::uint64_t seed, std::uint64_t drop, Stream stream, std::uint64_t index = 0);

    double uniform(Rng &rng, double lo, double hi);
    double uniform_phase(Rng &rng); // U[0, 2*pi)
    double standard_normal(Rng &rng);

    std::complex<double> complex_gaussian(Rng &rng); // CN(0, 1)
    arma::cx_vec complex_gaussian_vector(arma::uword n, Rng &rng);
    arma::cx_mat complex_gaussian_matrix(arma::uword rows, arma::uword cols, Rng &rng);
}

#endif
