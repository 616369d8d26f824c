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

#include "rismimo/rng.hpp"

#include <cmath>
#include <numbers>

namespace rismimo
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }
    }

    Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t state = splitmix64(seed);
        for (std::uint64_t p : path)
            state = splitmix64(state ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
        return Rng(state);
    }

    Rng make_stream(std::uint64_t seed, std::uint64_t drop, Stream stream, std::uint64_t index)
    {
        return make_stream(seed, {drop, static_cast<std::uint64_t>(stream), index});
    }

    double uniform(Rng &rng, double lo, double hi)
    {
        std::uniform_real_distribution<double> dist(lo, hi);
        return dist(rng);
    }

    double uniform_phase(Rng &rng)
    {
        return uniform(rng, 0.0, 2.0 * std::numbers::pi);
    }

    double standard_normal(Rng &rng)
    {
        std::normal_distribution<double> dist(0.0, 1.0);
        return dist(rng);
    }

    std::complex<double> complex_gaussian(Rng &rng)
    {
        std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
        const double re = dist(rng);
        const double im = dist(rng);
        return {re, im};
    }

    arma::cx_vec complex_gaussian_vector(arma::uword n, Rng &rng)
    {
        arma::cx_vec out(n);
        std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
        for (arma::uword i = 0; i < n; ++i)
        {
            const double re = dist(rng);
            const double im = dist(rng);
            out(i) = {re, im};
        }
        return out;
    }

    arma::cx_mat complex_gaussian_matrix(arma::uword rows, arma::uword cols, Rng &rng)
    {
        arma::cx_mat out(rows, cols);
        std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
        for (arma::uword i = 0; i < out.n_elem; ++i)
        {
            const double re = dist(rng);
            const double im = dist(rng);
            out(i) = {re, im};
        }
        return out;
    }
}
