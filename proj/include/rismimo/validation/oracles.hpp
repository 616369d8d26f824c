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

#ifndef RISMIMO_VALIDATION_ORACLES_HPP
#define RISMIMO_VALIDATION_ORACLES_HPP

#include "rismimo/channel_model.hpp"
#include "rismimo/power_control.hpp"
#include "rismimo/rng.hpp"

#include <armadillo>
#include <cstddef>

namespace rismimo::validation
{
    // Small random instance of the channel statistics with O(1) gains
    struct ToySpec
    {
        std::size_t bs_antennas = 4;
        std::size_t ris_rows = 2;
        std::size_t ris_cols = 2;
        std::size_t surfaces = 1;
        std::size_t ue_count = 2;
        std::size_t ue_specular = 1;      // specular paths of the UE-BS and UE-RIS links
        std::size_t surface_specular = 2; // specular paths of the BS-RIS links, the first one fixed
    };

    ChannelStatistics toy_statistics(const ToySpec &spec, Rng &rng);

    // Sample linear regression x ~ W z (zero mean, no intercept) from joint draws
    class RegressionAccumulator
    {
    public:
        RegressionAccumulator() = default;
        RegressionAccumulator(arma::uword target_dim, arma::uword observation_dim);

        void add(const arma::cx_vec &x, const arma::cx_vec &z);
        std::size_t draws() const { return draws_; }

        // W = S_xz S_zz^{-1}
        arma::cx_mat filter();

    private:
        void flush();

        arma::cx_mat sxz_;
        arma::cx_mat szz_;
        arma::cx_mat xbuf_;
        arma::cx_mat zbuf_;
        arma::uword fill_ = 0;
        std::size_t draws_ = 0;
    };

    // Sample second moment E{x x^H} accumulated in batches
    class MomentAccumulator
    {
    public:
        explicit MomentAccumulator(arma::uword dim);

        void add(const arma::cx_vec &x);
        arma::cx_mat mean();

    private:
        void flush();

        arma::cx_mat sum_;
        arma::cx_mat buf_;
        arma::uword fill_ = 0;
        std::size_t draws_ = 0;
    };

    // Block matrix with blocks E{[H]_{:n} [H]_{:n'}^H} from the closed form, i.e. E{vec(H) vec(H)^H}
    arma::cx_mat cascaded_moment_closed(const ChannelStatistics &stats, std::size_t k, std::size_t l);

    // Monte-Carlo estimate of E{vec(H_kl) vec(H_kl)^H}
    arma::cx_mat cascaded_moment_mc(const ChannelStatistics &stats, std::size_t k, std::size_t l, std::size_t draws,
                                    Rng &rng);

    // Optimality conditions of the relaxed phase problem, recomputed independently
    struct RelaxedCheck
    {
        double stationarity = 0.0; // ||H^H(h + H phi) - gamma phi|| relative to the data scale
        double feasibility = 0.0;  // | ||phi||^2 - N | / N
        double dual_gap = 0.0;     // max(0, lambda_max - gamma) relative to lambda_max
        double secular = 0.0;      // | sum |u^H b|^2 / (gamma - lambda)^2 - N |
    };

    RelaxedCheck check_relaxed(const arma::cx_mat &H, const arma::cx_vec &h, const arma::cx_vec &phi, double multiplier);

    // Best objective ||h + H phi||^2 over random unit-modulus candidates
    double random_unit_modulus_best(const arma::cx_mat &H, const arma::cx_vec &h, std::size_t candidates, Rng &rng);

    struct GridSearch
    {
        double best_min_sinr = 0.0;
        arma::vec best_powers;
        double cell_variation = 0.0; // largest change of the min-SINR between the best point and its grid neighbours
    };

    // Exhaustive max-min search for two UEs over {0, step, ..., p_max}^2 with step = fraction * p_max
    GridSearch grid_maxmin_two(const SinrCoefficients &coeffs, double fraction);

    // Random SINR coefficients with g_kk >= a_k
    SinrCoefficients random_coefficients(std::size_t ue_count, double max_power, Rng &rng);
}

#endif
