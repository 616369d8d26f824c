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

#ifndef RISMIMO_PILOT_TRAINING_HPP
#define RISMIMO_PILOT_TRAINING_HPP

#include "rismimo/channel_model.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/ris_config.hpp"
#include "rismimo/rng.hpp"

#include <armadillo>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace rismimo
{
    // Pilot sequences, RIS training schedule and sub-surface partition.
    struct PilotPlan
    {
        std::size_t ue_count = 0;             // K
        std::size_t surfaces = 0;             // L
        std::size_t sub_surfaces = 1;         // R
        std::size_t elements_per_surface = 0; // N
        double pilot_power = 0.0;             // eta
        std::size_t repetitions = 1;          // overall-channel protocol repetitions

        arma::cx_mat ue_pilots; // K x K, orthonormal columns
        arma::cx_mat schedule;  // (LR+1) x LR, column l * R + r holds the training phases of sub-surface (l, r)
        std::vector<std::vector<std::size_t>> sub_surface_elements; // R sets of local element indices
        std::vector<std::size_t> sub_surface_of;                    // N entries

        // The RIS is (rows x cols) with element index v * cols + h; tiles are as square as the divisors allow
        static PilotPlan make(std::size_t ue_count, std::size_t surfaces, std::size_t sub_surfaces, std::size_t ris_rows,
                              std::size_t ris_cols, double pilot_power, std::size_t repetitions);

        std::size_t intervals() const { return surfaces * sub_surfaces + 1; }
        std::size_t short_term_length() const { return intervals() * ue_count; }
        std::size_t overall_length() const { return repetitions * ue_count; }

        // Effective pilot SNR factors of the two protocols
        double short_term_gain() const { return static_cast<double>(ue_count * intervals()) * pilot_power; }
        double overall_gain() const { return static_cast<double>(repetitions * ue_count) * pilot_power; }
    };

    // Columns 1..count of the (size x size) DFT matrix with entries exp(-i 2 pi t c / size)
    arma::cx_mat dft_schedule(std::size_t size, std::size_t count);

    // Partition of a (rows x cols) surface into `parts` sets
    std::vector<std::vector<std::size_t>> partition_surface(std::size_t rows, std::size_t cols, std::size_t parts);

    // Received pilot blocks Y_t (M x K), t = 0..LR
    std::vector<arma::cx_mat> simulate_pilot_rx_short(const ChannelRealization &realization, const PilotPlan &plan,
                                                      double noise_power, Rng &rng);

    struct ShortTermObservation
    {
        std::vector<arma::cx_vec> direct;                 // z^{p,h}_k
        std::vector<std::vector<arma::cx_vec>> sub_sums;  // [k][l * R + r] z^{p,H}_{k,lr}
    };

    ShortTermObservation sufficient_stats_short(const std::vector<arma::cx_mat> &blocks, const PilotPlan &plan);

    struct EstimateSet
    {
        std::vector<arma::cx_vec> direct;           // h_k estimates
        std::vector<arma::cx_mat> cascaded;         // H_kl estimates (M x N), index k * L + l
        std::vector<arma::cx_vec> overall;          // b_k estimates
        std::vector<arma::cx_mat> error_covariance; // per UE, may be empty until filled in
    };

    // LMMSE estimation of direct and cascaded channels from the short-term protocol. All filters depend
    // only on statistics and are built once.
    class ShortTermLmmse
    {
    public:
        ShortTermLmmse(const ChannelStatistics &stats, const PilotPlan &plan, double noise_power);

        // Fills direct and cascaded estimates
        void estimate(const ShortTermObservation &obs, EstimateSet &out) const;

        // Explicit M x M filters, mainly for verification
        arma::cx_mat direct_filter(std::size_t k) const;
        arma::cx_mat cascaded_filter(std::size_t k, std::size_t l, std::size_t n) const;

        // Second moment of the sub-surface column sum and the cross moment of column n with it
        arma::cx_mat sub_sum_moment(std::size_t k, std::size_t l, std::size_t r) const;
        arma::cx_mat column_cross_moment(std::size_t k, std::size_t l, std::size_t n) const;

    private:
        struct LinkFilters
        {
            std::vector<HermitianSolver> systems; // per sub-surface: c Rsum + s2 I
            arma::cx_mat rf;                     // second moment of f_kl
            arma::cx_vec diffuse_weight;         // N: sum_{n' in sub} Rf(n, n') R_ris(n', n)
        };

        const ChannelStatistics *stats_;
        PilotPlan plan_;
        double noise_power_;
        double gain_;
        std::vector<arma::cx_mat> direct_moments_;
        std::vector<HermitianSolver> direct_systems_; // c Rh + s2 I
        std::vector<LinkFilters> links_; // index k * L + l
    };

    // Least-squares estimates: scaled observations, sub-surface sums split equally over their columns
    void ls_short(const ShortTermObservation &obs, const PilotPlan &plan, EstimateSet &out);

    // Overall-channel observation z_k = sqrt(c) b_k + n with c = repetitions * K * eta
    std::vector<arma::cx_vec> simulate_pilot_rx_long(const std::vector<arma::cx_vec> &overall, const PilotPlan &plan,
                                                     double noise_power, Rng &rng);

    // Second moment of b_k for a fixed configuration (zero entries of the surface diagonal for unassigned elements)
    arma::cx_mat overall_second_moment(const ChannelStatistics &stats, std::size_t k,
                                       const std::vector<arma::cx_vec> &surface_diagonals);

    // LMMSE estimation of overall channels with closed-form error covariance
    class OverallLmmse
    {
    public:
        OverallLmmse(const ChannelStatistics &stats, const std::vector<arma::cx_vec> &surface_diagonals, double gain,
                     double noise_power);

        // Fills overall estimates and error covariances
        void estimate(const std::vector<arma::cx_vec> &observations, EstimateSet &out) const;

        const arma::cx_mat &filter(std::size_t k) const { return filters_.at(k); }
        const arma::cx_mat &second_moment(std::size_t k) const { return moments_.at(k); }
        const arma::cx_mat &error_covariance(std::size_t k) const { return errors_.at(k); }

    private:
        std::vector<arma::cx_mat> filters_;
        std::vector<arma::cx_mat> moments_;
        std::vector<arma::cx_mat> errors_;
    };

    // b_k estimates z_k / sqrt(c) with error covariance s2 / c I
    void ls_overall(const std::vector<arma::cx_vec> &observations, double gain, double noise_power, EstimateSet &out);

    // Sample error covariance of the overall-channel estimates. `draw` returns (true, estimated) overall
    // channels of all UEs for draw index d. The result is symmetrized and clamped to PSD.
    using OverallDraw = std::function<std::pair<std::vector<arma::cx_vec>, std::vector<arma::cx_vec>>(std::size_t)>;
    std::vector<arma::cx_mat> error_covariance_mc(const OverallDraw &draw, std::size_t draws);
}

#endif
