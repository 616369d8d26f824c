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

#ifndef RISMIMO_CHANNEL_MODEL_HPP
#define RISMIMO_CHANNEL_MODEL_HPP

#include "rismimo/array_geometry.hpp"
#include "rismimo/correlation.hpp"
#include "rismimo/ris_config.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/scenario.hpp"

#include <armadillo>
#include <cstddef>
#include <vector>

namespace rismimo
{
    // Statistics of a UE link (UE-BS or UE-RIS): random-phase specular vectors plus a
    // correlated Gaussian part. Specular vectors already carry the square root of their gain.
    struct UeLinkStatistics
    {
        std::vector<arma::cx_vec> specular;
        arma::cx_mat nonspecular_corr; // gain-scaled
        arma::cx_mat nonspecular_sqrt; // set by finalize()
        double gain = 0.0;             // total average gain per antenna
        double kfactor = 0.0;          // linear, 0 without LOS
        bool los = false;

        void finalize();

        // E{x x^H} = sum_s xbar_s xbar_s^H + R
        arma::cx_mat second_moment() const;

        arma::cx_vec sample(Rng &rng, std::vector<double> *phases = nullptr) const;
    };

    // Statistics of a BS-RIS link. specular[0] is the LOS path and carries no random phase when
    // los_fixed is set; the Gaussian part follows the Kronecker model.
    struct SurfaceLinkStatistics
    {
        std::vector<arma::cx_mat> specular;
        bool los_fixed = true;
        arma::cx_mat bs_corr;  // gain-scaled
        arma::cx_mat ris_corr; // normalized
        KroneckerSampler nonspecular; // set by finalize()
        double gain = 0.0;

        void finalize();

        arma::cx_mat sample(Rng &rng, std::vector<double> *phases = nullptr) const;
    };

    struct ChannelStatistics
    {
        std::size_t bs_antennas = 0;          // M
        std::size_t elements_per_surface = 0; // N
        std::size_t surfaces = 0;             // L
        std::size_t ue_count = 0;             // K

        std::vector<UeLinkStatistics> direct;      // K entries
        std::vector<UeLinkStatistics> ue_ris;      // K * L entries, index k * L + l
        std::vector<SurfaceLinkStatistics> bs_ris; // L entries

        const UeLinkStatistics &ris_link(std::size_t k, std::size_t l) const { return ue_ris.at(k * surfaces + l); }
        UeLinkStatistics &ris_link(std::size_t k, std::size_t l) { return ue_ris.at(k * surfaces + l); }

        // Throws DimensionError when a vector or matrix does not match the counts
        void validate() const;

        // Computes all square-root factors; call after editing the statistics by hand
        void finalize();

        // E{[H_kl]_{:n} [H_kl]_{:n'}^H} for the cascaded channel H_kl = G_l diag(f_kl)
        arma::cx_mat cascaded_column_moment(std::size_t k, std::size_t l, std::size_t n, std::size_t n2) const;
    };

    // One coherence block
    struct ChannelRealization
    {
        std::vector<arma::cx_vec> direct; // h_k
        std::vector<arma::cx_vec> ue_ris; // f_kl, index k * L + l
        std::vector<arma::cx_mat> bs_ris; // G_l
        std::vector<std::vector<double>> direct_phases;
        std::vector<std::vector<double>> ue_ris_phases;
        std::vector<std::vector<double>> bs_ris_phases; // random phases of the non-LOS specular paths
    };

    ChannelRealization sample_realization(const ChannelStatistics &stats, Rng &rng);

    // H_kl = G_l diag(f_kl)
    arma::cx_mat cascaded_channel(const ChannelRealization &realization, std::size_t k, std::size_t l);

    // H'_ij: columns of the cascaded channels of UE i at the elements assigned to UE j
    arma::cx_mat cascaded_assigned(const ChannelRealization &realization, const RisAssignment &assignment,
                                   std::size_t i, std::size_t j);

    // b_i = h_i + sum_j H'_ij phi_j
    std::vector<arma::cx_vec> overall_channel(const ChannelRealization &realization, const RisAssignment &assignment,
                                              const PhaseConfig &phases);

    // b_i = h_i + sum_l G_l Phi_l f_il with the stacked surface operators
    std::vector<arma::cx_vec> overall_channel_surface_form(const ChannelRealization &realization,
                                                           const RisAssignment &assignment, const PhaseConfig &phases);

    // ---- scenario-driven construction ----------------------------------------

    double los_probability(double horizontal_distance);

    std::vector<Point3> place_ues(const Scenario &scenario, Rng &rng);

    // Draws LOS states, shadowing and non-LOS specular angles for one UE placement
    ChannelStatistics build_statistics(const Scenario &scenario, const std::vector<Point3> &ues, Rng &rng);

    // Whole surfaces to the weakest UEs (by direct-channel gain); the weakest UE picks first and takes
    // the surface with the strongest UE-RIS gain
    RisAssignment default_assignment(const Scenario &scenario, const ChannelStatistics &stats);
}

#endif
