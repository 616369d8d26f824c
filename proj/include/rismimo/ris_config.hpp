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

#ifndef RISMIMO_RIS_CONFIG_HPP
#define RISMIMO_RIS_CONFIG_HPP

#include <armadillo>
#include <cstddef>
#include <vector>

namespace rismimo
{
    // Mapping of RIS elements to UEs. Elements are addressed by the global index l * N + n.
    struct RisAssignment
    {
        std::size_t surfaces = 0;             // L
        std::size_t elements_per_surface = 0; // N
        std::vector<std::vector<std::size_t>> ue_elements; // per UE, ascending global indices

        std::size_t ue_count() const { return ue_elements.size(); }
        std::size_t total_elements() const { return surfaces * elements_per_surface; }

        // Throws AssignmentError for out-of-range or duplicated indices
        void validate() const;

        // Owner of every global element, -1 for unassigned ones
        std::vector<long> owners() const;

        // Surface `l` assigned as a whole to `owners[l]` (-1 leaves it unassigned)
        static RisAssignment whole_surfaces(std::size_t elements_per_surface, std::size_t ue_count,
                                            const std::vector<long> &surface_owners);

        // No elements assigned to anyone
        static RisAssignment empty(std::size_t surfaces, std::size_t elements_per_surface, std::size_t ue_count);
    };

    // Phase-shifts of the elements assigned to each UE, stored as angles so that every
    // reflection coefficient has unit modulus by construction.
    struct PhaseConfig
    {
        std::vector<arma::vec> angles; // per UE, aligned with RisAssignment::ue_elements

        // exp(i * angles[j])
        arma::cx_vec coefficients(std::size_t j) const;

        // Diagonal of the stacked surface operator for surface l; unassigned elements are 0
        arma::cx_vec surface_diagonal(const RisAssignment &assignment, std::size_t l) const;

        // Throws DimensionError when the angle vectors do not match the assignment
        void check(const RisAssignment &assignment) const;

        // Angles taken from complex values; exact zeros map to angle 0
        static arma::vec angles_of(const arma::cx_vec &values);
    };
}

#endif
