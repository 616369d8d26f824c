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

#include "rismimo/ris_config.hpp"

#include "rismimo/errors.hpp"

#include <cmath>
#include <string>

namespace rismimo
{
    void RisAssignment::validate() const
    {
        std::vector<bool> used(total_elements(), false);
        for (std::size_t k = 0; k < ue_elements.size(); ++k)
            for (std::size_t g : ue_elements[k])
            {
                if (g >= used.size())
                    throw AssignmentError("RisAssignment: element index " + std::to_string(g) + " of UE " + std::to_string(k) +
                                          " exceeds " + std::to_string(used.size()) + " elements");
                if (used[g])
                    throw AssignmentError("RisAssignment: element " + std::to_string(g) + " assigned twice");
                used[g] = true;
            }
    }

    std::vector<long> RisAssignment::owners() const
    {
        validate();
        std::vector<long> out(total_elements(), -1);
        for (std::size_t k = 0; k < ue_elements.size(); ++k)
            for (std::size_t g : ue_elements[k])
                out[g] = static_cast<long>(k);
        return out;
    }

    RisAssignment RisAssignment::whole_surfaces(std::size_t elements_per_surface, std::size_t ue_count,
                                                const std::vector<long> &surface_owners)
    {
        RisAssignment a = empty(surface_owners.size(), elements_per_surface, ue_count);
        for (std::size_t l = 0; l < surface_owners.size(); ++l)
        {
            const long k = surface_owners[l];
            if (k < 0)
                continue;
            if (static_cast<std::size_t>(k) >= ue_count)
                throw AssignmentError("RisAssignment: surface owner " + std::to_string(k) + " is not a UE");
            for (std::size_t n = 0; n < elements_per_surface; ++n)
                a.ue_elements[static_cast<std::size_t>(k)].push_back(l * elements_per_surface + n);
        }
        return a;
    }

    RisAssignment RisAssignment::empty(std::size_t surfaces, std::size_t elements_per_surface, std::size_t ue_count)
    {
        RisAssignment a;
        a.surfaces = surfaces;
        a.elements_per_surface = elements_per_surface;
        a.ue_elements.assign(ue_count, {});
        return a;
    }

    arma::cx_vec PhaseConfig::coefficients(std::size_t j) const
    {
        const arma::vec &a = angles.at(j);
        arma::cx_vec out(a.n_elem);
        for (arma::uword n = 0; n < a.n_elem; ++n)
            out(n) = std::polar(1.0, a(n));
        return out;
    }

    arma::cx_vec PhaseConfig::surface_diagonal(const RisAssignment &assignment, std::size_t l) const
    {
        check(assignment);
        const std::size_t N = assignment.elements_per_surface;
        arma::cx_vec d(N, arma::fill::zeros);
        for (std::size_t j = 0; j < assignment.ue_elements.size(); ++j)
        {
            const auto &elements = assignment.ue_elements[j];
            for (std::size_t i = 0; i < elements.size(); ++i)
                if (elements[i] / N == l)
                    d(elements[i] % N) = std::polar(1.0, angles[j](i));
        }
        return d;
    }

    void PhaseConfig::check(const RisAssignment &assignment) const
    {
        if (angles.size() != assignment.ue_elements.size())
            throw DimensionError("PhaseConfig: " + std::to_string(angles.size()) + " UEs, assignment has " +
                                 std::to_string(assignment.ue_elements.size()));
        for (std::size_t j = 0; j < angles.size(); ++j)
            if (angles[j].n_elem != assignment.ue_elements[j].size())
                throw DimensionError("PhaseConfig: UE " + std::to_string(j) + " has " + std::to_string(angles[j].n_elem) +
                                     " angles for " + std::to_string(assignment.ue_elements[j].size()) + " elements");
    }

    arma::vec PhaseConfig::angles_of(const arma::cx_vec &values)
    {
        arma::vec out(values.n_elem, arma::fill::zeros);
        for (arma::uword n = 0; n < values.n_elem; ++n)
            if (values(n) != std::complex<double>(0.0, 0.0))
                out(n) = std::arg(values(n));
        return out;
    }
}
