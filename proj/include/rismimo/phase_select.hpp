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

#ifndef RISMIMO_PHASE_SELECT_HPP
#define RISMIMO_PHASE_SELECT_HPP

#include "rismimo/channel_model.hpp"
#include "rismimo/ris_config.hpp"
#include "rismimo/rng.hpp"

#include <armadillo>
#include <cstddef>

namespace rismimo
{
    // Maximizer of ||h + H phi||^2 subject to ||phi||^2 <= N
    struct RelaxedSolution
    {
        arma::cx_vec phi;          // optimal relaxed vector
        double multiplier = 0.0;   // gamma*, > largest eigenvalue
        arma::vec eigenvalues;     // of H^H H, ascending
        arma::cx_mat eigenvectors; // matching columns
        bool linear_term_zero = false; // H^H h vanished; phi is the scaled dominant eigenvector
        bool hard_case = false;        // secular equation had no root above the largest eigenvalue
        double secular_residual = 0.0; // |sum |u^H b|^2 / (gamma - lambda)^2 - N|
    };

    // Relaxed problem via eigendecomposition of H^H H and root finding on the secular equation
    RelaxedSolution solve_relaxed(const arma::cx_mat &H, const arma::cx_vec &h);

    // ||h + H phi||^2
    double relaxed_objective(const arma::cx_mat &H, const arma::cx_vec &h, const arma::cx_vec &phi);

    // Unit-modulus projection exp(i arg(phi)); zeros map to angle 0
    arma::vec ps1_project(const RelaxedSolution &relaxed);

    // Angles arg([H]_{:n}^H h); falls back to zeros (with a log entry) when h = 0
    arma::vec ps_per_element(const arma::cx_mat &H, const arma::cx_vec &h);

    // Configuration from dominant eigenvectors of the channel second moments, fixed across blocks
    PhaseConfig ps_longterm(const ChannelStatistics &stats, const RisAssignment &assignment);

    PhaseConfig ps_zero(const RisAssignment &assignment);
    PhaseConfig ps_random(const RisAssignment &assignment, Rng &rng);

    // Gathers the columns of the estimated cascaded channels (index k * L + l) of UE i at the elements of UE j
    arma::cx_mat gather_assigned(const std::vector<arma::cx_mat> &cascaded, const RisAssignment &assignment,
                                 std::size_t i, std::size_t j);

    // PS-1 or per-element selection from estimates for every UE that owns elements
    PhaseConfig select_from_estimates(const std::vector<arma::cx_vec> &direct, const std::vector<arma::cx_mat> &cascaded,
                                      const RisAssignment &assignment, bool per_element);
}

#endif
