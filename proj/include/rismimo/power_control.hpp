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

#ifndef RISMIMO_POWER_CONTROL_HPP
#define RISMIMO_POWER_CONTROL_HPP

#include <armadillo>
#include <cstddef>

namespace rismimo
{
    // Frozen SINR terms: SINR_k = p_k a_k / (sum_i p_i g_ki - p_k a_k + n_k)
    struct SinrCoefficients
    {
        arma::vec signal; // a_k = |E{v_k^H b_k}|^2
        arma::mat cross;  // g_ki = E{|v_k^H b_i|^2}
        arma::vec noise;  // n_k = s2 E{||v_k||^2}
        double max_power = 0.0;

        std::size_t size() const { return signal.n_elem; }

        // Throws DimensionError/ConfigError on inconsistent shapes or non-finite values
        void validate() const;
    };

    struct PowerSolution
    {
        arma::vec powers;
        arma::vec sinr;
        double min_sinr = 0.0;
        double spread = 0.0; // max - min SINR over the balanced UEs
        std::size_t iterations = 0;
        bool converged = false;
        arma::uvec excluded; // UEs with zero signal gain, kept at full power
    };

    arma::vec sinr_from_powers(const SinrCoefficients &coeffs, const arma::vec &powers);

    // Normalized fixed-point iteration for max-min fair powers, started from full power
    PowerSolution maxmin_fixed_point(const SinrCoefficients &coeffs, double tolerance = 1e-4, std::size_t max_iterations = 500);

    // Everyone at full power
    PowerSolution full_power(const SinrCoefficients &coeffs);
}

#endif
