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

#ifndef RISMIMO_COMBINING_HPP
#define RISMIMO_COMBINING_HPP

#include "rismimo/power_control.hpp"
#include "rismimo/scenario.hpp"

#include <armadillo>
#include <cstddef>
#include <vector>

namespace rismimo
{
    std::vector<arma::cx_vec> combine_mr(const std::vector<arma::cx_vec> &estimates);

    // v_k = (sum_i p_i b_i b_i^H + s2 I)^{-1} b_k
    std::vector<arma::cx_vec> combine_rzf(const std::vector<arma::cx_vec> &estimates, const arma::vec &powers,
                                          double noise_power);

    // v_k = p_k (sum_i p_i (b_i b_i^H + C_i) + s2 I)^{-1} b_k; non-PSD error covariances are clamped with a warning
    std::vector<arma::cx_vec> combine_ammse(const std::vector<arma::cx_vec> &estimates,
                                            const std::vector<arma::cx_mat> &error_covariances, const arma::vec &powers,
                                            double noise_power);

    // Dispatch on the combiner kind; conv_mmse uses the AMMSE form with closed-form error covariances
    std::vector<arma::cx_vec> combine(CombinerKind kind, const std::vector<arma::cx_vec> &estimates,
                                      const std::vector<arma::cx_mat> &error_covariances, const arma::vec &powers,
                                      double noise_power);

    // Monte-Carlo sums of the expectations in the use-and-forget SINR. All terms are taken from the
    // same draws. Accumulators over disjoint draws can be merged.
    class SinrAccumulator
    {
    public:
        SinrAccumulator() = default;
        explicit SinrAccumulator(std::size_t ue_count);

        // One coherence block: combiners v_k and true channels b_i
        void add(const std::vector<arma::cx_vec> &combiners, const std::vector<arma::cx_vec> &channels);
        void merge(const SinrAccumulator &other);

        std::size_t draws() const { return draws_; }
        std::size_t ue_count() const { return signal_.n_elem; }

        // Expectations E{v_k^H b_k}, E{|v_k^H b_i|^2}, E{||v_k||^2}
        arma::cx_vec mean_signal() const;
        arma::mat mean_cross() const;
        arma::vec mean_norm() const;

        SinrCoefficients coefficients(double noise_power, double max_power) const;

    private:
        arma::cx_vec signal_;
        arma::mat cross_;
        arma::vec norm_;
        std::size_t draws_ = 0;
    };

    // (tau_c - tau_p) / tau_c * log2(1 + SINR)
    arma::vec spectral_efficiency(const arma::vec &sinr, double prelog);
}

#endif
