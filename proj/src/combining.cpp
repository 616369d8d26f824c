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

#include "rismimo/combining.hpp"

#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/log.hpp"

#include <cmath>
#include <string>

namespace rismimo
{
    namespace
    {
        void check_estimates(const std::vector<arma::cx_vec> &estimates, const arma::vec &powers, const char *who)
        {
            if (estimates.empty())
                throw DimensionError(std::string(who) + ": no channel estimates");
            if (powers.n_elem != estimates.size())
                throw DimensionError(std::string(who) + ": power vector has wrong length");
            for (const auto &b : estimates)
                if (b.n_elem != estimates[0].n_elem)
                    throw DimensionError(std::string(who) + ": estimates differ in length");
        }

        std::vector<arma::cx_vec> solve_all(const arma::cx_mat &S, const std::vector<arma::cx_vec> &estimates,
                                            const arma::vec &scales)
        {
            const arma::cx_mat Sinv = hermitian_inverse(S);
            std::vector<arma::cx_vec> v;
            v.reserve(estimates.size());
            for (std::size_t k = 0; k < estimates.size(); ++k)
                v.push_back(scales(k) * (Sinv * estimates[k]));
            return v;
        }
    }

    std::vector<arma::cx_vec> combine_mr(const std::vector<arma::cx_vec> &estimates)
    {
        return estimates;
    }

    std::vector<arma::cx_vec> combine_rzf(const std::vector<arma::cx_vec> &estimates, const arma::vec &powers,
                                          double noise_power)
    {
        check_estimates(estimates, powers, "combine_rzf");
        const arma::uword M = estimates[0].n_elem;
        arma::cx_mat S = noise_power * arma::eye<arma::cx_mat>(M, M);
        for (std::size_t i = 0; i < estimates.size(); ++i)
            S += powers(i) * estimates[i] * estimates[i].t();
        return solve_all(S, estimates, arma::vec(estimates.size(), arma::fill::ones));
    }

    std::vector<arma::cx_vec> combine_ammse(const std::vector<arma::cx_vec> &estimates,
                                            const std::vector<arma::cx_mat> &error_covariances, const arma::vec &powers,
                                            double noise_power)
    {
        check_estimates(estimates, powers, "combine_ammse");
        if (error_covariances.size() != estimates.size())
            throw DimensionError("combine_ammse: one error covariance per UE is required");
        const arma::uword M = estimates[0].n_elem;
        arma::cx_mat S = noise_power * arma::eye<arma::cx_mat>(M, M);
        for (std::size_t i = 0; i < estimates.size(); ++i)
        {
            const arma::cx_mat &C = error_covariances[i];
            if (C.n_rows != M || C.n_cols != M)
                throw DimensionError("combine_ammse: error covariance has wrong size");
            arma::cx_mat Cpsd = C;
            if (min_eigenvalue(C) < -1e-9 * std::max(std::abs(std::real(arma::trace(C))), 1e-300))
            {
                log::warning("combine_ammse: error covariance of UE " + std::to_string(i) + " is not PSD, clamping");
                Cpsd = psd_repair(C).matrix;
            }
            S += powers(i) * (estimates[i] * estimates[i].t() + Cpsd);
        }
        return solve_all(S, estimates, powers);
    }

    std::vector<arma::cx_vec> combine(CombinerKind kind, const std::vector<arma::cx_vec> &estimates,
                                      const std::vector<arma::cx_mat> &error_covariances, const arma::vec &powers,
                                      double noise_power)
    {
        switch (kind)
        {
        case CombinerKind::mr:
            return combine_mr(estimates);
        case CombinerKind::rzf:
            return combine_rzf(estimates, powers, noise_power);
        case CombinerKind::ammse:
        case CombinerKind::conv_mmse:
            return combine_ammse(estimates, error_covariances, powers, noise_power);
        }
        throw ConfigError("combine: unknown combiner");
    }

    SinrAccumulator::SinrAccumulator(std::size_t ue_count)
        : signal_(ue_count, arma::fill::zeros), cross_(ue_count, ue_count, arma::fill::zeros), norm_(ue_count, arma::fill::zeros)
    {
    }

    void SinrAccumulator::add(const std::vector<arma::cx_vec> &combiners, const std::vector<arma::cx_vec> &channels)
    {
        const std::size_t K = signal_.n_elem;
        if (combiners.size() != K || channels.size() != K)
            throw DimensionError("SinrAccumulator::add: expected " + std::to_string(K) + " combiners and channels");
        for (std::size_t k = 0; k < K; ++k)
        {
            const arma::cx_vec &v = combiners[k];
            for (std::size_t i = 0; i < K; ++i)
            {
                const std::complex<double> x = arma::cdot(v, channels[i]);
                cross_(k, i) += std::norm(x);
                if (i == k)
                    signal_(k) += x;
            }
            norm_(k) += std::pow(arma::norm(v), 2);
        }
        ++draws_;
    }

    void SinrAccumulator::merge(const SinrAccumulator &other)
    {
        if (other.draws_ == 0)
            return;
        if (draws_ == 0)
        {
            *this = other;
            return;
        }
        if (other.signal_.n_elem != signal_.n_elem)
            throw DimensionError("SinrAccumulator::merge: different UE counts");
        signal_ += other.signal_;
        cross_ += other.cross_;
        norm_ += other.norm_;
        draws_ += other.draws_;
    }

    arma::cx_vec SinrAccumulator::mean_signal() const
    {
        if (draws_ == 0)
            throw DimensionError("SinrAccumulator: no draws accumulated");
        return signal_ / static_cast<double>(draws_);
    }

    arma::mat SinrAccumulator::mean_cross() const
    {
        if (draws_ == 0)
            throw DimensionError("SinrAccumulator: no draws accumulated");
        return cross_ / static_cast<double>(draws_);
    }

    arma::vec SinrAccumulator::mean_norm() const
    {
        if (draws_ == 0)
            throw DimensionError("SinrAccumulator: no draws accumulated");
        return norm_ / static_cast<double>(draws_);
    }

    SinrCoefficients SinrAccumulator::coefficients(double noise_power, double max_power) const
    {
        SinrCoefficients c;
        c.signal = arma::square(arma::abs(mean_signal()));
        c.cross = mean_cross();
        c.noise = noise_power * mean_norm();
        c.max_power = max_power;
        return c;
    }

    arma::vec spectral_efficiency(const arma::vec &sinr, double prelog)
    {
        return prelog * arma::log2(1.0 + sinr);
    }
}
