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

#include "rismimo/power_control.hpp"

#include "rismimo/errors.hpp"
#include "rismimo/log.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rismimo
{
    void SinrCoefficients::validate() const
    {
        const arma::uword K = signal.n_elem;
        if (cross.n_rows != K || cross.n_cols != K || noise.n_elem != K)
            throw DimensionError("SinrCoefficients: inconsistent sizes");
        if (!signal.is_finite() || !cross.is_finite() || !noise.is_finite())
            throw ConfigError("SinrCoefficients: non-finite entries");
        if (!(max_power > 0.0))
            throw ConfigError("SinrCoefficients: max_power must be positive");
    }

    arma::vec sinr_from_powers(const SinrCoefficients &coeffs, const arma::vec &powers)
    {
        coeffs.validate();
        const arma::uword K = coeffs.size();
        if (powers.n_elem != K)
            throw DimensionError("sinr_from_powers: power vector has wrong length");
        arma::vec out(K);
        for (arma::uword k = 0; k < K; ++k)
        {
            const double signal = powers(k) * coeffs.signal(k);
            if (signal <= 0.0)
            {
                out(k) = 0.0;
                continue;
            }
            const double total = arma::dot(coeffs.cross.row(k), powers) + coeffs.noise(k);
            double denom = total - signal;
            if (denom < 0.0)
            {
                if (denom < -1e-9 * total)
                    log::warning("sinr_from_powers: negative interference-plus-noise term " + std::to_string(denom));
                denom = 0.0;
            }
            out(k) = signal / std::max(denom, 1e-300);
        }
        return out;
    }

    PowerSolution full_power(const SinrCoefficients &coeffs)
    {
        PowerSolution sol;
        sol.powers = arma::vec(coeffs.size(), arma::fill::value(coeffs.max_power));
        sol.sinr = sinr_from_powers(coeffs, sol.powers);
        sol.min_sinr = sol.sinr.n_elem ? sol.sinr.min() : 0.0;
        sol.spread = sol.sinr.n_elem ? sol.sinr.max() - sol.sinr.min() : 0.0;
        sol.converged = true;
        return sol;
    }

    PowerSolution maxmin_fixed_point(const SinrCoefficients &coeffs, double tolerance, std::size_t max_iterations)
    {
        coeffs.validate();
        if (!(tolerance > 0.0) || max_iterations == 0)
            throw ConfigError("maxmin_fixed_point: tolerance and iteration limit must be positive");

        const arma::uword K = coeffs.size();
        const double pmax = coeffs.max_power;
        std::vector<arma::uword> active, excluded;
        for (arma::uword k = 0; k < K; ++k)
            (coeffs.signal(k) > 0.0 ? active : excluded).push_back(k);
        if (!excluded.empty())
            log::warning("maxmin_fixed_point: " + std::to_string(excluded.size()) + " UE(s) with zero signal gain kept at full power");

        PowerSolution sol;
        sol.excluded = arma::uvec(excluded);
        arma::vec p(K, arma::fill::value(pmax));

        auto spread_of = [&active](const arma::vec &sinr) {
            double lo = arma::datum::inf, hi = -arma::datum::inf;
            for (arma::uword k : active)
            {
                lo = std::min(lo, sinr(k));
                hi = std::max(hi, sinr(k));
            }
            return std::pair<double, double>(lo, hi);
        };

        arma::vec sinr = sinr_from_powers(coeffs, p);
        auto [lo, hi] = active.empty() ? std::pair<double, double>(0.0, 0.0) : spread_of(sinr);
        PowerSolution best;
        best.powers = p;
        best.sinr = sinr;
        best.min_sinr = lo;
        best.spread = hi - lo;

        std::size_t iter = 0;
        while (!active.empty() && hi - lo > tolerance && iter < max_iterations)
        {
            arma::vec next = p;
            for (arma::uword k : active)
                next(k) = (arma::dot(coeffs.cross.row(k), p) - p(k) * coeffs.signal(k) + coeffs.noise(k)) / coeffs.signal(k);
            double peak = 0.0;
            for (arma::uword k : active)
                peak = std::max(peak, next(k));
            for (arma::uword k : active)
                next(k) *= pmax / peak;
            p = next;
            ++iter;

            sinr = sinr_from_powers(coeffs, p);
            std::tie(lo, hi) = spread_of(sinr);
            if (lo > best.min_sinr || (lo == best.min_sinr && hi - lo < best.spread))
            {
                best.powers = p;
                best.sinr = sinr;
                best.min_sinr = lo;
                best.spread = hi - lo;
            }
        }

        const bool converged = active.empty() || hi - lo <= tolerance;
        if (converged)
        {
            sol.powers = p;
            sol.sinr = sinr;
            sol.min_sinr = active.empty() ? 0.0 : lo;
            sol.spread = hi - lo;
        }
        else
        {
            log::warning("maxmin_fixed_point: no convergence after " + std::to_string(iter) + " iterations (spread " +
                         std::to_string(hi - lo) + ")");
            sol.powers = best.powers;
            sol.sinr = best.sinr;
            sol.min_sinr = best.min_sinr;
            sol.spread = best.spread;
        }
        sol.iterations = iter;
        sol.converged = converged;
        return sol;
    }
}
