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

#include "rismimo/correlation.hpp"

#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace rismimo
{
    void ScatteringSpec::validate() const
    {
        if (!std::isfinite(azimuth) || !std::isfinite(elevation))
            throw ConfigError("ScatteringSpec: nominal angles must be finite");
        if (!(azimuth_std >= 0.0) || !(elevation_std >= 0.0) || !std::isfinite(azimuth_std) || !std::isfinite(elevation_std))
            throw ConfigError("ScatteringSpec: angular standard deviations must be finite and non-negative");
    }

    arma::cx_mat correlation_closed_form(const ArrayGeometry &geometry, const ScatteringSpec &spec, ZeroSpread zero_spread)
    {
        geometry.validate();
        spec.validate();
        if (spec.azimuth_std == 0.0 && zero_spread == ZeroSpread::reject)
            throw DegenerateSpreadError("correlation_closed_form: zero azimuth spread (use ZeroSpread::point_mass)");

        const arma::uword n = geometry.size();
        if (spec.azimuth_std == 0.0 && spec.elevation_std == 0.0)
        {
            const arma::cx_vec a = array_response(geometry, spec.azimuth, spec.elevation);
            return a * a.t();
        }

        const double two_pi = 2.0 * std::numbers::pi;
        const double sp = std::sin(spec.azimuth), cp = std::cos(spec.azimuth);
        const double st = std::sin(spec.elevation), ct = std::cos(spec.elevation);
        const double vp = spec.azimuth_std * spec.azimuth_std;
        const double vt = spec.elevation_std * spec.elevation_std;

        arma::cx_mat R(n, n);
        for (arma::uword l = 0; l < n; ++l)
            for (arma::uword m = 0; m < n; ++m)
            {
                const double dh = geometry.horizontal[m] - geometry.horizontal[l];
                const double dv = geometry.vertical[m] - geometry.vertical[l];
                const double a_phase = two_pi * (dh * sp * ct + dv * st);
                const double B = two_pi * dh * cp * ct;
                const double C = -two_pi * dh * cp * st;
                const double D = -two_pi * dh * sp * st + two_pi * dv * ct;

                // ratio = sigma_tilde / sigma_az, finite as sigma_az -> 0
                const double ratio2 = 1.0 / (1.0 + C * C * vp * vt);
                const double st2 = vp * ratio2;
                const double magnitude = std::sqrt(ratio2) * std::exp(0.5 * D * D * vt * (C * C * vt * st2 - 1.0) - 0.5 * B * B * st2);
                const double phase = a_phase - B * C * D * vt * st2;
                R(m, l) = std::polar(magnitude, phase);
            }

        R = hermitian_part(R);
        if (min_eigenvalue(R) < 0.0)
            R = psd_repair(R).matrix;
        return R;
    }

    GaussHermiteRule gauss_hermite(std::size_t n)
    {
        if (n == 0)
            throw ConfigError("gauss_hermite: at least one node is required");

        // Golub-Welsch starting values
        arma::mat J(n, n, arma::fill::zeros);
        for (std::size_t j = 1; j < n; ++j)
            J(j, j - 1) = J(j - 1, j) = std::sqrt(0.5 * static_cast<double>(j));
        arma::vec x;
        arma::mat V;
        arma::eig_sym(x, V, J);

        GaussHermiteRule rule;
        rule.nodes.set_size(n);
        rule.weights.set_size(n);
        const double pi_quarter = std::pow(std::numbers::pi, -0.25);

        // Newton refinement with the orthonormal Hermite recurrence
        for (std::size_t i = 0; i < n; ++i)
        {
            double z = x(i);
            for (int iter = 0; iter < 10; ++iter)
            {
                double p1 = pi_quarter, p2 = 0.0;
                for (std::size_t j = 1; j <= n; ++j)
                {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = z * std::sqrt(2.0 / static_cast<double>(j)) * p2 - std::sqrt(static_cast<double>(j - 1) / static_cast<double>(j)) * p3;
                }
                const double dp = std::sqrt(2.0 * static_cast<double>(n)) * p2;
                const double step = p1 / dp;
                z -= step;
                if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z)))
                    break;
            }
            // recompute p_{n-1} at the polished node
            double p1 = pi_quarter, p2 = 0.0;
            for (std::size_t j = 1; j < n; ++j)
            {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / static_cast<double>(j)) * p2 - std::sqrt(static_cast<double>(j - 1) / static_cast<double>(j)) * p3;
            }
            rule.nodes(i) = z;
            rule.weights(i) = 1.0 / (static_cast<double>(n) * p1 * p1);
        }
        return rule;
    }

    arma::cx_mat correlation_numeric(const ArrayGeometry &geometry, const ScatteringSpec &spec, std::size_t quadrature_points)
    {
        geometry.validate();
        spec.validate();
        if (quadrature_points < 32)
            throw ConfigError("correlation_numeric: at least 32 quadrature points are required");

        // Probability nodes/weights for N(0, std^2); a zero spread is a single node
        auto axis = [quadrature_points](double std_dev, std::vector<double> &offsets, std::vector<double> &weights) {
            if (std_dev == 0.0)
            {
                offsets = {0.0};
                weights = {1.0};
                return;
            }
            const GaussHermiteRule rule = gauss_hermite(quadrature_points);
            offsets.resize(quadrature_points);
            weights.resize(quadrature_points);
            for (std::size_t i = 0; i < quadrature_points; ++i)
            {
                offsets[i] = std::sqrt(2.0) * std_dev * rule.nodes(i);
                weights[i] = rule.weights(i) / std::sqrt(std::numbers::pi);
            }
        };

        std::vector<double> d_az, w_az, d_el, w_el;
        axis(spec.azimuth_std, d_az, w_az);
        axis(spec.elevation_std, d_el, w_el);

        const arma::uword n = geometry.size();
        arma::cx_mat R(n, n, arma::fill::zeros);
        arma::cx_mat responses(n, d_az.size() * d_el.size());
        arma::vec weights(responses.n_cols);
        arma::uword col = 0;
        for (std::size_t i = 0; i < d_az.size(); ++i)
            for (std::size_t j = 0; j < d_el.size(); ++j, ++col)
            {
                responses.col(col) = array_response(geometry, spec.azimuth + d_az[i], spec.elevation + d_el[j]);
                weights(col) = w_az[i] * w_el[j];
            }

        // sum_c w_c a_c a_c^H as a single product
        arma::cx_mat scaled = responses;
        for (arma::uword c = 0; c < scaled.n_cols; ++c)
            scaled.col(c) *= weights(c);
        R = scaled * responses.t();
        return hermitian_part(R);
    }

    KroneckerSampler::KroneckerSampler(const arma::cx_mat &bs_corr, const arma::cx_mat &ris_corr)
        : bs_sqrt_(psd_sqrt(bs_corr)), ris_sqrt_(psd_sqrt(ris_corr))
    {
    }

    arma::cx_mat KroneckerSampler::sample(Rng &rng) const
    {
        const arma::cx_mat W = complex_gaussian_matrix(bs_sqrt_.n_rows, ris_sqrt_.n_rows, rng);
        return bs_sqrt_ * W * ris_sqrt_;
    }

    arma::cx_mat kronecker_nonspecular_sample(const arma::cx_mat &bs_corr, const arma::cx_mat &ris_corr, Rng &rng)
    {
        return KroneckerSampler(bs_corr, ris_corr).sample(rng);
    }
}
