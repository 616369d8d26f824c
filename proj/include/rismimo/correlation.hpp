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

#ifndef RISMIMO_CORRELATION_HPP
#define RISMIMO_CORRELATION_HPP

#include "rismimo/array_geometry.hpp"
#include "rismimo/rng.hpp"

#include <armadillo>
#include <cstddef>

namespace rismimo
{
    // Gaussian local scattering around a nominal direction (all angles in radians)
    struct ScatteringSpec
    {
        double azimuth = 0.0;
        double elevation = 0.0;
        double azimuth_std = 0.0;
        double elevation_std = 0.0;

        void validate() const;
    };

    // Behavior of correlation_closed_form when the azimuth spread is zero
    enum class ZeroSpread
    {
        reject,    // throw DegenerateSpreadError
        point_mass // treat zero spreads as Dirac masses
    };

    // Normalized correlation matrix of the small-angle closed form. Entry (m,l) uses the pairwise
    // offsets d^{ml} = d^{m1} - d^{l1}. The result is symmetrized and, if the approximation produced
    // negative eigenvalues, projected onto the PSD cone.
    arma::cx_mat correlation_closed_form(const ArrayGeometry &geometry, const ScatteringSpec &spec,
                                         ZeroSpread zero_spread = ZeroSpread::reject);

    // Normalized correlation matrix by tensor-product Gauss-Hermite quadrature of the exact
    // integrand. A zero spread on an axis collapses that axis to a single node.
    arma::cx_mat correlation_numeric(const ArrayGeometry &geometry, const ScatteringSpec &spec,
                                     std::size_t quadrature_points = 96);

    struct GaussHermiteRule
    {
        arma::vec nodes;   // ascending
        arma::vec weights; // for the weight function exp(-x^2), sum = sqrt(pi)
    };

    // Physicists' Gauss-Hermite rule with n points
    GaussHermiteRule gauss_hermite(std::size_t n);

    // Kronecker-structured nonspecular BS-RIS channel R_bs^{1/2} W R_ris^{1/2}.
    // The square roots are computed once at construction.
    class KroneckerSampler
    {
    public:
        KroneckerSampler() = default;
        KroneckerSampler(const arma::cx_mat &bs_corr, const arma::cx_mat &ris_corr);

        arma::cx_mat sample(Rng &rng) const;

        const arma::cx_mat &bs_sqrt() const { return bs_sqrt_; }
        const arma::cx_mat &ris_sqrt() const { return ris_sqrt_; }

    private:
        arma::cx_mat bs_sqrt_;
        arma::cx_mat ris_sqrt_;
    };

    arma::cx_mat kronecker_nonspecular_sample(const arma::cx_mat &bs_corr, const arma::cx_mat &ris_corr, Rng &rng);
}

#endif
