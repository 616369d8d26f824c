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

#ifndef RISMIMO_LINALG_HPP
#define RISMIMO_LINALG_HPP

#include <armadillo>

namespace rismimo
{
    // (A + A^H) / 2
    arma::cx_mat hermitian_part(const arma::cx_mat &A);

    bool is_hermitian(const arma::cx_mat &A, double tolerance);

    // Smallest eigenvalue of the Hermitian part of A
    double min_eigenvalue(const arma::cx_mat &A);

    struct PsdRepair
    {
        arma::cx_mat matrix;        // Hermitian, all eigenvalues >= 0
        double clamped_mass = 0.0;  // sum of |negative eigenvalues| that were set to zero
        double min_eigenvalue = 0.0; // before clamping
    };

    // Symmetrizes A and clamps negative eigenvalues to zero. Leaves A untouched (apart from
    // symmetrization) when it is already PSD.
    PsdRepair psd_repair(const arma::cx_mat &A);

    // Hermitian square root R^{1/2} with negative eigenvalues clamped to zero.
    // Throws NotPsdError when the smallest eigenvalue is below -tolerance * max(trace, tiny).
    arma::cx_mat psd_sqrt(const arma::cx_mat &R, double tolerance = 1e-9);

    // Inverse of a Hermitian PSD matrix. Uses a Cholesky-based inverse when the matrix is
    // positive definite with condition number <= max_condition, otherwise an eigenvalue
    // thresholded pseudo-inverse (eigenvalues below lambda_max / max_condition are dropped).
    arma::cx_mat hermitian_inverse(const arma::cx_mat &A, double max_condition = 1e12);

    // Repeated solves with a fixed Hermitian PSD matrix: Cholesky substitution when the matrix is
    // positive definite with condition number <= max_condition, the pseudo-inverse of
    // hermitian_inverse otherwise
    class HermitianSolver
    {
    public:
        HermitianSolver() = default;
        explicit HermitianSolver(const arma::cx_mat &A, double max_condition = 1e12);

        arma::cx_mat solve(const arma::cx_mat &B) const;
        arma::cx_mat inverse() const;

    private:
        arma::cx_mat factor_;        // lower Cholesky factor, empty on the pseudo-inverse path
        arma::cx_mat pseudo_inverse_;
    };

    struct DominantEigenpair
    {
        arma::cx_vec vector;          // unit norm
        double value = 0.0;
        arma::uword multiplicity = 1; // eigenvalues within 1e-9 relative of the largest
    };

    // Dominant eigenvector with a canonical phase: the first entry with non-negligible
    // magnitude is real and positive. For a repeated dominant eigenvalue the vector is the
    // normalized projection of the lowest-index unit vector onto the dominant eigenspace,
    // which does not depend on the basis returned by LAPACK.
    DominantEigenpair dominant_eigenpair(const arma::cx_mat &R);

    double relative_frobenius_error(const arma::cx_mat &estimate, const arma::cx_mat &reference);
}

#endif
