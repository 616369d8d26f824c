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

#include "rismimo/linalg.hpp"

#include "rismimo/errors.hpp"
#include "rismimo/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rismimo
{
    arma::cx_mat hermitian_part(const arma::cx_mat &A)
    {
        if (!A.is_square())
            throw DimensionError("hermitian_part: matrix is not square");
        return 0.5 * (A + A.t());
    }

    bool is_hermitian(const arma::cx_mat &A, double tolerance)
    {
        if (!A.is_square())
            return false;
        for (arma::uword j = 0; j < A.n_cols; ++j)
            for (arma::uword i = 0; i <= j; ++i)
                if (std::abs(A(i, j) - std::conj(A(j, i))) > tolerance)
                    return false;
        return true;
    }

    double min_eigenvalue(const arma::cx_mat &A)
    {
        if (A.n_elem == 0)
            return 0.0;
        arma::vec ev = arma::eig_sym(hermitian_part(A));
        return ev(0);
    }

    PsdRepair psd_repair(const arma::cx_mat &A)
    {
        PsdRepair out;
        out.matrix = hermitian_part(A);
        if (A.n_elem == 0)
            return out;

        arma::vec ev;
        arma::cx_mat U;
        if (!arma::eig_sym(ev, U, out.matrix))
            throw NotPsdError("psd_repair: eigendecomposition failed");
        out.min_eigenvalue = ev(0);
        if (ev(0) >= 0.0)
            return out;

        for (double &e : ev)
            if (e < 0.0)
            {
                out.clamped_mass -= e;
                e = 0.0;
            }
        out.matrix = U * arma::diagmat(arma::cx_vec(ev, arma::vec(ev.n_elem, arma::fill::zeros))) * U.t();
        out.matrix = hermitian_part(out.matrix);

        std::ostringstream msg;
        msg << "psd_repair: clamped negative eigenvalue mass " << out.clamped_mass
            << " (trace " << std::real(arma::trace(out.matrix)) << ")";
        log::debug(msg.str());
        return out;
    }

    arma::cx_mat psd_sqrt(const arma::cx_mat &R, double tolerance)
    {
        if (R.n_elem == 0)
            return R;
        const arma::cx_mat H = hermitian_part(R);
        arma::vec ev;
        arma::cx_mat U;
        if (!arma::eig_sym(ev, U, H))
            throw NotPsdError("psd_sqrt: eigendecomposition failed");

        const double scale = std::max(std::abs(std::real(arma::trace(H))), std::numeric_limits<double>::min());
        if (ev(0) < -tolerance * scale)
        {
            std::ostringstream msg;
            msg << "psd_sqrt: matrix is not positive semidefinite (smallest eigenvalue " << ev(0)
                << ", trace " << scale << ")";
            throw NotPsdError(msg.str());
        }
        arma::vec root = arma::sqrt(arma::clamp(ev, 0.0, arma::datum::inf));
        arma::cx_mat S = U * arma::diagmat(arma::cx_vec(root, arma::vec(root.n_elem, arma::fill::zeros))) * U.t();
        return hermitian_part(S);
    }

    arma::cx_mat hermitian_inverse(const arma::cx_mat &A, double max_condition)
    {
        if (!A.is_square())
            throw DimensionError("hermitian_inverse: matrix is not square");
        if (A.n_elem == 0)
            return A;
        const arma::cx_mat H = hermitian_part(A);

        arma::cx_mat factor;
        if (arma::chol(factor, H) && arma::rcond(H) * max_condition >= 1.0)
        {
            arma::cx_mat inv;
            if (arma::inv_sympd(inv, H))
                return hermitian_part(inv);
        }

        arma::vec ev;
        arma::cx_mat U;
        if (!arma::eig_sym(ev, U, H))
            throw NotPsdError("hermitian_inverse: eigendecomposition failed");
        const double lmax = ev.max();
        arma::cx_mat out(A.n_rows, A.n_cols, arma::fill::zeros);
        if (lmax <= 0.0)
            return out;
        const double threshold = lmax / max_condition;
        for (arma::uword d = 0; d < ev.n_elem; ++d)
            if (ev(d) > threshold)
                out += (1.0 / ev(d)) * U.col(d) * U.col(d).t();
        return hermitian_part(out);
    }

    HermitianSolver::HermitianSolver(const arma::cx_mat &A, double max_condition)
    {
        if (!A.is_square())
            throw DimensionError("HermitianSolver: matrix is not square");
        const arma::cx_mat H = hermitian_part(A);
        arma::cx_mat lower;
        if (H.n_elem > 0 && arma::chol(lower, H, "lower") && arma::rcond(H) * max_condition >= 1.0)
            factor_ = std::move(lower);
        else
            pseudo_inverse_ = hermitian_inverse(H, max_condition);
    }

    arma::cx_mat HermitianSolver::solve(const arma::cx_mat &B) const
    {
        if (factor_.n_elem == 0)
            return pseudo_inverse_ * B;
        const arma::cx_mat x = arma::solve(arma::trimatl(factor_), B, arma::solve_opts::fast);
        return arma::solve(arma::trimatu(factor_.t()), x, arma::solve_opts::fast);
    }

    arma::cx_mat HermitianSolver::inverse() const
    {
        if (factor_.n_elem == 0)
            return pseudo_inverse_;
        return hermitian_part(solve(arma::eye<arma::cx_mat>(factor_.n_rows, factor_.n_cols)));
    }

    namespace
    {
        void canonical_phase(arma::cx_vec &v)
        {
            const double peak = arma::abs(v).max();
            if (peak == 0.0)
                return;
            for (arma::uword i = 0; i < v.n_elem; ++i)
                if (std::abs(v(i)) > 1e-12 * peak)
                {
                    v *= std::conj(v(i)) / std::abs(v(i));
                    v(i) = std::abs(v(i));
                    return;
                }
        }
    }

    DominantEigenpair dominant_eigenpair(const arma::cx_mat &R)
    {
        if (!R.is_square() || R.n_elem == 0)
            throw DimensionError("dominant_eigenpair: matrix must be square and non-empty");

        arma::vec ev;
        arma::cx_mat U;
        if (!arma::eig_sym(ev, U, hermitian_part(R)))
            throw NotPsdError("dominant_eigenpair: eigendecomposition failed");

        DominantEigenpair out;
        const arma::uword n = ev.n_elem;
        out.value = ev(n - 1);
        const double tie = 1e-9 * std::max(std::abs(out.value), std::numeric_limits<double>::min());

        arma::uword first = n - 1;
        while (first > 0 && out.value - ev(first - 1) <= tie)
            --first;
        out.multiplicity = n - first;

        if (out.multiplicity == 1)
        {
            out.vector = U.col(n - 1);
            canonical_phase(out.vector);
            return out;
        }

        // Projector onto the dominant eigenspace; take the first column with non-negligible norm
        const arma::cx_mat basis = U.cols(first, n - 1);
        const arma::cx_mat P = basis * basis.t();
        for (arma::uword i = 0; i < n; ++i)
        {
            arma::cx_vec col = P.col(i);
            const double nrm = arma::norm(col);
            if (nrm > 1e-8)
            {
                out.vector = col / nrm;
                canonical_phase(out.vector);
                return out;
            }
        }
        out.vector = U.col(n - 1);
        canonical_phase(out.vector);
        return out;
    }

    double relative_frobenius_error(const arma::cx_mat &estimate, const arma::cx_mat &reference)
    {
        if (estimate.n_rows != reference.n_rows || estimate.n_cols != reference.n_cols)
            throw DimensionError("relative_frobenius_error: shape mismatch");
        const double ref = arma::norm(reference, "fro");
        const double diff = arma::norm(estimate - reference, "fro");
        if (ref == 0.0)
            return diff == 0.0 ? 0.0 : arma::datum::inf;
        return diff / ref;
    }
}
