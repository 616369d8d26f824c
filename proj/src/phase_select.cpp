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

#include "rismimo/phase_select.hpp"

#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rismimo
{
    namespace
    {
        struct Secular
        {
            const arma::vec &lambda;
            const arma::vec &weight; // |u_d^H b|^2
            double lambda_max;

            // f(t) with gamma = lambda_max + t
            double value(double t) const
            {
                double f = 0.0;
                for (arma::uword d = 0; d < lambda.n_elem; ++d)
                {
                    const double gap = t + lambda_max - lambda(d);
                    f += weight(d) / (gap * gap);
                }
                return f;
            }

            double derivative(double t) const
            {
                double df = 0.0;
                for (arma::uword d = 0; d < lambda.n_elem; ++d)
                {
                    const double gap = t + lambda_max - lambda(d);
                    df -= 2.0 * weight(d) / (gap * gap * gap);
                }
                return df;
            }
        };
    }

    double relaxed_objective(const arma::cx_mat &H, const arma::cx_vec &h, const arma::cx_vec &phi)
    {
        const double v = arma::norm(h + H * phi);
        return v * v;
    }

    RelaxedSolution solve_relaxed(const arma::cx_mat &H, const arma::cx_vec &h)
    {
        if (H.n_cols == 0)
            throw DimensionError("solve_relaxed: no RIS elements");
        if (H.n_rows != h.n_elem)
            throw DimensionError("solve_relaxed: H has " + std::to_string(H.n_rows) + " rows, h has " + std::to_string(h.n_elem));

        const double N = static_cast<double>(H.n_cols);
        RelaxedSolution out;

        // The maximizer is invariant to a common scaling of H and h; work on unit scale
        const double scale_norm = std::max(arma::norm(H, "fro"), arma::norm(h));
        if (scale_norm == 0.0)
        {
            out.phi.ones(H.n_cols);
            out.eigenvalues.zeros(H.n_cols);
            out.eigenvectors = arma::eye<arma::cx_mat>(H.n_cols, H.n_cols);
            out.linear_term_zero = true;
            return out;
        }
        const double s = 1.0 / scale_norm;
        const arma::cx_mat Hs = s * H;
        const arma::cx_vec hs = s * h;

        const arma::cx_mat A = hermitian_part(Hs.t() * Hs);
        const arma::cx_vec b = Hs.t() * hs;
        if (!arma::eig_sym(out.eigenvalues, out.eigenvectors, A))
            throw NotPsdError("solve_relaxed: eigendecomposition failed");
        const arma::vec &lambda = out.eigenvalues;
        const double lambda_max = lambda.max();
        const double unit = 1.0 / (s * s);

        const double b_norm = arma::norm(b);
        if (b_norm <= 1e-14 * std::max(1.0, lambda_max))
        {
            const DominantEigenpair dom = dominant_eigenpair(A);
            out.phi = std::sqrt(N) * dom.vector;
            out.multiplier = lambda_max * unit;
            out.linear_term_zero = true;
            return out;
        }

        const arma::cx_vec beta = out.eigenvectors.t() * b;
        const arma::vec weight = arma::square(arma::abs(beta));
        const Secular f{lambda, weight, lambda_max};

        const double eps0 = 1e-12 * (1.0 + lambda_max);
        double lo = eps0;
        double t = 0.0;
        if (f.value(lo) < N)
        {
            // No root above lambda_max: the linear term has no weight on the dominant eigenspace
            out.hard_case = true;
            arma::cx_vec phi(H.n_cols, arma::fill::zeros);
            const double tie = 1e-9 * std::max(1.0, lambda_max);
            for (arma::uword d = 0; d < lambda.n_elem; ++d)
                if (lambda_max - lambda(d) > tie)
                    phi += (beta(d) / (lambda_max - lambda(d))) * out.eigenvectors.col(d);
            const double missing = std::max(0.0, N - std::pow(arma::norm(phi), 2));
            const DominantEigenpair dom = dominant_eigenpair(A);
            out.phi = phi + std::sqrt(missing) * dom.vector;
            out.multiplier = lambda_max * unit;
            out.secular_residual = std::abs(std::pow(arma::norm(out.phi), 2) - N);
            log::debug("solve_relaxed: hard case, multiplier set to the largest eigenvalue");
            return out;
        }

        double hi = std::max(b_norm * std::sqrt(N), 2.0 * lo);
        while (f.value(hi) > N)
            hi *= 2.0;

        for (int iter = 0; iter < 400 && hi - lo > 1e-13 * hi; ++iter)
        {
            const double mid = 0.5 * (lo + hi);
            if (f.value(mid) > N)
                lo = mid;
            else
                hi = mid;
        }
        t = 0.5 * (lo + hi);

        // Newton on 1/sqrt(f) - 1/sqrt(N), which is close to linear in t
        for (int iter = 0; iter < 20; ++iter)
        {
            const double fv = f.value(t);
            const double residual = fv - N;
            if (std::abs(residual) <= 1e-14 * N)
                break;
            const double g = 1.0 / std::sqrt(fv) - 1.0 / std::sqrt(N);
            const double dg = -0.5 * f.derivative(t) / (fv * std::sqrt(fv));
            double next = t - g / dg;
            if (!(next > lo && next < hi) || !std::isfinite(next))
                next = 0.5 * (lo + hi);
            if (f.value(next) > N)
                lo = next;
            else
                hi = next;
            t = next;
        }

        const double gamma = lambda_max + t;
        arma::cx_vec coeff(lambda.n_elem);
        for (arma::uword d = 0; d < lambda.n_elem; ++d)
            coeff(d) = beta(d) / (gamma - lambda(d));
        out.phi = out.eigenvectors * coeff;
        out.multiplier = gamma * unit;
        out.secular_residual = std::abs(f.value(t) - N);
        return out;
    }

    arma::vec ps1_project(const RelaxedSolution &relaxed)
    {
        return PhaseConfig::angles_of(relaxed.phi);
    }

    arma::vec ps_per_element(const arma::cx_mat &H, const arma::cx_vec &h)
    {
        if (H.n_rows != h.n_elem)
            throw DimensionError("ps_per_element: dimension mismatch");
        if (arma::norm(h) == 0.0)
        {
            log::info("ps_per_element: zero direct-channel estimate, using zero phases");
            return arma::vec(H.n_cols, arma::fill::zeros);
        }
        return PhaseConfig::angles_of(H.t() * h);
    }

    namespace
    {
        // sqrt(lambda) u of the dominant eigenpair
        arma::cx_vec dominant_component(const arma::cx_mat &R)
        {
            const DominantEigenpair dom = dominant_eigenpair(R);
            return std::sqrt(std::max(dom.value, 0.0)) * dom.vector;
        }

        // Rank-one surrogate of the BS-RIS channel: the LOS path when present
        arma::cx_mat surface_surrogate(const SurfaceLinkStatistics &g)
        {
            if (!g.specular.empty())
                return g.specular[0];
            log::debug("ps_longterm: BS-RIS link without specular path, using the dominant Kronecker factors");
            return dominant_component(g.bs_corr) * dominant_component(g.ris_corr).t();
        }
    }

    PhaseConfig ps_longterm(const ChannelStatistics &stats, const RisAssignment &assignment)
    {
        assignment.validate();
        if (assignment.ue_count() != stats.ue_count || assignment.surfaces != stats.surfaces)
            throw DimensionError("ps_longterm: assignment does not match the statistics");
        const std::size_t L = stats.surfaces, N = stats.elements_per_surface;

        std::vector<arma::cx_mat> surrogates;
        for (std::size_t l = 0; l < L; ++l)
            surrogates.push_back(surface_surrogate(stats.bs_ris[l]));

        PhaseConfig cfg;
        cfg.angles.resize(stats.ue_count);
        for (std::size_t j = 0; j < stats.ue_count; ++j)
        {
            const auto &elements = assignment.ue_elements[j];
            if (elements.empty())
                continue;
            std::vector<arma::cx_vec> f_dom(L);
            arma::cx_mat H(stats.bs_antennas, elements.size());
            for (std::size_t c = 0; c < elements.size(); ++c)
            {
                const std::size_t l = elements[c] / N, n = elements[c] % N;
                if (f_dom[l].n_elem == 0)
                    f_dom[l] = dominant_component(stats.ris_link(j, l).second_moment());
                H.col(c) = surrogates[l].col(n) * f_dom[l](n);
            }
            const arma::cx_vec h = dominant_component(stats.direct[j].second_moment());
            cfg.angles[j] = ps1_project(solve_relaxed(H, h));
        }
        return cfg;
    }

    PhaseConfig ps_zero(const RisAssignment &assignment)
    {
        PhaseConfig cfg;
        for (const auto &e : assignment.ue_elements)
            cfg.angles.emplace_back(e.size(), arma::fill::zeros);
        return cfg;
    }

    PhaseConfig ps_random(const RisAssignment &assignment, Rng &rng)
    {
        PhaseConfig cfg;
        for (const auto &e : assignment.ue_elements)
        {
            arma::vec a(e.size());
            for (double &x : a)
                x = uniform_phase(rng);
            cfg.angles.push_back(std::move(a));
        }
        return cfg;
    }

    arma::cx_mat gather_assigned(const std::vector<arma::cx_mat> &cascaded, const RisAssignment &assignment,
                                 std::size_t i, std::size_t j)
    {
        const std::size_t L = assignment.surfaces, N = assignment.elements_per_surface;
        if (cascaded.size() != assignment.ue_count() * L)
            throw DimensionError("gather_assigned: cascaded estimates do not match the assignment");
        const auto &elements = assignment.ue_elements.at(j);
        const arma::uword M = cascaded.empty() ? 0 : cascaded[0].n_rows;
        arma::cx_mat out(M, elements.size());
        for (std::size_t c = 0; c < elements.size(); ++c)
            out.col(c) = cascaded[i * L + elements[c] / N].col(elements[c] % N);
        return out;
    }

    PhaseConfig select_from_estimates(const std::vector<arma::cx_vec> &direct, const std::vector<arma::cx_mat> &cascaded,
                                      const RisAssignment &assignment, bool per_element)
    {
        PhaseConfig cfg;
        cfg.angles.resize(assignment.ue_count());
        for (std::size_t j = 0; j < assignment.ue_count(); ++j)
        {
            if (assignment.ue_elements[j].empty())
                continue;
            const arma::cx_mat H = gather_assigned(cascaded, assignment, j, j);
            cfg.angles[j] = per_element ? ps_per_element(H, direct.at(j)) : ps1_project(solve_relaxed(H, direct.at(j)));
        }
        return cfg;
    }
}
