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

#include "rismimo/validation/oracles.hpp"

#include "rismimo/correlation.hpp"
#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rismimo::validation
{
    namespace
    {
        constexpr arma::uword batch = 512;

        ScatteringSpec random_spec(Rng &rng)
        {
            const double deg = std::numbers::pi / 180.0;
            return {uniform(rng, -60.0, 60.0) * deg, uniform(rng, -20.0, 20.0) * deg, 15.0 * deg, 15.0 * deg};
        }

        arma::cx_vec random_response(const ArrayGeometry &geometry, Rng &rng)
        {
            const ScatteringSpec s = random_spec(rng);
            return array_response(geometry, s.azimuth, s.elevation);
        }

        UeLinkStatistics random_ue_link(const ArrayGeometry &geometry, std::size_t specular, Rng &rng)
        {
            UeLinkStatistics link;
            link.gain = uniform(rng, 0.5, 1.5);
            const double share = link.gain / static_cast<double>(specular + 1);
            for (std::size_t s = 0; s < specular; ++s)
                link.specular.push_back(std::sqrt(share) * random_response(geometry, rng));
            link.nonspecular_corr = share * correlation_closed_form(geometry, random_spec(rng));
            link.los = specular > 0;
            link.kfactor = static_cast<double>(specular);
            return link;
        }

        SurfaceLinkStatistics random_surface_link(const ArrayGeometry &bs, const ArrayGeometry &ris, std::size_t specular,
                                                  Rng &rng)
        {
            SurfaceLinkStatistics link;
            link.gain = uniform(rng, 0.5, 1.5);
            const double share = link.gain / static_cast<double>(specular + 1);
            for (std::size_t s = 0; s < specular; ++s)
            {
                const arma::cx_vec a_bs = random_response(bs, rng);
                const arma::cx_vec a_ris = random_response(ris, rng);
                link.specular.push_back(std::sqrt(share) * a_bs * a_ris.t());
            }
            link.los_fixed = true;
            link.bs_corr = share * correlation_closed_form(bs, random_spec(rng));
            link.ris_corr = correlation_closed_form(ris, random_spec(rng));
            return link;
        }
    }

    ChannelStatistics toy_statistics(const ToySpec &spec, Rng &rng)
    {
        const ArrayGeometry bs = ArrayGeometry::ula(spec.bs_antennas, 0.5);
        const ArrayGeometry ris = ArrayGeometry::upa(spec.ris_cols, spec.ris_rows, 0.25);

        ChannelStatistics stats;
        stats.bs_antennas = spec.bs_antennas;
        stats.elements_per_surface = ris.size();
        stats.surfaces = spec.surfaces;
        stats.ue_count = spec.ue_count;
        for (std::size_t k = 0; k < spec.ue_count; ++k)
            stats.direct.push_back(random_ue_link(bs, spec.ue_specular, rng));
        for (std::size_t k = 0; k < spec.ue_count; ++k)
            for (std::size_t l = 0; l < spec.surfaces; ++l)
                stats.ue_ris.push_back(random_ue_link(ris, spec.ue_specular, rng));
        for (std::size_t l = 0; l < spec.surfaces; ++l)
            stats.bs_ris.push_back(random_surface_link(bs, ris, spec.surface_specular, rng));
        stats.finalize();
        return stats;
    }

    RegressionAccumulator::RegressionAccumulator(arma::uword target_dim, arma::uword observation_dim)
        : sxz_(target_dim, observation_dim, arma::fill::zeros), szz_(observation_dim, observation_dim, arma::fill::zeros),
          xbuf_(target_dim, batch), zbuf_(observation_dim, batch)
    {
    }

    void RegressionAccumulator::add(const arma::cx_vec &x, const arma::cx_vec &z)
    {
        if (x.n_elem != xbuf_.n_rows || z.n_elem != zbuf_.n_rows)
            throw DimensionError("RegressionAccumulator::add: dimension mismatch");
        xbuf_.col(fill_) = x;
        zbuf_.col(fill_) = z;
        ++draws_;
        if (++fill_ == batch)
            flush();
    }

    void RegressionAccumulator::flush()
    {
        if (fill_ == 0)
            return;
        const arma::cx_mat X = xbuf_.head_cols(fill_);
        const arma::cx_mat Z = zbuf_.head_cols(fill_);
        sxz_ += X * Z.t();
        szz_ += Z * Z.t();
        fill_ = 0;
    }

    arma::cx_mat RegressionAccumulator::filter()
    {
        flush();
        if (draws_ == 0)
            throw ConfigError("RegressionAccumulator::filter: no draws");
        return arma::solve(hermitian_part(szz_), sxz_.t()).t();
    }

    MomentAccumulator::MomentAccumulator(arma::uword dim) : sum_(dim, dim, arma::fill::zeros), buf_(dim, batch) {}

    void MomentAccumulator::add(const arma::cx_vec &x)
    {
        if (x.n_elem != buf_.n_rows)
            throw DimensionError("MomentAccumulator::add: dimension mismatch");
        buf_.col(fill_) = x;
        ++draws_;
        if (++fill_ == batch)
            flush();
    }

    void MomentAccumulator::flush()
    {
        if (fill_ == 0)
            return;
        const arma::cx_mat X = buf_.head_cols(fill_);
        sum_ += X * X.t();
        fill_ = 0;
    }

    arma::cx_mat MomentAccumulator::mean()
    {
        flush();
        if (draws_ == 0)
            throw ConfigError("MomentAccumulator::mean: no draws");
        return sum_ / static_cast<double>(draws_);
    }

    arma::cx_mat cascaded_moment_closed(const ChannelStatistics &stats, std::size_t k, std::size_t l)
    {
        const arma::uword M = stats.bs_antennas;
        const arma::uword N = stats.elements_per_surface;
        arma::cx_mat out(M * N, M * N);
        for (arma::uword n = 0; n < N; ++n)
            for (arma::uword n2 = 0; n2 < N; ++n2)
                out.submat(n * M, n2 * M, n * M + M - 1, n2 * M + M - 1) = stats.cascaded_column_moment(k, l, n, n2);
        return out;
    }

    arma::cx_mat cascaded_moment_mc(const ChannelStatistics &stats, std::size_t k, std::size_t l, std::size_t draws,
                                    Rng &rng)
    {
        const SurfaceLinkStatistics &g = stats.bs_ris.at(l);
        const UeLinkStatistics &f = stats.ris_link(k, l);
        MomentAccumulator acc(stats.bs_antennas * stats.elements_per_surface);
        for (std::size_t d = 0; d < draws; ++d)
        {
            const arma::cx_mat G = g.sample(rng);
            const arma::cx_vec fv = f.sample(rng);
            const arma::cx_mat H = G * arma::diagmat(fv);
            acc.add(arma::vectorise(H));
        }
        return acc.mean();
    }

    RelaxedCheck check_relaxed(const arma::cx_mat &H, const arma::cx_vec &h, const arma::cx_vec &phi, double multiplier)
    {
        const double N = static_cast<double>(H.n_cols);
        const arma::cx_mat A = hermitian_part(H.t() * H);
        const arma::cx_vec b = H.t() * h;

        arma::vec lambda;
        arma::cx_mat U;
        if (!arma::eig_sym(lambda, U, A))
            throw NotPsdError("check_relaxed: eigendecomposition failed");
        const double lmax = lambda.max();

        RelaxedCheck out;
        const arma::cx_vec grad = A * phi + b - multiplier * phi;
        const double scale = std::max(lmax * arma::norm(phi) + arma::norm(b), std::numeric_limits<double>::min());
        out.stationarity = arma::norm(grad) / scale;
        out.feasibility = std::abs(arma::cdot(phi, phi).real() - N) / N;
        out.dual_gap = std::max(0.0, lmax - multiplier) / std::max(lmax, std::numeric_limits<double>::min());

        const arma::cx_vec c = U.t() * b;
        double f = 0.0;
        for (arma::uword i = 0; i < lambda.n_elem; ++i)
        {
            const double gap = multiplier - lambda(i);
            const double w = std::norm(c(i));
            if (w > 0.0)
                f += w / (gap * gap);
        }
        out.secular = std::abs(f - N);
        return out;
    }

    double random_unit_modulus_best(const arma::cx_mat &H, const arma::cx_vec &h, std::size_t candidates, Rng &rng)
    {
        double best = 0.0;
        arma::cx_vec phi(H.n_cols);
        for (std::size_t c = 0; c < candidates; ++c)
        {
            for (arma::uword n = 0; n < phi.n_elem; ++n)
                phi(n) = std::polar(1.0, uniform_phase(rng));
            const arma::cx_vec y = h + H * phi;
            best = std::max(best, arma::cdot(y, y).real());
        }
        return best;
    }

    GridSearch grid_maxmin_two(const SinrCoefficients &coeffs, double fraction)
    {
        if (coeffs.size() != 2)
            throw DimensionError("grid_maxmin_two: exactly two UEs required");
        const long steps = std::lround(1.0 / fraction);
        const double pmax = coeffs.max_power;
        const arma::vec &a = coeffs.signal;
        const arma::mat &g = coeffs.cross;
        const arma::vec &n = coeffs.noise;
        auto power = [&](long i) { return pmax * static_cast<double>(i) / static_cast<double>(steps); };
        auto min_sinr = [&](long i, long j) {
            const double p1 = power(i);
            const double p2 = power(j);
            const double s1 = p1 * a(0) / (p2 * g(0, 1) + p1 * (g(0, 0) - a(0)) + n(0));
            const double s2 = p2 * a(1) / (p1 * g(1, 0) + p2 * (g(1, 1) - a(1)) + n(1));
            return std::min(s1, s2);
        };

        GridSearch out;
        long bi = 0;
        long bj = 0;
        for (long i = 0; i <= steps; ++i)
            for (long j = 0; j <= steps; ++j)
            {
                const double v = min_sinr(i, j);
                if (v > out.best_min_sinr)
                {
                    out.best_min_sinr = v;
                    bi = i;
                    bj = j;
                }
            }
        out.best_powers = {power(bi), power(bj)};
        for (long di = -1; di <= 1; ++di)
            for (long dj = -1; dj <= 1; ++dj)
            {
                const long i = bi + di;
                const long j = bj + dj;
                if (i < 0 || j < 0 || i > steps || j > steps)
                    continue;
                out.cell_variation = std::max(out.cell_variation, std::abs(min_sinr(i, j) - out.best_min_sinr));
            }
        return out;
    }

    SinrCoefficients random_coefficients(std::size_t ue_count, double max_power, Rng &rng)
    {
        SinrCoefficients c;
        c.max_power = max_power;
        c.signal.set_size(ue_count);
        c.cross.set_size(ue_count, ue_count);
        c.noise.set_size(ue_count);
        for (std::size_t k = 0; k < ue_count; ++k)
        {
            c.signal(k) = std::pow(10.0, uniform(rng, 1.0, 3.0));
            c.noise(k) = std::pow(10.0, uniform(rng, -2.0, 0.0));
            for (std::size_t i = 0; i < ue_count; ++i)
                c.cross(k, i) = i == k ? c.signal(k) * (1.0 + uniform(rng, 0.0, 0.2)) : std::pow(10.0, uniform(rng, -1.0, 1.0));
        }
        return c;
    }
}
