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

#include "rismimo/pilot_training.hpp"

#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rismimo
{
    arma::cx_mat dft_schedule(std::size_t size, std::size_t count)
    {
        if (count >= size)
            throw ConfigError("dft_schedule: at most size - 1 columns exclude the all-ones column");
        arma::cx_mat out(size, count);
        for (std::size_t c = 0; c < count; ++c)
            for (std::size_t t = 0; t < size; ++t)
            {
                // product reduced modulo size
                const double frac = static_cast<double>((t * (c + 1)) % size) / static_cast<double>(size);
                out(t, c) = std::polar(1.0, -2.0 * std::numbers::pi * frac);
            }
        return out;
    }

    std::vector<std::vector<std::size_t>> partition_surface(std::size_t rows, std::size_t cols, std::size_t parts)
    {
        const std::size_t n = rows * cols;
        if (parts == 0 || n % parts != 0)
            throw ConfigError("partition_surface: " + std::to_string(parts) + " sub-surfaces do not divide " + std::to_string(n) + " elements");

        // tile grid tr x tc with tr | rows, tc | cols, closest to square tiles
        std::size_t best_tr = 0;
        double best_score = 0.0;
        for (std::size_t tr = 1; tr <= parts; ++tr)
        {
            if (parts % tr != 0 || rows % tr != 0 || cols % (parts / tr) != 0)
                continue;
            const double h = static_cast<double>(rows / tr), w = static_cast<double>(cols / (parts / tr));
            const double score = std::min(h, w) / std::max(h, w);
            if (best_tr == 0 || score > best_score)
            {
                best_tr = tr;
                best_score = score;
            }
        }

        std::vector<std::vector<std::size_t>> out(parts);
        if (best_tr == 0)
        {
            const std::size_t size = n / parts;
            for (std::size_t g = 0; g < n; ++g)
                out[g / size].push_back(g);
            return out;
        }
        const std::size_t tc = parts / best_tr;
        const std::size_t th = rows / best_tr, tw = cols / tc;
        for (std::size_t v = 0; v < rows; ++v)
            for (std::size_t h = 0; h < cols; ++h)
                out[(v / th) * tc + h / tw].push_back(v * cols + h);
        return out;
    }

    PilotPlan PilotPlan::make(std::size_t ue_count, std::size_t surfaces, std::size_t sub_surfaces, std::size_t ris_rows,
                              std::size_t ris_cols, double pilot_power, std::size_t repetitions)
    {
        if (ue_count == 0)
            throw ConfigError("PilotPlan: no UEs");
        if (!(pilot_power > 0.0))
            throw ConfigError("PilotPlan: pilot power must be positive");
        if (repetitions == 0)
            throw ConfigError("PilotPlan: repetitions must be positive");

        PilotPlan p;
        p.ue_count = ue_count;
        p.surfaces = surfaces;
        p.sub_surfaces = sub_surfaces;
        p.elements_per_surface = surfaces > 0 ? ris_rows * ris_cols : 0;
        p.pilot_power = pilot_power;
        p.repetitions = repetitions;

        p.ue_pilots.set_size(ue_count, ue_count);
        for (std::size_t k = 0; k < ue_count; ++k)
            for (std::size_t t = 0; t < ue_count; ++t)
            {
                const double frac = static_cast<double>((t * k) % ue_count) / static_cast<double>(ue_count);
                p.ue_pilots(t, k) = std::polar(1.0 / std::sqrt(static_cast<double>(ue_count)), -2.0 * std::numbers::pi * frac);
            }

        p.schedule = dft_schedule(p.intervals(), surfaces * sub_surfaces);
        if (surfaces > 0)
        {
            p.sub_surface_elements = partition_surface(ris_rows, ris_cols, sub_surfaces);
            p.sub_surface_of.assign(p.elements_per_surface, 0);
            for (std::size_t r = 0; r < sub_surfaces; ++r)
                for (std::size_t n : p.sub_surface_elements[r])
                    p.sub_surface_of[n] = r;
        }
        return p;
    }

    namespace
    {
        arma::cx_mat noise_matrix(arma::uword rows, arma::uword cols, double noise_power, Rng &rng)
        {
            if (noise_power == 0.0)
                return arma::cx_mat(rows, cols, arma::fill::zeros);
            return std::sqrt(noise_power) * complex_gaussian_matrix(rows, cols, rng);
        }

        arma::uvec to_uvec(const std::vector<std::size_t> &v)
        {
            arma::uvec out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                out(i) = v[i];
            return out;
        }
    }

    std::vector<arma::cx_mat> simulate_pilot_rx_short(const ChannelRealization &realization, const PilotPlan &plan,
                                                      double noise_power, Rng &rng)
    {
        const std::size_t K = plan.ue_count, L = plan.surfaces, R = plan.sub_surfaces;
        if (realization.direct.size() != K || realization.bs_ris.size() != L)
            throw DimensionError("simulate_pilot_rx_short: realization does not match the pilot plan");
        const arma::uword M = realization.direct[0].n_elem;
        const double amplitude = std::sqrt(static_cast<double>(K) * plan.pilot_power);

        // sub-surface column sums G_l[:, sub] f_il[sub]
        std::vector<arma::cx_vec> sums(K * L * R);
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t l = 0; l < L; ++l)
                for (std::size_t r = 0; r < R; ++r)
                {
                    const arma::uvec sub = to_uvec(plan.sub_surface_elements[r]);
                    sums[(i * L + l) * R + r] = realization.bs_ris[l].cols(sub) * realization.ue_ris[i * L + l](sub);
                }

        std::vector<arma::cx_mat> blocks;
        blocks.reserve(plan.intervals());
        for (std::size_t t = 0; t < plan.intervals(); ++t)
        {
            arma::cx_mat X(M, K);
            for (std::size_t i = 0; i < K; ++i)
            {
                arma::cx_vec x = realization.direct[i];
                for (std::size_t l = 0; l < L; ++l)
                    for (std::size_t r = 0; r < R; ++r)
                        x += plan.schedule(t, l * R + r) * sums[(i * L + l) * R + r];
                X.col(i) = amplitude * x;
            }
            blocks.push_back(X * plan.ue_pilots.st() + noise_matrix(M, K, noise_power, rng));
        }
        return blocks;
    }

    ShortTermObservation sufficient_stats_short(const std::vector<arma::cx_mat> &blocks, const PilotPlan &plan)
    {
        if (blocks.size() != plan.intervals())
            throw DimensionError("sufficient_stats_short: expected " + std::to_string(plan.intervals()) + " pilot blocks");
        const std::size_t K = plan.ue_count, LR = plan.surfaces * plan.sub_surfaces;
        const double scale = 1.0 / std::sqrt(static_cast<double>(plan.intervals()));

        // despread: z_{k,t} = Y_t conj(phi_k)
        std::vector<arma::cx_mat> despread;
        despread.reserve(blocks.size());
        for (const arma::cx_mat &Y : blocks)
            despread.push_back(Y * arma::conj(plan.ue_pilots));

        ShortTermObservation obs;
        obs.direct.resize(K);
        obs.sub_sums.assign(K, std::vector<arma::cx_vec>(LR));
        for (std::size_t k = 0; k < K; ++k)
        {
            arma::cx_vec zh(blocks[0].n_rows, arma::fill::zeros);
            for (const arma::cx_mat &Z : despread)
                zh += Z.col(k);
            obs.direct[k] = scale * zh;
            for (std::size_t c = 0; c < LR; ++c)
            {
                arma::cx_vec zc(blocks[0].n_rows, arma::fill::zeros);
                for (std::size_t t = 0; t < despread.size(); ++t)
                    zc += std::conj(plan.schedule(t, c)) * despread[t].col(k);
                obs.sub_sums[k][c] = scale * zc;
            }
        }
        return obs;
    }

    ShortTermLmmse::ShortTermLmmse(const ChannelStatistics &stats, const PilotPlan &plan, double noise_power)
        : stats_(&stats), plan_(plan), noise_power_(noise_power), gain_(plan.short_term_gain())
    {
        stats.validate();
        if (stats.ue_count != plan.ue_count || stats.surfaces != plan.surfaces ||
            (stats.surfaces > 0 && stats.elements_per_surface != plan.elements_per_surface))
            throw DimensionError("ShortTermLmmse: statistics do not match the pilot plan");
        if (noise_power < 0.0)
            throw ConfigError("ShortTermLmmse: negative noise power");

        const std::size_t K = plan.ue_count, L = plan.surfaces, R = plan.sub_surfaces;
        const arma::uword M = stats.bs_antennas;
        const arma::cx_mat I = arma::eye<arma::cx_mat>(M, M);

        for (std::size_t k = 0; k < K; ++k)
        {
            direct_moments_.push_back(stats.direct[k].second_moment());
            direct_systems_.emplace_back(gain_ * direct_moments_.back() + noise_power * I);
        }

        links_.resize(K * L);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < L; ++l)
            {
                LinkFilters &f = links_[k * L + l];
                f.rf = stats.ris_link(k, l).second_moment();
                const arma::cx_mat &Rris = stats.bs_ris[l].ris_corr;
                f.diffuse_weight.zeros(plan.elements_per_surface);
                for (std::size_t r = 0; r < R; ++r)
                {
                    const auto &sub = plan.sub_surface_elements[r];
                    for (std::size_t n : sub)
                        for (std::size_t n2 : sub)
                            f.diffuse_weight(n) += f.rf(n, n2) * Rris(n2, n);
                    f.systems.emplace_back(gain_ * sub_sum_moment(k, l, r) + noise_power * I);
                }
            }
    }

    arma::cx_mat ShortTermLmmse::sub_sum_moment(std::size_t k, std::size_t l, std::size_t r) const
    {
        const SurfaceLinkStatistics &g = stats_->bs_ris.at(l);
        const arma::uvec sub = to_uvec(plan_.sub_surface_elements.at(r));
        const arma::cx_mat X = links_.at(k * plan_.surfaces + l).rf(sub, sub);
        arma::cx_mat out = arma::trace(X * g.ris_corr(sub, sub)) * g.bs_corr;
        for (const arma::cx_mat &Gs : g.specular)
        {
            const arma::cx_mat Gsub = Gs.cols(sub);
            out += Gsub * X * Gsub.t();
        }
        return hermitian_part(out);
    }

    arma::cx_mat ShortTermLmmse::column_cross_moment(std::size_t k, std::size_t l, std::size_t n) const
    {
        const std::size_t r = plan_.sub_surface_of.at(n);
        arma::cx_mat out(stats_->bs_antennas, stats_->bs_antennas, arma::fill::zeros);
        for (std::size_t n2 : plan_.sub_surface_elements[r])
            out += stats_->cascaded_column_moment(k, l, n, n2);
        return out;
    }

    arma::cx_mat ShortTermLmmse::cascaded_filter(std::size_t k, std::size_t l, std::size_t n) const
    {
        const std::size_t r = plan_.sub_surface_of.at(n);
        return std::sqrt(gain_) * column_cross_moment(k, l, n) * links_.at(k * plan_.surfaces + l).systems.at(r).inverse();
    }

    arma::cx_mat ShortTermLmmse::direct_filter(std::size_t k) const
    {
        return std::sqrt(gain_) * direct_moments_.at(k) * direct_systems_.at(k).inverse();
    }

    void ShortTermLmmse::estimate(const ShortTermObservation &obs, EstimateSet &out) const
    {
        const std::size_t K = plan_.ue_count, L = plan_.surfaces, R = plan_.sub_surfaces;
        const arma::uword M = stats_->bs_antennas, N = plan_.elements_per_surface;
        const double root = std::sqrt(gain_);
        if (obs.direct.size() != K || obs.sub_sums.size() != K)
            throw DimensionError("ShortTermLmmse::estimate: observation does not match the pilot plan");

        out.direct.resize(K);
        out.cascaded.resize(K * L);
        for (std::size_t k = 0; k < K; ++k)
        {
            out.direct[k] = root * (direct_moments_[k] * direct_systems_[k].solve(obs.direct[k]));
            for (std::size_t l = 0; l < L; ++l)
            {
                const LinkFilters &f = links_[k * L + l];
                const SurfaceLinkStatistics &g = stats_->bs_ris[l];
                arma::cx_mat H(M, N, arma::fill::zeros);
                for (std::size_t r = 0; r < R; ++r)
                {
                    const arma::uvec sub = to_uvec(plan_.sub_surface_elements[r]);
                    const arma::cx_vec y = root * f.systems[r].solve(obs.sub_sums[k][l * R + r]);
                    const arma::cx_vec diffuse = g.bs_corr * y;
                    arma::cx_mat cols = diffuse * f.diffuse_weight(sub).st();
                    const arma::cx_mat X = f.rf(sub, sub);
                    for (const arma::cx_mat &Gs : g.specular)
                    {
                        const arma::cx_mat Gsub = Gs.cols(sub);
                        const arma::cx_vec alpha = X * (Gsub.t() * y);
                        cols += Gsub.each_row() % alpha.st();
                    }
                    H.cols(sub) = cols;
                }
                out.cascaded[k * L + l] = std::move(H);
            }
        }
    }

    void ls_short(const ShortTermObservation &obs, const PilotPlan &plan, EstimateSet &out)
    {
        const std::size_t K = plan.ue_count, L = plan.surfaces, R = plan.sub_surfaces;
        const double inv_root = 1.0 / std::sqrt(plan.short_term_gain());
        out.direct.resize(K);
        out.cascaded.resize(K * L);
        for (std::size_t k = 0; k < K; ++k)
        {
            out.direct[k] = inv_root * obs.direct[k];
            for (std::size_t l = 0; l < L; ++l)
            {
                arma::cx_mat H(obs.direct[k].n_elem, plan.elements_per_surface);
                for (std::size_t r = 0; r < R; ++r)
                {
                    const auto &sub = plan.sub_surface_elements[r];
                    const arma::cx_vec share = (inv_root / static_cast<double>(sub.size())) * obs.sub_sums[k][l * R + r];
                    for (std::size_t n : sub)
                        H.col(n) = share;
                }
                out.cascaded[k * L + l] = std::move(H);
            }
        }
    }

    std::vector<arma::cx_vec> simulate_pilot_rx_long(const std::vector<arma::cx_vec> &overall, const PilotPlan &plan,
                                                     double noise_power, Rng &rng)
    {
        if (overall.size() != plan.ue_count)
            throw DimensionError("simulate_pilot_rx_long: channel count does not match the pilot plan");
        const double root = std::sqrt(plan.overall_gain());
        std::vector<arma::cx_vec> z;
        z.reserve(overall.size());
        for (const arma::cx_vec &b : overall)
        {
            arma::cx_vec n = noise_power > 0.0 ? arma::cx_vec(std::sqrt(noise_power) * complex_gaussian_vector(b.n_elem, rng))
                                               : arma::cx_vec(b.n_elem, arma::fill::zeros);
            z.push_back(root * b + n);
        }
        return z;
    }

    arma::cx_mat overall_second_moment(const ChannelStatistics &stats, std::size_t k,
                                       const std::vector<arma::cx_vec> &surface_diagonals)
    {
        if (surface_diagonals.size() != stats.surfaces)
            throw DimensionError("overall_second_moment: one surface diagonal per RIS is required");
        arma::cx_mat out = stats.direct.at(k).second_moment();
        for (std::size_t l = 0; l < stats.surfaces; ++l)
        {
            const arma::cx_vec &d = surface_diagonals[l];
            if (d.n_elem != stats.elements_per_surface)
                throw DimensionError("overall_second_moment: surface diagonal has wrong length");
            // Phi Rf Phi^H
            arma::cx_mat T = stats.ris_link(k, l).second_moment();
            T.each_col() %= d;
            T.each_row() %= arma::conj(d).st();
            const SurfaceLinkStatistics &g = stats.bs_ris[l];
            out += arma::trace(g.ris_corr * T) * g.bs_corr;
            for (const arma::cx_mat &Gs : g.specular)
                out += Gs * T * Gs.t();
        }
        return hermitian_part(out);
    }

    OverallLmmse::OverallLmmse(const ChannelStatistics &stats, const std::vector<arma::cx_vec> &surface_diagonals,
                               double gain, double noise_power)
    {
        if (!(gain > 0.0) || noise_power < 0.0)
            throw ConfigError("OverallLmmse: pilot gain must be positive and noise power non-negative");
        const arma::uword M = stats.bs_antennas;
        const arma::cx_mat I = arma::eye<arma::cx_mat>(M, M);
        for (std::size_t k = 0; k < stats.ue_count; ++k)
        {
            const arma::cx_mat Rb = overall_second_moment(stats, k, surface_diagonals);
            const arma::cx_mat Q = hermitian_inverse(gain * Rb + noise_power * I);
            moments_.push_back(Rb);
            filters_.push_back(std::sqrt(gain) * Rb * Q);
            errors_.push_back(psd_repair(Rb - gain * Rb * Q * Rb).matrix);
        }
    }

    void OverallLmmse::estimate(const std::vector<arma::cx_vec> &observations, EstimateSet &out) const
    {
        if (observations.size() != filters_.size())
            throw DimensionError("OverallLmmse::estimate: observation count does not match");
        out.overall.resize(filters_.size());
        out.error_covariance = errors_;
        for (std::size_t k = 0; k < filters_.size(); ++k)
            out.overall[k] = filters_[k] * observations[k];
    }

    void ls_overall(const std::vector<arma::cx_vec> &observations, double gain, double noise_power, EstimateSet &out)
    {
        const double inv_root = 1.0 / std::sqrt(gain);
        out.overall.resize(observations.size());
        out.error_covariance.resize(observations.size());
        for (std::size_t k = 0; k < observations.size(); ++k)
        {
            out.overall[k] = inv_root * observations[k];
            out.error_covariance[k] = (noise_power / gain) * arma::eye<arma::cx_mat>(observations[k].n_elem, observations[k].n_elem);
        }
    }

    std::vector<arma::cx_mat> error_covariance_mc(const OverallDraw &draw, std::size_t draws)
    {
        if (draws < 1000)
            throw ConfigError("error_covariance_mc: at least 1000 draws are required");
        std::vector<arma::cx_mat> acc;
        for (std::size_t d = 0; d < draws; ++d)
        {
            const auto [truth, estimate] = draw(d);
            if (truth.size() != estimate.size())
                throw DimensionError("error_covariance_mc: true and estimated channel counts differ");
            if (acc.empty())
                for (const auto &b : truth)
                    acc.emplace_back(b.n_elem, b.n_elem, arma::fill::zeros);
            for (std::size_t k = 0; k < truth.size(); ++k)
            {
                const arma::cx_vec e = truth[k] - estimate[k];
                acc[k] += e * e.t();
            }
        }
        for (auto &C : acc)
            C = psd_repair(C / static_cast<double>(draws)).matrix;
        return acc;
    }
}
