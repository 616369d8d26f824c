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

#include "rismimo/channel_model.hpp"

#include "rismimo/errors.hpp"
#include "rismimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace rismimo
{
    void UeLinkStatistics::finalize()
    {
        nonspecular_sqrt = psd_sqrt(nonspecular_corr);
    }

    arma::cx_mat UeLinkStatistics::second_moment() const
    {
        arma::cx_mat out = nonspecular_corr;
        for (const arma::cx_vec &s : specular)
            out += s * s.t();
        return out;
    }

    arma::cx_vec UeLinkStatistics::sample(Rng &rng, std::vector<double> *phases) const
    {
        if (nonspecular_sqrt.n_rows != nonspecular_corr.n_rows)
            throw DimensionError("UeLinkStatistics::sample: finalize() has not been called");
        arma::cx_vec x = nonspecular_sqrt * complex_gaussian_vector(nonspecular_sqrt.n_rows, rng);
        for (const arma::cx_vec &s : specular)
        {
            const double theta = uniform_phase(rng);
            if (phases)
                phases->push_back(theta);
            x += std::polar(1.0, theta) * s;
        }
        return x;
    }

    void SurfaceLinkStatistics::finalize()
    {
        nonspecular = KroneckerSampler(bs_corr, ris_corr);
    }

    arma::cx_mat SurfaceLinkStatistics::sample(Rng &rng, std::vector<double> *phases) const
    {
        if (nonspecular.bs_sqrt().n_rows != bs_corr.n_rows || nonspecular.ris_sqrt().n_rows != ris_corr.n_rows)
            throw DimensionError("SurfaceLinkStatistics::sample: finalize() has not been called");
        arma::cx_mat G = nonspecular.sample(rng);
        for (std::size_t s = 0; s < specular.size(); ++s)
        {
            if (s == 0 && los_fixed)
            {
                G += specular[0];
                continue;
            }
            const double theta = uniform_phase(rng);
            if (phases)
                phases->push_back(theta);
            G += std::polar(1.0, theta) * specular[s];
        }
        return G;
    }

    void ChannelStatistics::validate() const
    {
        auto fail = [](const std::string &msg) { throw DimensionError("ChannelStatistics: " + msg); };
        if (direct.size() != ue_count)
            fail("direct links do not match ue_count");
        if (ue_ris.size() != ue_count * surfaces)
            fail("UE-RIS links do not match ue_count * surfaces");
        if (bs_ris.size() != surfaces)
            fail("BS-RIS links do not match surfaces");
        auto check_ue = [&](const UeLinkStatistics &s, std::size_t dim, const char *what) {
            if (s.nonspecular_corr.n_rows != dim || s.nonspecular_corr.n_cols != dim)
                fail(std::string(what) + " correlation has wrong size");
            for (const auto &v : s.specular)
                if (v.n_elem != dim)
                    fail(std::string(what) + " specular vector has wrong size");
        };
        for (const auto &s : direct)
            check_ue(s, bs_antennas, "direct");
        for (const auto &s : ue_ris)
            check_ue(s, elements_per_surface, "UE-RIS");
        for (const auto &s : bs_ris)
        {
            if (s.bs_corr.n_rows != bs_antennas || s.bs_corr.n_cols != bs_antennas)
                fail("BS-side correlation has wrong size");
            if (s.ris_corr.n_rows != elements_per_surface || s.ris_corr.n_cols != elements_per_surface)
                fail("RIS-side correlation has wrong size");
            for (const auto &g : s.specular)
                if (g.n_rows != bs_antennas || g.n_cols != elements_per_surface)
                    fail("BS-RIS specular matrix has wrong size");
        }
    }

    void ChannelStatistics::finalize()
    {
        validate();
        for (auto &s : direct)
            s.finalize();
        for (auto &s : ue_ris)
            s.finalize();
        for (auto &s : bs_ris)
            s.finalize();
    }

    arma::cx_mat ChannelStatistics::cascaded_column_moment(std::size_t k, std::size_t l, std::size_t n, std::size_t n2) const
    {
        const arma::cx_mat Rf = ris_link(k, l).second_moment();
        const SurfaceLinkStatistics &g = bs_ris.at(l);
        arma::cx_mat out = g.ris_corr(n2, n) * g.bs_corr;
        for (const arma::cx_mat &Gs : g.specular)
            out += Gs.col(n) * Gs.col(n2).t();
        return Rf(n, n2) * out;
    }

    ChannelRealization sample_realization(const ChannelStatistics &stats, Rng &rng)
    {
        ChannelRealization r;
        r.direct.reserve(stats.ue_count);
        r.direct_phases.resize(stats.ue_count);
        for (std::size_t k = 0; k < stats.ue_count; ++k)
            r.direct.push_back(stats.direct[k].sample(rng, &r.direct_phases[k]));
        r.ue_ris.reserve(stats.ue_ris.size());
        r.ue_ris_phases.resize(stats.ue_ris.size());
        for (std::size_t i = 0; i < stats.ue_ris.size(); ++i)
            r.ue_ris.push_back(stats.ue_ris[i].sample(rng, &r.ue_ris_phases[i]));
        r.bs_ris.reserve(stats.surfaces);
        r.bs_ris_phases.resize(stats.surfaces);
        for (std::size_t l = 0; l < stats.surfaces; ++l)
            r.bs_ris.push_back(stats.bs_ris[l].sample(rng, &r.bs_ris_phases[l]));
        return r;
    }

    arma::cx_mat cascaded_channel(const ChannelRealization &realization, std::size_t k, std::size_t l)
    {
        const std::size_t L = realization.bs_ris.size();
        if (l >= L || k * L + l >= realization.ue_ris.size())
            throw AssignmentError("cascaded_channel: UE/RIS index out of range");
        arma::cx_mat H = realization.bs_ris[l];
        H.each_row() %= realization.ue_ris[k * L + l].st();
        return H;
    }

    arma::cx_mat cascaded_assigned(const ChannelRealization &realization, const RisAssignment &assignment,
                                   std::size_t i, std::size_t j)
    {
        assignment.validate();
        const std::size_t L = realization.bs_ris.size();
        const std::size_t N = assignment.elements_per_surface;
        if (assignment.surfaces != L || i >= assignment.ue_count() || j >= assignment.ue_count())
            throw AssignmentError("cascaded_assigned: assignment does not match the realization");
        const auto &elements = assignment.ue_elements[j];
        const arma::uword M = L > 0 ? realization.bs_ris[0].n_rows : realization.direct.at(i).n_elem;
        arma::cx_mat out(M, elements.size());
        for (std::size_t c = 0; c < elements.size(); ++c)
        {
            const std::size_t l = elements[c] / N, n = elements[c] % N;
            out.col(c) = realization.bs_ris[l].col(n) * realization.ue_ris[i * L + l](n);
        }
        return out;
    }

    std::vector<arma::cx_vec> overall_channel(const ChannelRealization &realization, const RisAssignment &assignment,
                                              const PhaseConfig &phases)
    {
        phases.check(assignment);
        const std::size_t K = realization.direct.size();
        if (assignment.ue_count() != K)
            throw DimensionError("overall_channel: assignment covers a different number of UEs");
        std::vector<arma::cx_vec> b(realization.direct);
        for (std::size_t j = 0; j < K; ++j)
        {
            if (assignment.ue_elements[j].empty())
                continue;
            const arma::cx_vec phi = phases.coefficients(j);
            for (std::size_t i = 0; i < K; ++i)
                b[i] += cascaded_assigned(realization, assignment, i, j) * phi;
        }
        return b;
    }

    std::vector<arma::cx_vec> overall_channel_surface_form(const ChannelRealization &realization,
                                                           const RisAssignment &assignment, const PhaseConfig &phases)
    {
        phases.check(assignment);
        const std::size_t K = realization.direct.size();
        const std::size_t L = realization.bs_ris.size();
        if (assignment.ue_count() != K || assignment.surfaces != L)
            throw DimensionError("overall_channel_surface_form: assignment does not match the realization");
        std::vector<arma::cx_vec> b(realization.direct);
        for (std::size_t l = 0; l < L; ++l)
        {
            const arma::cx_vec d = phases.surface_diagonal(assignment, l);
            for (std::size_t i = 0; i < K; ++i)
                b[i] += realization.bs_ris[l] * (d % realization.ue_ris[i * L + l]);
        }
        return b;
    }

    // ---- scenario-driven construction ----------------------------------------

    double los_probability(double horizontal_distance)
    {
        const double d = std::max(horizontal_distance, 1e-9);
        return std::min(18.0 / d, 1.0) * (1.0 - std::exp(-d / 36.0)) + std::exp(-d / 36.0);
    }

    std::vector<Point3> place_ues(const Scenario &scenario, Rng &rng)
    {
        std::vector<Point3> ues(scenario.ue_count);
        for (auto &p : ues)
        {
            p.x = uniform(rng, scenario.ue_region.x_min, scenario.ue_region.x_max);
            p.y = uniform(rng, scenario.ue_region.y_min, scenario.ue_region.y_max);
            p.z = scenario.ue_region.height;
        }
        return ues;
    }

    namespace
    {
        constexpr double deg = std::numbers::pi / 180.0;

        struct LinkBudget
        {
            double gain = 0.0;
            double kfactor = 0.0;
            bool los = false;
        };

        LinkBudget draw_budget(const Scenario &s, const LinkModel &model, const Point3 &a, const Point3 &b,
                               double extra_gain_db, Rng &rng)
        {
            const double d3 = std::max(distance(a, b), 1.0);
            const double d2 = std::hypot(a.x - b.x, a.y - b.y);

            LinkBudget out;
            switch (model.los)
            {
            case LosModel::always:
                out.los = true;
                break;
            case LosModel::never:
                out.los = false;
                break;
            case LosModel::probabilistic:
                out.los = uniform(rng, 0.0, 1.0) < los_probability(d2);
                break;
            }
            const PathlossModel &pl = out.los ? s.los_pathloss : s.nlos_pathloss;
            const double loss_db = pl.intercept_db + pl.frequency_coeff_db * std::log10(s.carrier_hz / 1e9) +
                                   pl.distance_coeff_db * std::log10(d3) + pl.shadow_std_db * standard_normal(rng);
            out.gain = std::pow(10.0, (extra_gain_db - loss_db) / 10.0);
            if (out.los)
            {
                const double k_db = s.kfactor.intercept_db - s.kfactor.slope_db_per_m * d3 + model.kfactor_offset_db +
                                    s.kfactor.std_db * standard_normal(rng);
                out.kfactor = std::pow(10.0, k_db / 10.0);
            }
            return out;
        }

        // Specular powers: the LOS path keeps los_power_ratio of the specular power, the remaining
        // paths share the rest with random weights
        std::vector<double> specular_powers(const Scenario &s, std::size_t count, double total, Rng &rng)
        {
            std::vector<double> p(count, 0.0);
            if (count == 0)
                return p;
            if (count == 1)
            {
                p[0] = total;
                return p;
            }
            p[0] = s.los_power_ratio * total;
            std::vector<double> w(count - 1);
            for (double &x : w)
                x = uniform(rng, 0.0, 1.0);
            const double sum = std::accumulate(w.begin(), w.end(), 0.0);
            for (std::size_t i = 1; i < count; ++i)
                p[i] = (1.0 - s.los_power_ratio) * total * (sum > 0.0 ? w[i - 1] / sum : 1.0 / static_cast<double>(count - 1));
            return p;
        }

        LocalAngles perturbed(const Scenario &s, const LocalAngles &base, Rng &rng)
        {
            LocalAngles a;
            const double wa = s.specular_azimuth_window_deg * deg;
            const double we = s.specular_elevation_window_deg * deg;
            a.azimuth = base.azimuth + uniform(rng, -wa, wa);
            a.elevation = std::clamp(base.elevation + uniform(rng, -we, we), -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
            return a;
        }

        arma::cx_mat normalized_correlation(const Scenario &s, const ArrayGeometry &geometry, const LocalAngles &angles)
        {
            ScatteringSpec spec{angles.azimuth, angles.elevation, s.azimuth_std_deg * deg, s.elevation_std_deg * deg};
            return correlation_closed_form(geometry, spec, ZeroSpread::point_mass);
        }

        UeLinkStatistics ue_link(const Scenario &s, const LinkModel &model, const ArrayGeometry &geometry,
                                 const ArrayFrame &frame, const Point3 &ue, double extra_gain_db, Rng &rng)
        {
            const LinkBudget budget = draw_budget(s, model, frame.position, ue, extra_gain_db, rng);
            const LocalAngles angles = local_angles(frame, ue);

            UeLinkStatistics out;
            out.gain = budget.gain;
            out.los = budget.los;
            out.kfactor = budget.kfactor;
            double diffuse = budget.gain;
            if (budget.los)
            {
                const double specular_total = budget.kfactor * budget.gain / (budget.kfactor + 1.0);
                diffuse = budget.gain / (budget.kfactor + 1.0);
                const std::vector<double> powers = specular_powers(s, model.specular_count, specular_total, rng);
                for (std::size_t i = 0; i < powers.size(); ++i)
                {
                    const LocalAngles a = i == 0 ? angles : perturbed(s, angles, rng);
                    out.specular.push_back(std::sqrt(powers[i]) * array_response(geometry, a.azimuth, a.elevation));
                }
            }
            out.nonspecular_corr = diffuse * normalized_correlation(s, geometry, angles);
            return out;
        }

        SurfaceLinkStatistics surface_link(const Scenario &s, const ArrayGeometry &bs_geometry, const ArrayFrame &bs_frame,
                                           const ArrayGeometry &ris_geometry, const ArrayFrame &ris_frame, Rng &rng)
        {
            const LinkBudget budget = draw_budget(s, s.bs_ris, bs_frame.position, ris_frame.position, s.ris_element_gain_db, rng);
            const LocalAngles at_bs = local_angles(bs_frame, ris_frame.position);
            const LocalAngles at_ris = local_angles(ris_frame, bs_frame.position);

            SurfaceLinkStatistics out;
            out.gain = budget.gain;
            out.los_fixed = budget.los;
            double diffuse = budget.gain;
            if (budget.los)
            {
                const double specular_total = budget.kfactor * budget.gain / (budget.kfactor + 1.0);
                diffuse = budget.gain / (budget.kfactor + 1.0);
                const std::vector<double> powers = specular_powers(s, s.bs_ris.specular_count, specular_total, rng);
                for (std::size_t i = 0; i < powers.size(); ++i)
                {
                    const LocalAngles a = i == 0 ? at_bs : perturbed(s, at_bs, rng);
                    const LocalAngles b = i == 0 ? at_ris : perturbed(s, at_ris, rng);
                    out.specular.push_back(std::sqrt(powers[i]) * array_response(bs_geometry, a.azimuth, a.elevation) *
                                           array_response(ris_geometry, b.azimuth, b.elevation).t());
                }
            }
            out.bs_corr = diffuse * normalized_correlation(s, bs_geometry, at_bs);
            out.ris_corr = normalized_correlation(s, ris_geometry, at_ris);
            return out;
        }

        Point3 region_center(const Scenario &s)
        {
            return {0.5 * (s.ue_region.x_min + s.ue_region.x_max), 0.5 * (s.ue_region.y_min + s.ue_region.y_max), s.ue_region.height};
        }
    }

    ChannelStatistics build_statistics(const Scenario &scenario, const std::vector<Point3> &ues, Rng &rng)
    {
        scenario.validate();
        if (ues.size() != scenario.ue_count)
            throw DimensionError("build_statistics: number of UE positions differs from ue_count");

        ChannelStatistics stats;
        stats.bs_antennas = scenario.bs_antennas;
        stats.surfaces = scenario.active_ris_count();
        stats.elements_per_surface = stats.surfaces > 0 ? scenario.ris_elements() : 0;
        stats.ue_count = scenario.ue_count;

        const ArrayGeometry bs_geometry = ArrayGeometry::ula(scenario.bs_antennas, scenario.bs_spacing);
        const ArrayFrame bs_frame = ArrayFrame::facing(scenario.bs_position, 0.0, 1.0, region_center(scenario));

        for (std::size_t k = 0; k < scenario.ue_count; ++k)
            stats.direct.push_back(ue_link(scenario, scenario.direct, bs_geometry, bs_frame, ues[k], 0.0, rng));

        if (stats.surfaces > 0)
        {
            const ArrayGeometry ris_geometry = ArrayGeometry::upa(scenario.ris_cols, scenario.ris_rows, scenario.ris_spacing);
            std::vector<ArrayFrame> ris_frames;
            for (std::size_t l = 0; l < stats.surfaces; ++l)
                ris_frames.push_back(ArrayFrame::facing(scenario.ris_positions[l], 1.0, 0.0, scenario.bs_position));

            for (std::size_t k = 0; k < scenario.ue_count; ++k)
                for (std::size_t l = 0; l < stats.surfaces; ++l)
                    stats.ue_ris.push_back(ue_link(scenario, scenario.ue_ris, ris_geometry, ris_frames[l], ues[k],
                                                   scenario.ris_element_gain_db, rng));
            for (std::size_t l = 0; l < stats.surfaces; ++l)
                stats.bs_ris.push_back(surface_link(scenario, bs_geometry, bs_frame, ris_geometry, ris_frames[l], rng));
        }

        stats.finalize();
        return stats;
    }

    RisAssignment default_assignment(const Scenario &scenario, const ChannelStatistics &stats)
    {
        const std::size_t L = stats.surfaces, K = stats.ue_count;
        if (scenario.assignment == AssignmentPolicy::none || L == 0)
            return RisAssignment::empty(L, stats.elements_per_surface, K);

        std::vector<std::size_t> order(K);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&stats](std::size_t a, std::size_t b) { return stats.direct[a].gain < stats.direct[b].gain; });

        std::vector<long> owners(L, -1);
        for (std::size_t i = 0; i < std::min(L, K); ++i)
        {
            const std::size_t k = order[i];
            long best = -1;
            for (std::size_t l = 0; l < L; ++l)
                if (owners[l] < 0 && (best < 0 || stats.ris_link(k, l).gain > stats.ris_link(k, static_cast<std::size_t>(best)).gain))
                    best = static_cast<long>(l);
            owners[static_cast<std::size_t>(best)] = static_cast<long>(k);
        }
        return RisAssignment::whole_surfaces(stats.elements_per_surface, K, owners);
    }
}
