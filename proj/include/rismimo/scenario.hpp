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

#ifndef RISMIMO_SCENARIO_HPP
#define RISMIMO_SCENARIO_HPP

#include "rismimo/array_geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rismimo
{
    enum class Mode
    {
        short_term_single, // per-block RIS configuration from individual-channel estimates
        long_term,         // fixed configuration from statistics, overall-channel estimation
        two_stage,         // short-term estimation, phase selection, then overall-channel estimation
        conv_mimo          // no RIS
    };

    enum class Estimator
    {
        lmmse,
        ls
    };

    enum class PhaseScheme
    {
        ps1,
        per_element,
        longterm,
        zero,
        random
    };

    enum class CombinerKind
    {
        mr,
        rzf,
        ammse,
        conv_mmse
    };

    enum class PowerControlKind
    {
        maxmin,
        full
    };

    enum class LosModel
    {
        probabilistic,
        always,
        never
    };

    enum class AssignmentPolicy
    {
        weakest, // one whole surface per weak UE, weakest direct-channel gain first
        none
    };

    // PL[dB] = intercept + frequency_coeff * log10(f / 1 GHz) + distance_coeff * log10(d / 1 m), shadowing ~ N(0, shadow_std^2)
    struct PathlossModel
    {
        double intercept_db = 0.0;
        double frequency_coeff_db = 0.0;
        double distance_coeff_db = 0.0;
        double shadow_std_db = 0.0;
    };

    // K[dB] = intercept - slope * d + offset + N(0, std^2)
    struct KFactorModel
    {
        double intercept_db = 13.0;
        double slope_db_per_m = 0.03;
        double std_db = 0.0;
    };

    struct LinkModel
    {
        LosModel los = LosModel::probabilistic;
        std::size_t specular_count = 1; // specular components when a LOS path exists
        double kfactor_offset_db = 0.0;
    };

    struct UeRegion
    {
        double x_min = 200.0;
        double x_max = 300.0;
        double y_min = -50.0;
        double y_max = 50.0;
        double height = 0.0;
    };

    // Complete description of an experiment. Defaults reproduce the full-scale setup.
    struct Scenario
    {
        std::string id = "full_scale";

        std::size_t bs_antennas = 100;   // M
        std::size_t ris_count = 2;       // L
        std::size_t ris_rows = 16;       // vertical elements per RIS
        std::size_t ris_cols = 16;       // horizontal elements per RIS
        std::size_t ue_count = 8;        // K
        std::size_t sub_surfaces = 16;   // R
        std::size_t coherence_length = 10000;
        std::size_t pilot_repetitions = 33;      // overall-channel protocol repetitions
        std::size_t conv_pilot_repetitions = 30; // pilot repetitions without RIS

        double pilot_power_w = 0.1;
        double max_power_w = 0.1;
        double carrier_hz = 1.9e9;
        double bandwidth_hz = 1e6;
        double noise_figure_db = 7.0;
        std::optional<double> noise_power_dbm; // overrides the thermal-noise computation

        double bs_spacing = 0.5;  // wavelengths
        double ris_spacing = 0.25;
        Point3 bs_position{0.0, 0.0, 10.0};
        std::vector<Point3> ris_positions{{10.0, 50.0, 10.0}, {10.0, -50.0, 10.0}};
        UeRegion ue_region;

        double azimuth_std_deg = 15.0;
        double elevation_std_deg = 15.0;

        LinkModel direct{LosModel::probabilistic, 1, 0.0};
        LinkModel ue_ris{LosModel::always, 1, 0.0};
        LinkModel bs_ris{LosModel::always, 1, 0.0};
        double los_power_ratio = 0.5; // share of the LOS gain kept by the LOS path when several specular paths exist
        double specular_azimuth_window_deg = 60.0;
        double specular_elevation_window_deg = 15.0;

        KFactorModel kfactor;
        PathlossModel los_pathloss{28.0, 20.0, 22.0, 3.0};
        PathlossModel nlos_pathloss{22.7, 26.0, 36.7, 4.0};
        double ris_element_gain_db = -1.0491; // 10 log10(4 pi A / lambda^2) for A = (lambda/4)^2, applied per hop

        AssignmentPolicy assignment = AssignmentPolicy::weakest;
        Mode mode = Mode::short_term_single;
        Estimator estimator = Estimator::lmmse;
        PhaseScheme phase_scheme = PhaseScheme::ps1;
        CombinerKind combiner = CombinerKind::ammse;
        PowerControlKind power_control = PowerControlKind::maxmin;

        std::uint64_t seed = 1;
        std::size_t drop_count = 200;
        std::size_t mc_blocks = 2000;
        std::size_t error_cov_draws = 1000;
        std::size_t threads = 1;
        double power_tolerance = 1e-4;
        std::size_t power_max_iterations = 500;

        std::size_t ris_elements() const { return ris_rows * ris_cols; }
        // Surfaces that take part in the experiment (none without RIS)
        std::size_t active_ris_count() const { return mode == Mode::conv_mimo ? 0 : ris_count; }
        std::size_t pilot_length() const;
        double noise_power_w() const;
        double prelog() const;

        // Throws ConfigError on inconsistent values
        void validate() const;
    };

    Scenario parse_scenario(const std::string &text);
    Scenario load_scenario(const std::string &path);
    std::string scenario_to_string(const Scenario &scenario);

    // Replaces one (possibly nested, dot-separated) field with a JSON value, e.g. ("kfactor.std_db", "2.0")
    Scenario with_field(const Scenario &scenario, const std::string &dotted_key, const std::string &json_value);

    const char *to_string(Mode mode);
    const char *to_string(Estimator estimator);
    const char *to_string(PhaseScheme scheme);
    const char *to_string(CombinerKind combiner);
    const char *to_string(PowerControlKind power_control);
}

#endif
