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

#include "rismimo/scenario.hpp"

#include "rismimo/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace rismimo
{
    NLOHMANN_JSON_SERIALIZE_ENUM(Mode, {{Mode::short_term_single, "short_term_single"},
                                        {Mode::long_term, "long_term"},
                                        {Mode::two_stage, "two_stage"},
                                        {Mode::conv_mimo, "conv_mimo"}})
    NLOHMANN_JSON_SERIALIZE_ENUM(Estimator, {{Estimator::lmmse, "lmmse"}, {Estimator::ls, "ls"}})
    NLOHMANN_JSON_SERIALIZE_ENUM(PhaseScheme, {{PhaseScheme::ps1, "ps1"},
                                               {PhaseScheme::per_element, "per_element"},
                                               {PhaseScheme::longterm, "longterm"},
                                               {PhaseScheme::zero, "zero"},
                                               {PhaseScheme::random, "random"}})
    NLOHMANN_JSON_SERIALIZE_ENUM(CombinerKind, {{CombinerKind::mr, "mr"},
                                                {CombinerKind::rzf, "rzf"},
                                                {CombinerKind::ammse, "ammse"},
                                                {CombinerKind::conv_mmse, "conv_mmse"}})
    NLOHMANN_JSON_SERIALIZE_ENUM(PowerControlKind, {{PowerControlKind::maxmin, "maxmin"}, {PowerControlKind::full, "full"}})
    NLOHMANN_JSON_SERIALIZE_ENUM(LosModel, {{LosModel::probabilistic, "probabilistic"},
                                            {LosModel::always, "always"},
                                            {LosModel::never, "never"}})
    NLOHMANN_JSON_SERIALIZE_ENUM(AssignmentPolicy, {{AssignmentPolicy::weakest, "weakest"}, {AssignmentPolicy::none, "none"}})

    NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Point3, x, y, z)
    NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(UeRegion, x_min, x_max, y_min, y_max, height)
    NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PathlossModel, intercept_db, frequency_coeff_db, distance_coeff_db, shadow_std_db)
    NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(KFactorModel, intercept_db, slope_db_per_m, std_db)
    NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LinkModel, los, specular_count, kfactor_offset_db)

    namespace
    {
        using nlohmann::json;

        json to_json_tree(const Scenario &s)
        {
            json j;
            j["id"] = s.id;
            j["dimensions"] = {{"bs_antennas", s.bs_antennas},
                               {"ris_count", s.ris_count},
                               {"ris_rows", s.ris_rows},
                               {"ris_cols", s.ris_cols},
                               {"ue_count", s.ue_count},
                               {"sub_surfaces", s.sub_surfaces},
                               {"coherence_length", s.coherence_length},
                               {"pilot_repetitions", s.pilot_repetitions},
                               {"conv_pilot_repetitions", s.conv_pilot_repetitions}};
            j["radio"] = {{"pilot_power_w", s.pilot_power_w},
                          {"max_power_w", s.max_power_w},
                          {"carrier_hz", s.carrier_hz},
                          {"bandwidth_hz", s.bandwidth_hz},
                          {"noise_figure_db", s.noise_figure_db},
                          {"noise_power_dbm", s.noise_power_dbm ? json(*s.noise_power_dbm) : json(nullptr)}};
            j["geometry"] = {{"bs_spacing", s.bs_spacing},
                             {"ris_spacing", s.ris_spacing},
                             {"bs_position", s.bs_position},
                             {"ris_positions", s.ris_positions},
                             {"ue_region", s.ue_region}};
            j["propagation"] = {{"azimuth_std_deg", s.azimuth_std_deg},
                                {"elevation_std_deg", s.elevation_std_deg},
                                {"direct", s.direct},
                                {"ue_ris", s.ue_ris},
                                {"bs_ris", s.bs_ris},
                                {"los_power_ratio", s.los_power_ratio},
                                {"specular_azimuth_window_deg", s.specular_azimuth_window_deg},
                                {"specular_elevation_window_deg", s.specular_elevation_window_deg},
                                {"kfactor", s.kfactor},
                                {"los_pathloss", s.los_pathloss},
                                {"nlos_pathloss", s.nlos_pathloss},
                                {"ris_element_gain_db", s.ris_element_gain_db}};
            j["processing"] = {{"assignment", s.assignment},
                               {"mode", s.mode},
                               {"estimator", s.estimator},
                               {"phase_scheme", s.phase_scheme},
                               {"combiner", s.combiner},
                               {"power_control", s.power_control},
                               {"power_tolerance", s.power_tolerance},
                               {"power_max_iterations", s.power_max_iterations}};
            j["simulation"] = {{"seed", s.seed},
                               {"drop_count", s.drop_count},
                               {"mc_blocks", s.mc_blocks},
                               {"error_cov_draws", s.error_cov_draws},
                               {"threads", s.threads}};
            return j;
        }

        Scenario from_json_tree(const json &j)
        {
            Scenario s;
            j.at("id").get_to(s.id);
            const json &d = j.at("dimensions");
            d.at("bs_antennas").get_to(s.bs_antennas);
            d.at("ris_count").get_to(s.ris_count);
            d.at("ris_rows").get_to(s.ris_rows);
            d.at("ris_cols").get_to(s.ris_cols);
            d.at("ue_count").get_to(s.ue_count);
            d.at("sub_surfaces").get_to(s.sub_surfaces);
            d.at("coherence_length").get_to(s.coherence_length);
            d.at("pilot_repetitions").get_to(s.pilot_repetitions);
            d.at("conv_pilot_repetitions").get_to(s.conv_pilot_repetitions);
            const json &r = j.at("radio");
            r.at("pilot_power_w").get_to(s.pilot_power_w);
            r.at("max_power_w").get_to(s.max_power_w);
            r.at("carrier_hz").get_to(s.carrier_hz);
            r.at("bandwidth_hz").get_to(s.bandwidth_hz);
            r.at("noise_figure_db").get_to(s.noise_figure_db);
            if (r.contains("noise_power_dbm") && !r.at("noise_power_dbm").is_null())
                s.noise_power_dbm = r.at("noise_power_dbm").get<double>();
            const json &g = j.at("geometry");
            g.at("bs_spacing").get_to(s.bs_spacing);
            g.at("ris_spacing").get_to(s.ris_spacing);
            g.at("bs_position").get_to(s.bs_position);
            g.at("ris_positions").get_to(s.ris_positions);
            g.at("ue_region").get_to(s.ue_region);
            const json &p = j.at("propagation");
            p.at("azimuth_std_deg").get_to(s.azimuth_std_deg);
            p.at("elevation_std_deg").get_to(s.elevation_std_deg);
            p.at("direct").get_to(s.direct);
            p.at("ue_ris").get_to(s.ue_ris);
            p.at("bs_ris").get_to(s.bs_ris);
            p.at("los_power_ratio").get_to(s.los_power_ratio);
            p.at("specular_azimuth_window_deg").get_to(s.specular_azimuth_window_deg);
            p.at("specular_elevation_window_deg").get_to(s.specular_elevation_window_deg);
            p.at("kfactor").get_to(s.kfactor);
            p.at("los_pathloss").get_to(s.los_pathloss);
            p.at("nlos_pathloss").get_to(s.nlos_pathloss);
            p.at("ris_element_gain_db").get_to(s.ris_element_gain_db);
            const json &q = j.at("processing");
            q.at("assignment").get_to(s.assignment);
            q.at("mode").get_to(s.mode);
            q.at("estimator").get_to(s.estimator);
            q.at("phase_scheme").get_to(s.phase_scheme);
            q.at("combiner").get_to(s.combiner);
            q.at("power_control").get_to(s.power_control);
            q.at("power_tolerance").get_to(s.power_tolerance);
            q.at("power_max_iterations").get_to(s.power_max_iterations);
            const json &m = j.at("simulation");
            m.at("seed").get_to(s.seed);
            m.at("drop_count").get_to(s.drop_count);
            m.at("mc_blocks").get_to(s.mc_blocks);
            m.at("error_cov_draws").get_to(s.error_cov_draws);
            m.at("threads").get_to(s.threads);
            return s;
        }

        // Rejects keys absent from the reference tree, reporting the dotted path
        void check_known_keys(const json &user, const json &reference, const std::string &prefix)
        {
            if (!user.is_object())
                return;
            for (auto it = user.begin(); it != user.end(); ++it)
            {
                const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
                if (!reference.contains(it.key()))
                    throw ConfigError("scenario: unknown field '" + path + "'");
                if (reference.at(it.key()).is_object())
                    check_known_keys(it.value(), reference.at(it.key()), path);
            }
        }

        // Enum fields must hold one of the known strings
        void check_enum_strings(const json &merged)
        {
            auto check = [&merged](const std::string &section, const std::string &key, std::initializer_list<const char *> allowed) {
                const json &v = merged.at(section).at(key);
                if (!v.is_string())
                    throw ConfigError("scenario: field '" + section + "." + key + "' must be a string");
                for (const char *a : allowed)
                    if (v.get<std::string>() == a)
                        return;
                throw ConfigError("scenario: invalid value '" + v.get<std::string>() + "' for '" + section + "." + key + "'");
            };
            check("processing", "assignment", {"weakest", "none"});
            check("processing", "mode", {"short_term_single", "long_term", "two_stage", "conv_mimo"});
            check("processing", "estimator", {"lmmse", "ls"});
            check("processing", "phase_scheme", {"ps1", "per_element", "longterm", "zero", "random"});
            check("processing", "combiner", {"mr", "rzf", "ammse", "conv_mmse"});
            check("processing", "power_control", {"maxmin", "full"});
            for (const char *link : {"direct", "ue_ris", "bs_ris"})
            {
                const json &v = merged.at("propagation").at(link).at("los");
                const std::string s = v.is_string() ? v.get<std::string>() : std::string();
                if (s != "probabilistic" && s != "always" && s != "never")
                    throw ConfigError(std::string("scenario: invalid value for 'propagation.") + link + ".los'");
            }
        }

        Scenario from_user_json(const json &user)
        {
            if (!user.is_object())
                throw ConfigError("scenario: top level must be an object");
            const json reference = to_json_tree(Scenario{});
            check_known_keys(user, reference, "");
            json merged = reference;
            merged.merge_patch(user);
            check_enum_strings(merged);
            Scenario s;
            try
            {
                s = from_json_tree(merged);
            }
            catch (const json::exception &e)
            {
                throw ConfigError(std::string("scenario: ") + e.what());
            }
            s.validate();
            return s;
        }
    }

    std::size_t Scenario::pilot_length() const
    {
        const std::size_t short_term = (active_ris_count() * sub_surfaces + 1) * ue_count;
        switch (mode)
        {
        case Mode::short_term_single:
            return short_term;
        case Mode::long_term:
            return pilot_repetitions * ue_count;
        case Mode::two_stage:
            return short_term + pilot_repetitions * ue_count;
        case Mode::conv_mimo:
            return conv_pilot_repetitions * ue_count;
        }
        return 0;
    }

    double Scenario::noise_power_w() const
    {
        const double dbm = noise_power_dbm ? *noise_power_dbm : -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }

    double Scenario::prelog() const
    {
        return static_cast<double>(coherence_length - pilot_length()) / static_cast<double>(coherence_length);
    }

    void Scenario::validate() const
    {
        auto fail = [](const std::string &msg) { throw ConfigError("scenario: " + msg); };
        if (bs_antennas == 0)
            fail("bs_antennas must be positive");
        if (ue_count == 0)
            fail("ue_count must be positive");
        if (ris_count > 0 && (ris_rows == 0 || ris_cols == 0))
            fail("ris_rows and ris_cols must be positive");
        if (ris_positions.size() != ris_count)
            fail("ris_positions has " + std::to_string(ris_positions.size()) + " entries for ris_count " + std::to_string(ris_count));
        if (sub_surfaces == 0 || (ris_count > 0 && ris_elements() % sub_surfaces != 0))
            fail("sub_surfaces must divide the number of elements per RIS");
        if (pilot_repetitions == 0 || conv_pilot_repetitions == 0)
            fail("pilot repetitions must be positive");
        if (pilot_length() >= coherence_length)
            fail("pilot length " + std::to_string(pilot_length()) + " must be shorter than coherence_length " + std::to_string(coherence_length));
        if (!(pilot_power_w > 0.0) || !(max_power_w > 0.0))
            fail("powers must be positive");
        if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0))
            fail("carrier and bandwidth must be positive");
        if (!(bs_spacing > 0.0) || !(ris_spacing > 0.0))
            fail("element spacings must be positive");
        if (!(azimuth_std_deg >= 0.0) || !(elevation_std_deg >= 0.0))
            fail("angular standard deviations must be non-negative");
        if (!(ue_region.x_max >= ue_region.x_min) || !(ue_region.y_max >= ue_region.y_min))
            fail("ue_region bounds are inverted");
        if (!(los_power_ratio > 0.0 && los_power_ratio <= 1.0))
            fail("los_power_ratio must be in (0, 1]");
        if (!(specular_azimuth_window_deg >= 0.0) || !(specular_elevation_window_deg >= 0.0))
            fail("specular angle windows must be non-negative");
        for (const LinkModel *link : {&direct, &ue_ris, &bs_ris})
            if (link->los != LosModel::never && link->specular_count == 0)
                fail("specular_count must be at least 1 for links that can have a LOS path");
        if (drop_count == 0)
            fail("drop_count must be at least 1");
        if (mc_blocks < 100)
            fail("mc_blocks must be at least 100");
        if (error_cov_draws < 1000)
            fail("error_cov_draws must be at least 1000");
        if (threads == 0)
            fail("threads must be at least 1");
        if (!(power_tolerance > 0.0) || power_max_iterations == 0)
            fail("power control tolerance and iteration limit must be positive");
        if (mode == Mode::long_term && (phase_scheme == PhaseScheme::ps1 || phase_scheme == PhaseScheme::per_element))
            fail("long_term mode needs a statistics-based phase scheme (longterm, zero or random)");
        if (combiner == CombinerKind::conv_mmse && mode != Mode::conv_mimo && mode != Mode::long_term)
            fail("conv_mmse needs a closed-form error covariance (conv_mimo or long_term mode)");
        if (mode != Mode::conv_mimo && ris_count == 0)
            fail("RIS modes need at least one RIS (use conv_mimo)");
    }

    Scenario parse_scenario(const std::string &text)
    {
        nlohmann::json user;
        try
        {
            user = nlohmann::json::parse(text, nullptr, true, true);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError(std::string("scenario: ") + e.what());
        }
        return from_user_json(user);
    }

    Scenario load_scenario(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open scenario file '" + path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        try
        {
            return parse_scenario(buffer.str());
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(path + ": " + e.what());
        }
    }

    std::string scenario_to_string(const Scenario &scenario)
    {
        return to_json_tree(scenario).dump(2);
    }

    Scenario with_field(const Scenario &scenario, const std::string &dotted_key, const std::string &json_value)
    {
        nlohmann::json tree = to_json_tree(scenario);
        nlohmann::json value;
        try
        {
            value = nlohmann::json::parse(json_value);
        }
        catch (const nlohmann::json::parse_error &)
        {
            value = json_value; // bare strings such as enum names
        }

        nlohmann::json *node = &tree;
        std::size_t start = 0;
        while (true)
        {
            const std::size_t dot = dotted_key.find('.', start);
            const std::string key = dotted_key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (!node->is_object() || !node->contains(key))
                throw ConfigError("scenario: unknown field '" + dotted_key + "'");
            node = &(*node)[key];
            if (dot == std::string::npos)
                break;
            start = dot + 1;
        }
        *node = value;
        return from_user_json(tree);
    }

    const char *to_string(Mode mode)
    {
        switch (mode)
        {
        case Mode::short_term_single:
            return "short_term_single";
        case Mode::long_term:
            return "long_term";
        case Mode::two_stage:
            return "two_stage";
        case Mode::conv_mimo:
            return "conv_mimo";
        }
        return "?";
    }

    const char *to_string(Estimator estimator)
    {
        return estimator == Estimator::lmmse ? "lmmse" : "ls";
    }

    const char *to_string(PhaseScheme scheme)
    {
        switch (scheme)
        {
        case PhaseScheme::ps1:
            return "ps1";
        case PhaseScheme::per_element:
            return "per_element";
        case PhaseScheme::longterm:
            return "longterm";
        case PhaseScheme::zero:
            return "zero";
        case PhaseScheme::random:
            return "random";
        }
        return "?";
    }

    const char *to_string(CombinerKind combiner)
    {
        switch (combiner)
        {
        case CombinerKind::mr:
            return "mr";
        case CombinerKind::rzf:
            return "rzf";
        case CombinerKind::ammse:
            return "ammse";
        case CombinerKind::conv_mmse:
            return "conv_mmse";
        }
        return "?";
    }

    const char *to_string(PowerControlKind power_control)
    {
        return power_control == PowerControlKind::maxmin ? "maxmin" : "full";
    }
}
