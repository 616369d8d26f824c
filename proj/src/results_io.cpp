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

#include "rismimo/results_io.hpp"

#include "rismimo/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rismimo
{
    NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CdfPoint, se, probability)
    NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunMetadata, scenario_id, mode, estimator, scheme, combiner, power_control, seed,
                                       pilot_length, coherence_length, ue_count, drop_count, mc_blocks, elapsed_seconds)
    NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunResult, metadata, se, cdf, quantile_10, quantile_50)

    namespace
    {
        void write_file(const std::string &path, const std::string &content)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw IoError("cannot open '" + path + "' for writing");
            out << content;
            out.flush();
            if (!out)
                throw IoError("write to '" + path + "' failed");
        }

        std::string format_double(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string drops_csv(const RunResult &result)
        {
            std::ostringstream out;
            out << "scenario_id,drop,ue,se_bits_per_hz,mode,scheme,combiner\n";
            const RunMetadata &m = result.metadata;
            for (std::size_t d = 0; d < result.se.size(); ++d)
                for (std::size_t k = 0; k < result.se[d].size(); ++k)
                    out << m.scenario_id << ',' << d << ',' << k << ',' << format_double(result.se[d][k]) << ',' << m.mode << ','
                        << m.scheme << ',' << m.combiner << '\n';
            return out.str();
        }
    }

    std::string cdf_csv(const RunResult &result)
    {
        std::ostringstream out;
        out << "se_bits_per_hz,probability\n";
        for (const CdfPoint &p : result.cdf)
            out << format_double(p.se) << ',' << format_double(p.probability) << '\n';
        return out.str();
    }

    std::string cdf_path_for(const std::string &csv_path)
    {
        std::filesystem::path p(csv_path);
        const std::filesystem::path stem = p.parent_path() / p.stem();
        return stem.string() + ".cdf.csv";
    }

    std::string results_to_json(const RunResult &result)
    {
        return nlohmann::json(result).dump(2);
    }

    RunResult results_from_json(const std::string &text)
    {
        try
        {
            return nlohmann::json::parse(text).get<RunResult>();
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("results: ") + e.what());
        }
    }

    RunResult read_results_json(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open results file '" + path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        try
        {
            return results_from_json(buffer.str());
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(path + ": " + e.what());
        }
    }

    void emit_results(const RunResult &result, const std::string &path, ResultFormat format)
    {
        if (format == ResultFormat::json)
        {
            write_file(path, results_to_json(result) + "\n");
            return;
        }
        write_file(path, drops_csv(result));
        write_file(cdf_path_for(path), cdf_csv(result));
    }
}
