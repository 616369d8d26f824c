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

#include "rismimo/errors.hpp"
#include "rismimo/harness.hpp"
#include "rismimo/log.hpp"
#include "rismimo/results_io.hpp"
#include "rismimo/scenario.hpp"
#include "rismimo/validation/criteria.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_validation_failed = 1,
        exit_config = 2,
        exit_io = 3,
        exit_runtime = 4
    };

    constexpr const char *seed_variable = "RISMIMO_SEED";

    std::uint64_t parse_seed(const std::string &text, const std::string &origin)
    {
        std::size_t used = 0;
        unsigned long long value = 0;
        try
        {
            value = std::stoull(text, &used, 10);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used == 0 || used != text.size() || text.front() == '-')
            throw rismimo::ConfigError(origin + ": '" + text + "' is not a non-negative integer seed");
        return value;
    }

    std::optional<std::uint64_t> environment_seed()
    {
        const char *value = std::getenv(seed_variable);
        if (value == nullptr || *value == '\0')
            return std::nullopt;
        return parse_seed(value, seed_variable);
    }

    std::string read_text(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw rismimo::IoError("cannot open '" + path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    bool file_sets_seed(const std::string &text)
    {
        const auto j = nlohmann::json::parse(text, nullptr, false, true);
        return j.is_object() && j.contains("simulation") && j["simulation"].is_object() && j["simulation"].contains("seed");
    }

    struct ScenarioOptions
    {
        std::string path;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> threads;
        std::optional<std::size_t> drops;
        std::optional<std::size_t> blocks;
        std::vector<std::string> overrides;
    };

    void add_scenario_options(CLI::App *cmd, ScenarioOptions &opt)
    {
        cmd->add_option("scenario", opt.path, "Scenario file (JSON, comments allowed)")->required();
        cmd->add_option("--seed", opt.seed, std::string("Seed (default: scenario file, then $") + seed_variable + ", then 1)");
        cmd->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--drops", opt.drops, "Number of UE drops")->check(CLI::PositiveNumber);
        cmd->add_option("--blocks", opt.blocks, "Monte-Carlo coherence blocks per drop")->check(CLI::PositiveNumber);
        cmd->add_option("--set", opt.overrides, "Field override key=value with a dotted key, e.g. processing.mode=long_term");
    }

    rismimo::Scenario load(const ScenarioOptions &opt)
    {
        const std::string text = read_text(opt.path);
        rismimo::Scenario s;
        try
        {
            s = rismimo::parse_scenario(text);
        }
        catch (const rismimo::ConfigError &e)
        {
            throw rismimo::ConfigError(opt.path + ": " + e.what());
        }
        if (!file_sets_seed(text))
            if (const auto env = environment_seed())
                s.seed = *env;
        for (const std::string &item : opt.overrides)
        {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw rismimo::ConfigError("--set expects key=value, got '" + item + "'");
            s = rismimo::with_field(s, item.substr(0, eq), item.substr(eq + 1));
        }
        if (opt.seed)
            s.seed = *opt.seed;
        if (opt.threads)
            s.threads = *opt.threads;
        if (opt.drops)
            s.drop_count = *opt.drops;
        if (opt.blocks)
            s.mc_blocks = *opt.blocks;
        s.validate();
        return s;
    }

    rismimo::ResultFormat format_of(const std::string &name)
    {
        return name == "json" ? rismimo::ResultFormat::json : rismimo::ResultFormat::csv;
    }

    void print_summary(const rismimo::RunResult &r)
    {
        std::printf("%s mode=%s scheme=%s combiner=%s drops=%zu ue=%zu tau_p=%zu q10=%.4f q50=%.4f elapsed=%.1fs\n",
                    r.metadata.scenario_id.c_str(), r.metadata.mode.c_str(), r.metadata.scheme.c_str(),
                    r.metadata.combiner.c_str(), r.metadata.drop_count, r.metadata.ue_count, r.metadata.pilot_length,
                    r.quantile_10, r.quantile_50, r.metadata.elapsed_seconds);
    }

    int command_run(const ScenarioOptions &opt, const std::string &output, const std::string &format, bool dry_run)
    {
        const rismimo::Scenario s = load(opt);
        if (dry_run)
        {
            std::cout << rismimo::scenario_to_string(s) << "\n";
            return exit_ok;
        }
        const rismimo::RunResult result = rismimo::run_experiment(s);
        if (!output.empty())
            rismimo::emit_results(result, output, format_of(format));
        print_summary(result);
        return exit_ok;
    }

    int command_cdf(const std::string &input, const std::string &output)
    {
        const rismimo::RunResult result = rismimo::read_results_json(input);
        const std::string table = rismimo::cdf_csv(result);
        if (output.empty())
        {
            std::cout << table;
            return exit_ok;
        }
        std::ofstream out(output, std::ios::binary);
        if (!out)
            throw rismimo::IoError("cannot open '" + output + "' for writing");
        out << table;
        if (!out.flush())
            throw rismimo::IoError("write to '" + output + "' failed");
        std::printf("q10=%.4f q50=%.4f points=%zu -> %s\n", result.quantile_10, result.quantile_50, result.cdf.size(),
                    output.c_str());
        return exit_ok;
    }

    int command_validate(std::vector<int> ids, std::optional<std::uint64_t> seed)
    {
        if (ids.empty())
            for (int id = 1; id <= rismimo::validation::criterion_count; ++id)
                ids.push_back(id);
        std::uint64_t s = 1;
        if (seed)
            s = *seed;
        else if (const auto env = environment_seed())
            s = *env;

        bool all = true;
        for (int id : ids)
        {
            const auto report = rismimo::validation::run_criterion(id, s);
            std::cout << rismimo::validation::format_report(report) << std::endl;
            all = all && report.passed;
        }
        return all ? exit_ok : exit_validation_failed;
    }

    int command_sweep(const ScenarioOptions &opt, const std::string &field, const std::vector<std::string> &values,
                      const std::string &output, const std::string &results_dir)
    {
        const rismimo::Scenario base = load(opt);
        std::vector<rismimo::Scenario> runs;
        for (const std::string &v : values)
        {
            rismimo::Scenario s = rismimo::with_field(base, field, v);
            s.validate();
            runs.push_back(std::move(s));
        }

        std::ostringstream table;
        table << "field,value,scenario_id,mode,scheme,combiner,pilot_length,q10,q50,mean_se\n";
        for (std::size_t i = 0; i < runs.size(); ++i)
        {
            const rismimo::RunResult r = rismimo::run_experiment(runs[i]);
            double sum = 0.0;
            for (const rismimo::CdfPoint &p : r.cdf)
                sum += p.se;
            const double mean = r.cdf.empty() ? 0.0 : sum / static_cast<double>(r.cdf.size());
            char line[512];
            std::snprintf(line, sizeof line, "%s,%s,%s,%s,%s,%s,%zu,%.17g,%.17g,%.17g\n", field.c_str(), values[i].c_str(),
                          r.metadata.scenario_id.c_str(), r.metadata.mode.c_str(), r.metadata.scheme.c_str(),
                          r.metadata.combiner.c_str(), r.metadata.pilot_length, r.quantile_10, r.quantile_50, mean);
            table << line;
            std::printf("%s=%s ", field.c_str(), values[i].c_str());
            print_summary(r);
            if (!results_dir.empty())
                rismimo::emit_results(r, results_dir + "/sweep_" + std::to_string(i) + ".json", rismimo::ResultFormat::json);
        }

        if (output.empty())
        {
            std::cout << table.str();
            return exit_ok;
        }
        std::ofstream out(output, std::ios::binary);
        if (!out)
            throw rismimo::IoError("cannot open '" + output + "' for writing");
        out << table.str();
        if (!out.flush())
            throw rismimo::IoError("write to '" + output + "' failed");
        return exit_ok;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Uplink massive MIMO with reconfigurable intelligent surfaces: link-level Monte-Carlo simulator"};
    app.require_subcommand(1);

    std::string log_level = "warning";
    app.add_option("--log-level", log_level, "debug, info, warning, error or off")
        ->check(CLI::IsMember({"debug", "info", "warning", "error", "off"}));

    ScenarioOptions run_opt;
    std::string run_output;
    std::string run_format = "csv";
    bool dry_run = false;
    CLI::App *run = app.add_subcommand("run", "Run a scenario and write per-drop SE values and the CDF");
    add_scenario_options(run, run_opt);
    run->add_option("-o,--output", run_output, "Result file (csv: also writes <stem>.cdf.csv)");
    run->add_option("--format", run_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_flag("--dry-run", dry_run, "Print the effective scenario and exit");

    std::string cdf_input;
    std::string cdf_output;
    CLI::App *cdf = app.add_subcommand("cdf", "Extract the CDF table from a JSON result file");
    cdf->add_option("results", cdf_input, "Result file written with --format json")->required();
    cdf->add_option("-o,--output", cdf_output, "CSV output (default: stdout)");

    std::vector<int> criteria;
    std::optional<std::uint64_t> validate_seed;
    CLI::App *validate = app.add_subcommand("validate", "Run the acceptance checks against the brute-force oracles");
    validate->add_option("-c,--criterion", criteria, "Criterion number (repeatable, default: all)")
        ->check(CLI::Range(1, rismimo::validation::criterion_count));
    validate->add_option("--seed", validate_seed, std::string("Seed (default: $") + seed_variable + ", then 1)");

    ScenarioOptions sweep_opt;
    std::string sweep_field;
    std::vector<std::string> sweep_values;
    std::string sweep_output;
    std::string sweep_dir;
    CLI::App *sweep = app.add_subcommand("sweep", "Run a scenario for several values of one field");
    add_scenario_options(sweep, sweep_opt);
    sweep->add_option("--field", sweep_field, "Dotted field name, e.g. dimensions.bs_antennas")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated JSON values")->required()->delimiter(',');
    sweep->add_option("-o,--output", sweep_output, "Summary CSV (default: stdout)");
    sweep->add_option("--results-dir", sweep_dir, "Directory for the full JSON result of every value")
        ->check(CLI::ExistingDirectory);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    static const std::map<std::string, rismimo::log::Level> levels{{"debug", rismimo::log::Level::debug},
                                                                    {"info", rismimo::log::Level::info},
                                                                    {"warning", rismimo::log::Level::warning},
                                                                    {"error", rismimo::log::Level::error},
                                                                    {"off", rismimo::log::Level::off}};
    rismimo::log::set_level(levels.at(log_level));

    try
    {
        if (*run)
            return command_run(run_opt, run_output, run_format, dry_run);
        if (*cdf)
            return command_cdf(cdf_input, cdf_output);
        if (*validate)
            return command_validate(criteria, validate_seed);
        if (*sweep)
            return command_sweep(sweep_opt, sweep_field, sweep_values, sweep_output, sweep_dir);
    }
    catch (const rismimo::IoError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "runtime error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}
