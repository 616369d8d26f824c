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
#include "rismimo/validation/criteria.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <vector>

int main(int argc, char **argv)
{
    namespace v = rismimo::validation;
    CLI::App app{"Acceptance checks: one PASS/FAIL line per criterion"};
    std::vector<int> ids;
    std::uint64_t seed = 1;
    app.add_option("-c,--criterion", ids, "Criterion number (repeatable, default: all)")
        ->check(CLI::Range(1, v::criterion_count));
    app.add_option("--seed", seed, "Seed of the random instances and runs");
    CLI11_PARSE(app, argc, argv);

    if (ids.empty())
        for (int id = 1; id <= v::criterion_count; ++id)
            ids.push_back(id);

    int failed = 0;
    for (int id : ids)
    {
        try
        {
            const v::CriterionReport report = v::run_criterion(id, seed);
            std::cout << v::format_report(report) << std::endl;
            failed += report.passed ? 0 : 1;
        }
        catch (const std::exception &e)
        {
            std::cout << "criterion " << id << " FAIL error: " << e.what() << std::endl;
            ++failed;
        }
    }
    std::cout << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
