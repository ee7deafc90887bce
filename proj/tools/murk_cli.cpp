// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

// Benchmark driver: runs estimator/field scenario matrices over many trials
// with deterministic parallel RNG, writes one CSV row per estimator and
// sweep point, and exits nonzero when an analytic oracle disagrees with the
// measurement.
//
// Exit codes: 0 all oracle gates passed, 1 gate failure or aborted
// scenario, 2 configuration error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "murk/scenario.hpp"

namespace {

std::string image_path(const std::string& csv_path, const std::string& name) {
    std::string stem = csv_path;
    const auto dot = stem.rfind('.');
    if (dot != std::string::npos && dot > stem.rfind('/')) stem.resize(dot);
    return stem + "_" + name + ".pgm";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"murk: Monte Carlo transmittance estimation benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path = "murk_results.csv";
    std::string scenario_filter;
    int workers = 0;
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
    bool list_builtins = false;

    CLI::App* run = app.add_subcommand("run", "run scenarios and emit CSV");
    run->add_option("config", config_path,
                    "scenario config file, or 'builtins'");
    run->add_option("--out", out_path, "output CSV path");
    run->add_option("--workers", workers,
                    "worker threads (0 = hardware count; no effect on output)");
    run->add_option("--seed", seed_override, "override every scenario seed")
        ->each([&](const std::string&) { has_seed_override = true; });
    run->add_option("--scenario", scenario_filter,
                    "run only the scenario with this name");
    run->add_flag("--list-builtins", list_builtins,
                  "list built-in scenario names and exit");

    CLI11_PARSE(app, argc, argv);

    if (list_builtins) {
        for (const auto& s : murk::builtin_scenarios()) {
            std::printf("%-34s %3zu estimator(s), %s%llu trials\n",
                        s.name.c_str(), s.estimators.size(),
                        s.slab ? "per-pixel " : "",
                        static_cast<unsigned long long>(s.trials));
        }
        return 0;
    }

    std::vector<murk::ScenarioConfig> scenarios;
    try {
        if (config_path.empty())
            throw murk::ConfigError("missing config path (or 'builtins')");
        scenarios = config_path == "builtins"
                        ? murk::builtin_scenarios()
                        : murk::parse_config_file(config_path);
        if (!scenario_filter.empty()) {
            std::erase_if(scenarios, [&](const murk::ScenarioConfig& s) {
                return s.name != scenario_filter;
            });
            if (scenarios.empty())
                throw murk::ConfigError("no scenario named '" +
                                        scenario_filter + "'");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    bool aborted = false;
    std::vector<murk::SummaryRow> rows;
    std::vector<murk::GrayImage> images;
    for (auto& scenario : scenarios) {
        if (has_seed_override) scenario.seed = seed_override;
        try {
            murk::ScenarioResult result = murk::run_scenario(scenario, workers);
            rows.insert(rows.end(), result.rows.begin(), result.rows.end());
            images.insert(images.end(),
                          std::make_move_iterator(result.images.begin()),
                          std::make_move_iterator(result.images.end()));
            std::printf("scenario %-34s %4zu row(s)\n", scenario.name.c_str(),
                        result.rows.size());
        } catch (const murk::ConfigError& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        } catch (const std::exception& e) {
            // Estimator precondition failures abort the scenario, not the run.
            std::fprintf(stderr, "scenario %s aborted: %s\n",
                         scenario.name.c_str(), e.what());
            aborted = true;
        }
    }

    try {
        murk::emit_csv(rows, out_path);
        for (const auto& image : images)
            murk::write_pgm(image, image_path(out_path, image.name));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    const bool gates = murk::oracle_gate_passes(rows);
    std::printf("%zu row(s) -> %s; oracle gate: %s\n", rows.size(),
                out_path.c_str(), gates ? "pass" : "FAIL");
    if (!gates || aborted) return 1;
    return 0;
}
