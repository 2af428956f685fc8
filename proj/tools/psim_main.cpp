/**
 * Copyright 2026 The psim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psim/errors.hpp"
#include "psim/runner.hpp"

namespace {

// Exit codes: 2 invalid config/input, 3 fit failure, 4 I/O failure.
int dispatch(const std::function<int()>& action) {
    try {
        return action();
    } catch (const psim::io_error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 4;
    } catch (const psim::fit_error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    } catch (const psim::parse_error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const psim::capacity_error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const psim::degeneracy_error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const std::domain_error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Few-photon linear-optics simulator and analysis toolkit"};
    app.require_subcommand(1);

    psim::RunOptions run_options;
    std::uint64_t seed = 0;
    std::string out_dir;
    auto* simulate =
        app.add_subcommand("simulate", "Run an experiment from a config file");
    simulate->add_option("config", run_options.config_path, "Config file path")
        ->required();
    auto* seed_opt =
        simulate->add_option("--seed", seed, "Override the RNG seed");
    auto* dir_opt = simulate->add_option(
        "--out", out_dir, "Output directory (default $PSIM_OUT_DIR or .)");
    simulate->add_option("--set", run_options.overrides,
                         "Override a config key, key=value (repeatable)");

    std::string csv_path;
    std::string fit_out;
    auto* fit = app.add_subcommand("fit", "Fit a dip CSV file");
    fit->add_option("csv", csv_path, "CSV with header tau_s,counts[,sigma]")
        ->required();
    auto* fit_out_opt =
        fit->add_option("--out", fit_out, "JSON result file path");

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        if (seed_opt->count() > 0) run_options.seed = seed;
        if (dir_opt->count() > 0) run_options.out_dir = out_dir;
        return dispatch([&run_options] {
            return psim::run_simulation(run_options, std::cout);
        });
    }
    std::optional<std::string> out_file;
    if (fit_out_opt->count() > 0) out_file = fit_out;
    return dispatch([&csv_path, &out_file] {
        return psim::run_fit_file(csv_path, out_file, std::nullopt, std::cout);
    });
}
