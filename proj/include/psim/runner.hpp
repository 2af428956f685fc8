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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace psim {

/// Options of the `simulate` subcommand. --seed wins over --set seed=...;
/// the output directory falls back to $PSIM_OUT_DIR, then ".".
struct RunOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

/// Runs the configured experiment, writes CSV/JSON outputs, prints a
/// summary table. Returns 0; failures are reported by exception.
int run_simulation(const RunOptions& options, std::ostream& out);

/// Fits a dip CSV, prints the parameters as key=value lines, writes a JSON
/// result document. Returns 0; failures are reported by exception.
int run_fit_file(const std::string& csv_path,
                 const std::optional<std::string>& out_file,
                 const std::optional<std::string>& out_dir, std::ostream& out);

}  // namespace psim
