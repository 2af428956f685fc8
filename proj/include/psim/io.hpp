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

#include <string>
#include <vector>

#include "psim/analysis.hpp"

namespace psim {

/// Reads a whole file; throws io_error when it cannot be opened or read.
std::string read_text_file(const std::string& path);

/// Writes content, creating parent directories; throws io_error on failure.
void write_text_file(const std::string& path, const std::string& content);

/// Shortest lossless decimal form of a double (17 significant digits).
std::string format_double(double value);

/// Git-style content hash: SHA-1 of "blob <size>\0" + content, hex encoded.
std::string sha1_git_blob(const std::string& content);

/**
 * @brief Parses dip CSV text into fit points.
 *
 * Accepts header tau_s,counts[,sigma] as well as the scan output header
 * tau_s,expected_prob,expected_counts,sampled_counts (sampled counts are
 * then fitted). Without a sigma column, sqrt(max(N,1)) Poisson
 * uncertainties are filled in. Errors carry "<source>:<line>" anchors.
 */
std::vector<DipPoint> parse_dip_csv(const std::string& text,
                                    const std::string& source);

}  // namespace psim
