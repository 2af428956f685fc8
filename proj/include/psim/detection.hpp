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

#include <map>
#include <vector>

#include "psim/fock.hpp"

namespace psim {

/// Photon counts per spatial mode as seen by number-resolving detectors
/// that are blind to internal modes.
using DetectionPattern = std::vector<int>;

/**
 * @brief Probability of one spatial detection pattern.
 *
 * Sums |amplitude|^2 over every internal-mode assignment whose per-mode
 * spatial totals match the pattern. Throws std::invalid_argument when the
 * pattern length differs from the spatial width or its total differs from
 * the state's photon number.
 */
double pattern_probability(const FockState& state,
                           const DetectionPattern& pattern);

/// Probabilities for every composition of the photon number over spatial
/// modes, zero-probability patterns included; values sum to 1 for a
/// normalized state.
std::map<DetectionPattern, double> all_pattern_probabilities(
    const FockState& state);

}  // namespace psim
