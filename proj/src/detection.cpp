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

#include "psim/detection.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace psim {

namespace {

DetectionPattern spatial_totals(const FockState& state,
                                const OccupationVector& occ) {
    DetectionPattern totals(static_cast<std::size_t>(state.n_spatial()), 0);
    for (int s = 0; s < state.n_spatial(); ++s) {
        for (int m = 0; m < state.n_internal(); ++m) {
            totals[static_cast<std::size_t>(s)] +=
                occ.counts[state.flat_index({s, m})];
        }
    }
    return totals;
}

void enumerate_compositions(int remaining, std::size_t mode,
                            DetectionPattern& current,
                            std::vector<DetectionPattern>& out) {
    if (mode + 1 == current.size()) {
        current[mode] = remaining;
        out.push_back(current);
        return;
    }
    for (int n = 0; n <= remaining; ++n) {
        current[mode] = n;
        enumerate_compositions(remaining - n, mode + 1, current, out);
    }
}

}  // namespace

double pattern_probability(const FockState& state,
                           const DetectionPattern& pattern) {
    if (pattern.size() != static_cast<std::size_t>(state.n_spatial())) {
        throw std::invalid_argument("pattern length " +
                                    std::to_string(pattern.size()) +
                                    " does not match spatial width " +
                                    std::to_string(state.n_spatial()));
    }
    for (int n : pattern) {
        if (n < 0) throw std::invalid_argument("pattern counts must be >= 0");
    }
    const int total = std::accumulate(pattern.begin(), pattern.end(), 0);
    if (total != state.photon_number()) {
        throw std::invalid_argument(
            "pattern total " + std::to_string(total) +
            " does not match photon number " +
            std::to_string(state.photon_number()));
    }
    double probability = 0.0;
    for (const auto& [occ, amp] : state.terms()) {
        if (spatial_totals(state, occ) == pattern) {
            probability += std::norm(amp);
        }
    }
    return probability;
}

std::map<DetectionPattern, double> all_pattern_probabilities(
    const FockState& state) {
    std::vector<DetectionPattern> patterns;
    DetectionPattern scratch(static_cast<std::size_t>(state.n_spatial()), 0);
    enumerate_compositions(state.photon_number(), 0, scratch, patterns);

    std::map<DetectionPattern, double> result;
    for (const auto& pattern : patterns) result[pattern] = 0.0;
    for (const auto& [occ, amp] : state.terms()) {
        result[spatial_totals(state, occ)] += std::norm(amp);
    }
    return result;
}

}  // namespace psim
