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
#include <optional>
#include <string>
#include <vector>

#include "psim/experiments.hpp"

namespace psim {

enum class ExperimentKind { hom_scan, three_photon_scan, visibility_sweep, mz, fit };

/// CLI-facing name of an experiment kind (e.g. "hom-scan").
std::string experiment_name(ExperimentKind kind);

/**
 * @brief One experiment as described by a key=value config file.
 *
 * Delays may be given directly in seconds, or as retroreflecting-stage
 * actuator positions in millimeters converted via
 * tau = delay_stage_factor * x / c (factor 2 for a double-pass stage,
 * set 1 for single-pass).
 */
struct RunConfig {
    int schema_version = 1;
    ExperimentKind experiment = ExperimentKind::hom_scan;
    std::string output_prefix;
    std::uint64_t seed = 1;

    // Delay scans.
    double eta = 0.5;
    double center_wavelength_nm = 804.0;
    double filter_fwhm_nm = 2.0;
    std::vector<double> delays_s;
    std::vector<double> delays_mm;
    std::optional<double> delay_min_mm;
    std::optional<double> delay_max_mm;
    std::optional<int> delay_points;
    double delay_stage_factor = 2.0;
    double rate_pairs_per_s = 200.0;
    double integration_time_s = 20.0;
    double intra_pair_overlap = 1.0;
    double drift_per_s = 0.0;
    bool run_fit = true;
    Exec exec = Exec::parallel;

    // Visibility sweep.
    std::vector<double> etas;
    double visibility_noise_sigma = 0.0;

    // Mach-Zehnder.
    double eta1 = 0.5;
    double eta2 = 0.5;
    std::optional<double> phi_rad;
    std::optional<double> target_reflectivity;

    // Stored-data fit.
    std::string input_csv;

    /// Scan delays in seconds, combining the three input forms.
    std::vector<double> resolved_delays() const;

    /// Assembles the scan parameters for the experiments layer.
    ScanConfig scan_config() const;
};

/**
 * @brief Parses config text; errors carry "<source>:<line>" anchors.
 *
 * Requires schema_version = 1 and an experiment key; rejects unknown keys,
 * keys that do not apply to the chosen experiment, and duplicate keys.
 * Call finalize_run_config after any overrides.
 */
RunConfig parse_run_config(const std::string& text, const std::string& source);

/// Applies one "key=value" override with the same validation as the file
/// parser; errors are anchored to the override text.
void apply_override(RunConfig& config, const std::string& key_value);

/// Cross-field checks (delay specification, MZ phase vs target, ...);
/// errors are anchored to the source name.
void finalize_run_config(RunConfig& config, const std::string& source);

}  // namespace psim
