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

#include "psim/config.hpp"

#include <charconv>
#include <cstddef>
#include <functional>
#include <map>
#include <sstream>

#include "psim/distinguishability.hpp"
#include "psim/errors.hpp"

namespace psim {

namespace {

enum KindMask : unsigned {
    kHom = 1u << 0,
    kThree = 1u << 1,
    kSweep = 1u << 2,
    kMz = 1u << 3,
    kFit = 1u << 4,
    kScans = kHom | kThree,
    kAll = kHom | kThree | kSweep | kMz | kFit,
};

unsigned kind_bit(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::hom_scan: return kHom;
        case ExperimentKind::three_photon_scan: return kThree;
        case ExperimentKind::visibility_sweep: return kSweep;
        case ExperimentKind::mz: return kMz;
        case ExperimentKind::fit: return kFit;
    }
    return 0;
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& anchor) {
    const std::string token = trim(value);
    double parsed = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), parsed);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw parse_error(anchor + ": '" + token + "' is not a number");
    }
    return parsed;
}

int parse_int(const std::string& value, const std::string& anchor) {
    const std::string token = trim(value);
    int parsed = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), parsed);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw parse_error(anchor + ": '" + token + "' is not an integer");
    }
    return parsed;
}

std::uint64_t parse_u64(const std::string& value, const std::string& anchor) {
    const std::string token = trim(value);
    std::uint64_t parsed = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), parsed);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw parse_error(anchor + ": '" + token +
                          "' is not a non-negative integer");
    }
    return parsed;
}

bool parse_bool(const std::string& value, const std::string& anchor) {
    const std::string token = trim(value);
    if (token == "true" || token == "1") return true;
    if (token == "false" || token == "0") return false;
    throw parse_error(anchor + ": '" + token +
                      "' is not a boolean (true/false)");
}

std::vector<double> parse_double_list(const std::string& value,
                                      const std::string& anchor) {
    std::vector<double> list;
    std::stringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        list.push_back(parse_double(item, anchor));
    }
    if (list.empty()) {
        throw parse_error(anchor + ": expected a comma-separated number list");
    }
    return list;
}

Exec parse_exec(const std::string& value, const std::string& anchor) {
    const std::string token = trim(value);
    if (token == "serial") return Exec::serial;
    if (token == "parallel") return Exec::parallel;
    throw parse_error(anchor + ": '" + token +
                      "' is not an execution mode (serial/parallel)");
}

ExperimentKind parse_kind(const std::string& value,
                          const std::string& anchor) {
    const std::string token = trim(value);
    if (token == "hom-scan") return ExperimentKind::hom_scan;
    if (token == "three-photon-scan") return ExperimentKind::three_photon_scan;
    if (token == "visibility-sweep") return ExperimentKind::visibility_sweep;
    if (token == "mz") return ExperimentKind::mz;
    if (token == "fit") return ExperimentKind::fit;
    throw parse_error(anchor + ": unknown experiment '" + token +
                      "' (expected hom-scan, three-photon-scan, "
                      "visibility-sweep, mz, or fit)");
}

struct KeySpec {
    unsigned kinds;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> table = {
        {"output_prefix", {kAll, [](RunConfig& c, const std::string& v,
                                    const std::string&) {
                               c.output_prefix = trim(v);
                           }}},
        {"seed", {kAll, [](RunConfig& c, const std::string& v,
                           const std::string& a) { c.seed = parse_u64(v, a); }}},
        {"eta", {kScans, [](RunConfig& c, const std::string& v,
                            const std::string& a) {
                     c.eta = parse_double(v, a);
                 }}},
        {"center_wavelength_nm",
         {kScans | kSweep | kMz, [](RunConfig& c, const std::string& v,
                                    const std::string& a) {
              c.center_wavelength_nm = parse_double(v, a);
          }}},
        {"filter_fwhm_nm", {kScans | kSweep, [](RunConfig& c,
                                                const std::string& v,
                                                const std::string& a) {
                                c.filter_fwhm_nm = parse_double(v, a);
                            }}},
        {"delays_s", {kScans, [](RunConfig& c, const std::string& v,
                                 const std::string& a) {
                          c.delays_s = parse_double_list(v, a);
                      }}},
        {"delays_mm", {kScans, [](RunConfig& c, const std::string& v,
                                  const std::string& a) {
                           c.delays_mm = parse_double_list(v, a);
                       }}},
        {"delay_min_mm", {kScans, [](RunConfig& c, const std::string& v,
                                     const std::string& a) {
                              c.delay_min_mm = parse_double(v, a);
                          }}},
        {"delay_max_mm", {kScans, [](RunConfig& c, const std::string& v,
                                     const std::string& a) {
                              c.delay_max_mm = parse_double(v, a);
                          }}},
        {"delay_points", {kScans, [](RunConfig& c, const std::string& v,
                                     const std::string& a) {
                              c.delay_points = parse_int(v, a);
                          }}},
        {"delay_stage_factor", {kScans, [](RunConfig& c, const std::string& v,
                                           const std::string& a) {
                                    c.delay_stage_factor = parse_double(v, a);
                                }}},
        {"rate_pairs_per_s", {kScans, [](RunConfig& c, const std::string& v,
                                         const std::string& a) {
                                  c.rate_pairs_per_s = parse_double(v, a);
                              }}},
        {"integration_time_s", {kScans, [](RunConfig& c, const std::string& v,
                                           const std::string& a) {
                                    c.integration_time_s = parse_double(v, a);
                                }}},
        {"intra_pair_overlap",
         {kScans | kSweep, [](RunConfig& c, const std::string& v,
                              const std::string& a) {
              c.intra_pair_overlap = parse_double(v, a);
          }}},
        {"drift_per_s", {kScans, [](RunConfig& c, const std::string& v,
                                    const std::string& a) {
                             c.drift_per_s = parse_double(v, a);
                         }}},
        {"run_fit", {kScans, [](RunConfig& c, const std::string& v,
                                const std::string& a) {
                         c.run_fit = parse_bool(v, a);
                     }}},
        {"exec", {kScans | kSweep, [](RunConfig& c, const std::string& v,
                                      const std::string& a) {
                      c.exec = parse_exec(v, a);
                  }}},
        {"etas", {kSweep, [](RunConfig& c, const std::string& v,
                             const std::string& a) {
                      c.etas = parse_double_list(v, a);
                  }}},
        {"visibility_noise_sigma",
         {kSweep, [](RunConfig& c, const std::string& v, const std::string& a) {
              c.visibility_noise_sigma = parse_double(v, a);
          }}},
        {"eta1", {kMz, [](RunConfig& c, const std::string& v,
                          const std::string& a) {
                      c.eta1 = parse_double(v, a);
                  }}},
        {"eta2", {kMz, [](RunConfig& c, const std::string& v,
                          const std::string& a) {
                      c.eta2 = parse_double(v, a);
                  }}},
        {"phi_rad", {kMz, [](RunConfig& c, const std::string& v,
                             const std::string& a) {
                         c.phi_rad = parse_double(v, a);
                     }}},
        {"target_reflectivity", {kMz, [](RunConfig& c, const std::string& v,
                                         const std::string& a) {
                                     c.target_reflectivity =
                                         parse_double(v, a);
                                 }}},
        {"input_csv", {kFit, [](RunConfig& c, const std::string& v,
                                const std::string&) {
                           c.input_csv = trim(v);
                       }}},
    };
    return table;
}

void set_key(RunConfig& config, const std::string& key,
             const std::string& value, const std::string& anchor) {
    const auto it = key_table().find(key);
    if (it == key_table().end()) {
        throw parse_error(anchor + ": unknown key '" + key + "'");
    }
    if ((it->second.kinds & kind_bit(config.experiment)) == 0) {
        throw parse_error(anchor + ": key '" + key +
                          "' does not apply to experiment '" +
                          experiment_name(config.experiment) + "'");
    }
    it->second.set(config, value, anchor);
}

struct Entry {
    std::size_t line;
    std::string key;
    std::string value;
};

std::vector<Entry> tokenize(const std::string& text,
                            const std::string& source) {
    std::vector<Entry> entries;
    std::stringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto equals = stripped.find('=');
        const std::string anchor = source + ":" + std::to_string(line_no);
        if (equals == std::string::npos) {
            throw parse_error(anchor + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, equals));
        if (key.empty()) {
            throw parse_error(anchor + ": empty key");
        }
        entries.push_back({line_no, key, trim(stripped.substr(equals + 1))});
    }
    return entries;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::hom_scan: return "hom-scan";
        case ExperimentKind::three_photon_scan: return "three-photon-scan";
        case ExperimentKind::visibility_sweep: return "visibility-sweep";
        case ExperimentKind::mz: return "mz";
        case ExperimentKind::fit: return "fit";
    }
    return "unknown";
}

RunConfig parse_run_config(const std::string& text, const std::string& source) {
    const std::vector<Entry> entries = tokenize(text, source);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            if (entries[i].key == entries[j].key) {
                throw parse_error(source + ":" +
                                  std::to_string(entries[j].line) +
                                  ": duplicate key '" + entries[j].key + "'");
            }
        }
    }

    RunConfig config;
    bool have_schema = false;
    bool have_experiment = false;
    for (const auto& entry : entries) {
        const std::string anchor = source + ":" + std::to_string(entry.line);
        if (entry.key == "schema_version") {
            const int version = parse_int(entry.value, anchor);
            if (version != 1) {
                throw parse_error(anchor + ": unsupported schema_version " +
                                  std::to_string(version) + " (expected 1)");
            }
            config.schema_version = version;
            have_schema = true;
        } else if (entry.key == "experiment") {
            config.experiment = parse_kind(entry.value, anchor);
            have_experiment = true;
        }
    }
    if (!have_schema) {
        throw parse_error(source + ": missing required key 'schema_version'");
    }
    if (!have_experiment) {
        throw parse_error(source + ": missing required key 'experiment'");
    }
    for (const auto& entry : entries) {
        if (entry.key == "schema_version" || entry.key == "experiment") {
            continue;
        }
        set_key(config, entry.key, entry.value,
                source + ":" + std::to_string(entry.line));
    }
    return config;
}

void apply_override(RunConfig& config, const std::string& key_value) {
    const std::string anchor = "override '" + key_value + "'";
    const auto equals = key_value.find('=');
    if (equals == std::string::npos) {
        throw parse_error(anchor + ": expected key=value");
    }
    const std::string key = trim(key_value.substr(0, equals));
    if (key == "experiment" || key == "schema_version") {
        throw parse_error(anchor + ": '" + key + "' cannot be overridden");
    }
    set_key(config, key, key_value.substr(equals + 1), anchor);
}

void finalize_run_config(RunConfig& config, const std::string& source) {
    if (config.output_prefix.empty()) {
        std::string prefix = experiment_name(config.experiment);
        for (char& c : prefix) {
            if (c == '-') c = '_';
        }
        config.output_prefix = prefix;
    }
    const bool is_scan = config.experiment == ExperimentKind::hom_scan ||
                         config.experiment == ExperimentKind::three_photon_scan;
    if (is_scan) {
        const bool have_range = config.delay_min_mm.has_value() ||
                                config.delay_max_mm.has_value() ||
                                config.delay_points.has_value();
        const int forms = (config.delays_s.empty() ? 0 : 1) +
                          (config.delays_mm.empty() ? 0 : 1) +
                          (have_range ? 1 : 0);
        if (forms != 1) {
            throw parse_error(
                source +
                ": specify delays exactly one way (delays_s, delays_mm, or "
                "delay_min_mm/delay_max_mm/delay_points)");
        }
        if (have_range &&
            !(config.delay_min_mm && config.delay_max_mm &&
              config.delay_points)) {
            throw parse_error(source +
                              ": delay_min_mm, delay_max_mm and delay_points "
                              "must be given together");
        }
        if (have_range && *config.delay_points < 1) {
            throw parse_error(source + ": delay_points must be >= 1");
        }
        if (!(config.delay_stage_factor > 0.0)) {
            throw parse_error(source + ": delay_stage_factor must be > 0");
        }
    }
    if (config.experiment == ExperimentKind::visibility_sweep &&
        config.etas.empty()) {
        throw parse_error(source + ": visibility-sweep requires 'etas'");
    }
    if (config.experiment == ExperimentKind::mz) {
        if (config.phi_rad.has_value() ==
            config.target_reflectivity.has_value()) {
            throw parse_error(source +
                              ": mz requires exactly one of 'phi_rad' and "
                              "'target_reflectivity'");
        }
    }
    if (config.experiment == ExperimentKind::fit && config.input_csv.empty()) {
        throw parse_error(source + ": fit requires 'input_csv'");
    }
}

std::vector<double> RunConfig::resolved_delays() const {
    const double mm_to_seconds = delay_stage_factor * 1e-3 / kSpeedOfLight;
    if (!delays_s.empty()) return delays_s;
    std::vector<double> delays;
    if (!delays_mm.empty()) {
        delays.reserve(delays_mm.size());
        for (double x : delays_mm) delays.push_back(x * mm_to_seconds);
        return delays;
    }
    const int points = delay_points.value_or(0);
    const double lo = delay_min_mm.value_or(0.0);
    const double hi = delay_max_mm.value_or(0.0);
    delays.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double x =
            points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
        delays.push_back(x * mm_to_seconds);
    }
    return delays;
}

ScanConfig RunConfig::scan_config() const {
    ScanConfig scan;
    scan.delays_s = resolved_delays();
    scan.eta = eta;
    scan.wavepacket = {center_wavelength_nm, filter_fwhm_nm};
    scan.rate_pairs_per_s = rate_pairs_per_s;
    scan.integration_time_s = integration_time_s;
    scan.rng_seed = seed;
    scan.intra_pair_overlap = intra_pair_overlap;
    scan.drift_per_s = drift_per_s;
    scan.exec = exec;
    return scan;
}

}  // namespace psim
