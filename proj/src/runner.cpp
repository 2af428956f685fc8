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

#include "psim/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <random>

#include <json.hpp>

#include "psim/analysis.hpp"
#include "psim/circuit.hpp"
#include "psim/config.hpp"
#include "psim/errors.hpp"
#include "psim/io.hpp"

namespace psim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string resolve_out_dir(const std::optional<std::string>& cli_dir) {
    if (cli_dir) return *cli_dir;
    if (const char* env = std::getenv("PSIM_OUT_DIR");
        env != nullptr && env[0] != '\0') {
        return env;
    }
    return ".";
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::string row(const char* format, auto... values) {
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), format, values...);
    return buffer;
}

std::string scan_csv(const ScanResult& result) {
    std::string csv = "tau_s,expected_prob,expected_counts,sampled_counts\n";
    for (const auto& point : result.points) {
        csv += format_double(point.tau_s) + "," +
               format_double(point.expected_probability) + "," +
               format_double(point.expected_counts) + "," +
               std::to_string(point.sampled_counts) + "\n";
    }
    return csv;
}

ordered_json fit_json(const DipFitResult& fit) {
    return ordered_json{{"a", fit.baseline_a},
                        {"b_per_s", fit.baseline_slope_b},
                        {"v", fit.visibility_v},
                        {"tau0_s", fit.center_tau0},
                        {"w_s", fit.width_w},
                        {"err_a", fit.err_a},
                        {"err_b_per_s", fit.err_b},
                        {"err_v", fit.err_v},
                        {"err_tau0_s", fit.err_tau0},
                        {"err_w_s", fit.err_w},
                        {"reduced_chi2", fit.reduced_chi2},
                        {"iterations", fit.iterations},
                        {"clamped_v", fit.clamped_v}};
}

void print_fit(const DipFitResult& fit, std::ostream& out) {
    out << "a=" << format_double(fit.baseline_a) << "\n"
        << "b_per_s=" << format_double(fit.baseline_slope_b) << "\n"
        << "v=" << format_double(fit.visibility_v) << "\n"
        << "tau0_s=" << format_double(fit.center_tau0) << "\n"
        << "w_s=" << format_double(fit.width_w) << "\n"
        << "err_a=" << format_double(fit.err_a) << "\n"
        << "err_b_per_s=" << format_double(fit.err_b) << "\n"
        << "err_v=" << format_double(fit.err_v) << "\n"
        << "err_tau0_s=" << format_double(fit.err_tau0) << "\n"
        << "err_w_s=" << format_double(fit.err_w) << "\n"
        << "reduced_chi2=" << format_double(fit.reduced_chi2) << "\n"
        << "iterations=" << fit.iterations << "\n"
        << "clamped_v=" << (fit.clamped_v ? "true" : "false") << "\n";
    if (fit.clamped_v) {
        out << "warning: fitted visibility left [0, 1] and was clamped\n";
    }
}

ordered_json config_echo(const RunConfig& config) {
    ordered_json echo{{"experiment", experiment_name(config.experiment)},
                      {"output_prefix", config.output_prefix},
                      {"seed", config.seed}};
    switch (config.experiment) {
        case ExperimentKind::hom_scan:
        case ExperimentKind::three_photon_scan:
            echo["eta"] = config.eta;
            echo["center_wavelength_nm"] = config.center_wavelength_nm;
            echo["filter_fwhm_nm"] = config.filter_fwhm_nm;
            echo["delay_stage_factor"] = config.delay_stage_factor;
            echo["rate_pairs_per_s"] = config.rate_pairs_per_s;
            echo["integration_time_s"] = config.integration_time_s;
            echo["intra_pair_overlap"] = config.intra_pair_overlap;
            echo["drift_per_s"] = config.drift_per_s;
            echo["run_fit"] = config.run_fit;
            echo["exec"] =
                config.exec == Exec::serial ? "serial" : "parallel";
            echo["delays_s"] = config.resolved_delays();
            break;
        case ExperimentKind::visibility_sweep:
            echo["etas"] = config.etas;
            echo["center_wavelength_nm"] = config.center_wavelength_nm;
            echo["filter_fwhm_nm"] = config.filter_fwhm_nm;
            echo["intra_pair_overlap"] = config.intra_pair_overlap;
            echo["visibility_noise_sigma"] = config.visibility_noise_sigma;
            break;
        case ExperimentKind::mz:
            echo["eta1"] = config.eta1;
            echo["eta2"] = config.eta2;
            echo["center_wavelength_nm"] = config.center_wavelength_nm;
            if (config.phi_rad) echo["phi_rad"] = *config.phi_rad;
            if (config.target_reflectivity) {
                echo["target_reflectivity"] = *config.target_reflectivity;
            }
            break;
        case ExperimentKind::fit:
            echo["input_csv"] = config.input_csv;
            break;
    }
    return echo;
}

DipFitResult fit_scan_counts(const ScanResult& scan) {
    std::vector<long long> counts;
    counts.reserve(scan.points.size());
    for (const auto& point : scan.points) counts.push_back(point.sampled_counts);
    const std::vector<double> sigmas = poisson_sigmas(counts);
    std::vector<DipPoint> points;
    points.reserve(scan.points.size());
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        points.push_back({scan.points[i].tau_s,
                          static_cast<double>(counts[i]), sigmas[i]});
    }
    return fit_dip(points);
}

int run_scan_experiment(const RunConfig& config, const std::string& out_dir,
                        ordered_json& results, std::ostream& out) {
    const bool three =
        config.experiment == ExperimentKind::three_photon_scan;
    const ScanConfig scan_config = config.scan_config();
    const ScanResult scan =
        three ? three_photon_scan(scan_config) : hom_scan(scan_config);

    const double curve_v =
        three ? three_photon_visibility(scan) : hom_visibility(scan);
    double ideal_v = 0.0;
    if (three) {
        // Ideal reference: the same scan with a perfectly degenerate pair.
        ScanConfig ideal = scan_config;
        ideal.intra_pair_overlap = 1.0;
        ideal.rate_pairs_per_s = 0.0;
        ideal_v = three_photon_visibility(three_photon_scan(ideal));
    } else {
        ideal_v = v_ideal(config.eta);
    }

    const std::string csv_name = config.output_prefix + ".csv";
    write_text_file(join_path(out_dir, csv_name), scan_csv(scan));

    results["asymptote_probability"] =
        three ? three_photon_asymptote(config.eta) : hom_asymptote(config.eta);
    results["curve_visibility"] = curve_v;
    results["ideal_visibility"] = ideal_v;
    results["curve_relative_visibility"] = curve_v / ideal_v;
    results["csv"] = csv_name;

    double summary_v = curve_v;
    if (config.run_fit) {
        const DipFitResult fit = fit_scan_counts(scan);
        summary_v = fit.visibility_v;
        results["fit"] = fit_json(fit);
        results["fit_relative_visibility"] = fit.visibility_v / ideal_v;
    }

    out << "experiment: " << experiment_name(config.experiment) << "\n";
    out << row("  %-10s %-12s %-12s %-12s\n", "eta", "V", "V_ideal", "V_rel");
    out << row("  %-10.6g %-12.6g %-12.6g %-12.6g\n", config.eta, summary_v,
               ideal_v, summary_v / ideal_v);
    if (config.run_fit) {
        const auto& fit = results["fit"];
        out << row("fit: V = %.6g +/- %.2g, tau0 = %.6g s, w = %.6g s, "
                   "chi2/dof = %.4g, iterations = %d\n",
                   fit["v"].get<double>(), fit["err_v"].get<double>(),
                   fit["tau0_s"].get<double>(), fit["w_s"].get<double>(),
                   fit["reduced_chi2"].get<double>(),
                   fit["iterations"].get<int>());
        if (fit["clamped_v"].get<bool>()) {
            out << "warning: fitted visibility left [0, 1] and was clamped\n";
        }
    }
    return 0;
}

int run_sweep_experiment(const RunConfig& config, const std::string& out_dir,
                         ordered_json& results, std::ostream& out) {
    const WavepacketTemplate wavepacket{config.center_wavelength_nm,
                                        config.filter_fwhm_nm};
    const std::vector<SweepPoint> sweep =
        visibility_sweep(config.etas, wavepacket, config.intra_pair_overlap);

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<ModeMismatchPoint> points;
    points.reserve(sweep.size());
    for (const auto& point : sweep) {
        double v = point.visibility;
        if (config.visibility_noise_sigma > 0.0) {
            v += config.visibility_noise_sigma * noise(rng);
        }
        points.push_back({point.eta, v, config.visibility_noise_sigma});
    }
    const ModeMismatchFit fit = fit_mode_mismatch(points);

    std::string csv = "eta,visibility,v_ideal,sigma\n";
    ordered_json rows = ordered_json::array();
    out << "experiment: visibility-sweep\n";
    out << row("  %-10s %-12s %-12s %-12s\n", "eta", "V", "V_ideal", "V_rel");
    for (const auto& point : points) {
        const double ideal = v_ideal(point.eta);
        csv += format_double(point.eta) + "," +
               format_double(point.visibility) + "," + format_double(ideal) +
               "," + format_double(point.sigma) + "\n";
        rows.push_back(ordered_json{{"eta", point.eta},
                                    {"visibility", point.visibility},
                                    {"v_ideal", ideal},
                                    {"sigma", point.sigma}});
        out << row("  %-10.6g %-12.6g %-12.6g %-12.6g\n", point.eta,
                   point.visibility, ideal, point.visibility / ideal);
    }
    out << row("mode mismatch M = %.6g +/- %.2g\n", fit.m, fit.uncertainty);

    const std::string csv_name = config.output_prefix + ".csv";
    write_text_file(join_path(out_dir, csv_name), csv);
    results["points"] = rows;
    results["mode_mismatch"] =
        ordered_json{{"m", fit.m}, {"uncertainty", fit.uncertainty}};
    results["csv"] = csv_name;
    return 0;
}

int run_mz_experiment(const RunConfig& config, ordered_json& results,
                      std::ostream& out) {
    const double phi =
        config.phi_rad ? *config.phi_rad
                       : solve_mz_phase(config.eta1, config.eta2,
                                        *config.target_reflectivity);
    const double simulated = mz_experiment(config.eta1, config.eta2, phi);
    const double closed =
        mz_effective_reflectivity(config.eta1, config.eta2, phi);
    const double path_m =
        path_length_from_phase(phi, config.center_wavelength_nm);

    results["phi_rad"] = phi;
    results["path_length_nm"] = path_m * 1e9;
    results["reflectivity_simulated"] = simulated;
    results["reflectivity_closed_form"] = closed;
    if (config.target_reflectivity) {
        results["target_reflectivity"] = *config.target_reflectivity;
    }

    out << "experiment: mz\n";
    out << row("  %-8s %-8s %-12s %-14s %-14s %-10s\n", "eta1", "eta2",
               "phi_rad", "eta_MZ(sim)", "eta_MZ(closed)", "path_nm");
    out << row("  %-8.4g %-8.4g %-12.8g %-14.10g %-14.10g %-10.6g\n",
               config.eta1, config.eta2, phi, simulated, closed,
               path_m * 1e9);
    return 0;
}

int run_fit_experiment(const RunConfig& config, ordered_json& provenance,
                       ordered_json& results, std::ostream& out) {
    const std::string csv_text = read_text_file(config.input_csv);
    provenance["input_csv"] = config.input_csv;
    provenance["input_sha1"] = sha1_git_blob(csv_text);
    const DipFitResult fit =
        fit_dip(parse_dip_csv(csv_text, config.input_csv));
    results["fit"] = fit_json(fit);
    print_fit(fit, out);
    return 0;
}

}  // namespace

int run_simulation(const RunOptions& options, std::ostream& out) {
    const std::string raw = read_text_file(options.config_path);
    RunConfig config = parse_run_config(raw, options.config_path);
    for (const auto& override_kv : options.overrides) {
        apply_override(config, override_kv);
    }
    if (options.seed) config.seed = *options.seed;
    finalize_run_config(config, options.config_path);

    const std::string out_dir = resolve_out_dir(options.out_dir);
    ordered_json document{{"schema_version", config.schema_version},
                          {"experiment", experiment_name(config.experiment)}};
    ordered_json provenance{{"config_path", options.config_path},
                            {"config_sha1", sha1_git_blob(raw)},
                            {"overrides", options.overrides}};
    ordered_json results;

    switch (config.experiment) {
        case ExperimentKind::hom_scan:
        case ExperimentKind::three_photon_scan:
            run_scan_experiment(config, out_dir, results, out);
            break;
        case ExperimentKind::visibility_sweep:
            run_sweep_experiment(config, out_dir, results, out);
            break;
        case ExperimentKind::mz:
            run_mz_experiment(config, results, out);
            break;
        case ExperimentKind::fit:
            run_fit_experiment(config, provenance, results, out);
            break;
    }

    document["provenance"] = provenance;
    document["config"] = config_echo(config);
    document["results"] = results;
    const std::string json_name = config.output_prefix + ".json";
    write_text_file(join_path(out_dir, json_name), document.dump(2) + "\n");
    out << "wrote " << join_path(out_dir, json_name) << "\n";
    return 0;
}

int run_fit_file(const std::string& csv_path,
                 const std::optional<std::string>& out_file,
                 const std::optional<std::string>& out_dir,
                 std::ostream& out) {
    const std::string csv_text = read_text_file(csv_path);
    const DipFitResult fit = fit_dip(parse_dip_csv(csv_text, csv_path));
    print_fit(fit, out);

    ordered_json document{
        {"schema_version", 1},
        {"experiment", "fit"},
        {"provenance",
         {{"input_csv", csv_path}, {"input_sha1", sha1_git_blob(csv_text)}}},
        {"results", {{"fit", fit_json(fit)}}}};
    std::string target;
    if (out_file) {
        target = *out_file;
    } else {
        const std::string stem =
            std::filesystem::path(csv_path).stem().string();
        target = join_path(resolve_out_dir(out_dir), stem + "_fit.json");
    }
    write_text_file(target, document.dump(2) + "\n");
    out << "wrote " << target << "\n";
    return 0;
}

}  // namespace psim
