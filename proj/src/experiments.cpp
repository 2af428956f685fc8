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

#include "psim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

#include "psim/circuit.hpp"
#include "psim/detection.hpp"

namespace psim {

namespace {

void check_overlap_parameter(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("intra-pair overlap " + std::to_string(q) +
                                    " outside [0, 1]");
    }
}

double template_sigma(const WavepacketTemplate& wavepacket) {
    return bandwidth_from_filter(wavepacket.center_wavelength_nm,
                                 wavepacket.filter_fwhm_nm);
}

void check_scan_config(const ScanConfig& config) {
    if (config.delays_s.empty()) {
        throw std::invalid_argument("delay list must be nonempty");
    }
    if (!(config.eta >= 0.0 && config.eta <= 1.0)) {
        throw std::invalid_argument("coupler reflectivity outside [0, 1]");
    }
    if (config.rate_pairs_per_s < 0.0 || config.integration_time_s < 0.0) {
        throw std::invalid_argument(
            "rate and integration time must be non-negative");
    }
    check_overlap_parameter(config.intra_pair_overlap);
    template_sigma(config.wavepacket);
}

// Evaluates the per-point probability (pre-validated inputs, so the loop
// body cannot throw), multiplies in the count model, then samples Poisson
// counts serially in delay order to keep the random stream deterministic.
ScanResult run_scan(const ScanConfig& config,
                    const std::function<double(double)>& point_probability) {
    const auto n = config.delays_s.size();
    std::vector<double> probabilities(n);
    if (config.exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::size_t i = 0; i < n; ++i) {
            probabilities[i] = point_probability(config.delays_s[i]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            probabilities[i] = point_probability(config.delays_s[i]);
        }
    }

    std::vector<double> expected(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double tilt =
            std::max(0.0, 1.0 + config.drift_per_s * config.delays_s[i]);
        expected[i] = probabilities[i] * config.rate_pairs_per_s *
                      config.integration_time_s * tilt;
    }
    const std::vector<long long> sampled =
        sample_counts(expected, config.rng_seed);

    ScanResult result;
    result.config = config;
    result.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.points[i] = {config.delays_s[i], probabilities[i], expected[i],
                            sampled[i]};
    }
    return result;
}

double curve_visibility(const ScanResult& result, double asymptote) {
    if (result.points.empty()) {
        throw std::invalid_argument("scan has no points");
    }
    if (asymptote <= 0.0) {
        throw std::domain_error(
            "visibility undefined for a zero large-delay probability");
    }
    double minimum = result.points.front().expected_probability;
    for (const auto& point : result.points) {
        minimum = std::min(minimum, point.expected_probability);
    }
    return (asymptote - minimum) / asymptote;
}

}  // namespace

double hom_asymptote(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("coupler reflectivity outside [0, 1]");
    }
    return eta * eta + (1.0 - eta) * (1.0 - eta);
}

double three_photon_asymptote(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("coupler reflectivity outside [0, 1]");
    }
    return eta * eta * eta + 2.0 * eta * (1.0 - eta) * (1.0 - eta);
}

double hom_point_probability(double eta, const WavepacketTemplate& wavepacket,
                             double tau_s, double intra_pair_overlap) {
    check_overlap_parameter(intra_pair_overlap);
    const double sigma = template_sigma(wavepacket);
    const Wavepacket in_a{wavepacket.center_wavelength_nm, sigma, 0.0};
    const Wavepacket in_b{wavepacket.center_wavelength_nm, sigma, tau_s};
    // Mode mismatch scales the cross-waveguide overlap; the Gram matrix
    // stays PSD because the magnitude can only shrink.
    const complex x = intra_pair_overlap * overlap(in_a, in_b);
    Eigen::MatrixXcd gram(2, 2);
    gram << complex{1.0, 0.0}, x, std::conj(x), complex{1.0, 0.0};
    // Conjugated Cholesky rows are the expansion coefficients over the
    // orthonormal internal basis (same convention as build_input_state).
    const Eigen::MatrixXcd c = orthonormal_decomposition(gram).conjugate();
    FockState state = build_input_state_from_coefficients({0, 1}, c, 2);
    state = apply_two_mode_unitary(state, coupler_unitary(eta), 0, 1);
    return pattern_probability(state, {1, 1});
}

double three_photon_point_probability(double eta,
                                      const WavepacketTemplate& wavepacket,
                                      double tau_s, double intra_pair_overlap) {
    check_overlap_parameter(intra_pair_overlap);
    const double sigma = template_sigma(wavepacket);
    const double lambda = wavepacket.center_wavelength_nm;
    if (intra_pair_overlap == 0.0) {
        // Infinite-split limit: the pair and the single photon are all
        // mutually orthogonal, so the curve is flat at the classical value.
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Identity(3, 3);
        FockState state = build_input_state_from_coefficients({0, 0, 1}, c, 2);
        state = apply_two_mode_unitary(state, coupler_unitary(eta), 0, 1);
        return pattern_probability(state, {2, 1});
    }
    // A pair split by delta has mutual overlap e^{-sigma^2 delta^2 / 2};
    // invert that to realize the requested overlap with real wavepackets.
    const double delta =
        std::sqrt(-2.0 * std::log(intra_pair_overlap)) / sigma;
    const std::vector<PhotonInput> inputs = {
        {0, Wavepacket{lambda, sigma, -0.5 * delta}, 1},
        {0, Wavepacket{lambda, sigma, 0.5 * delta}, 1},
        {1, Wavepacket{lambda, sigma, tau_s}, 1}};
    FockState state = build_input_state(inputs, 2);
    state = apply_two_mode_unitary(state, coupler_unitary(eta), 0, 1);
    return pattern_probability(state, {2, 1});
}

ScanResult hom_scan(const ScanConfig& config) {
    check_scan_config(config);
    return run_scan(config, [&config](double tau) {
        return hom_point_probability(config.eta, config.wavepacket, tau,
                                     config.intra_pair_overlap);
    });
}

ScanResult three_photon_scan(const ScanConfig& config) {
    check_scan_config(config);
    return run_scan(config, [&config](double tau) {
        return three_photon_point_probability(config.eta, config.wavepacket,
                                              tau, config.intra_pair_overlap);
    });
}

double hom_visibility(const ScanResult& result) {
    return curve_visibility(result, hom_asymptote(result.config.eta));
}

double three_photon_visibility(const ScanResult& result) {
    return curve_visibility(result,
                            three_photon_asymptote(result.config.eta));
}

std::vector<SweepPoint> visibility_sweep(const std::vector<double>& etas,
                                         const WavepacketTemplate& wavepacket,
                                         double intra_pair_overlap) {
    check_overlap_parameter(intra_pair_overlap);
    const double sigma = template_sigma(wavepacket);
    // Dense symmetric grid out to 4 coherence times; wide enough that the
    // minimum sits strictly inside the window for any overlap.
    constexpr int kHalfPoints = 40;
    std::vector<double> delays;
    for (int k = -kHalfPoints; k <= kHalfPoints; ++k) {
        delays.push_back(4.0 * k / (kHalfPoints * sigma));
    }
    std::vector<SweepPoint> sweep;
    sweep.reserve(etas.size());
    for (double eta : etas) {
        ScanConfig config;
        config.delays_s = delays;
        config.eta = eta;
        config.wavepacket = wavepacket;
        config.rate_pairs_per_s = 0.0;
        config.integration_time_s = 0.0;
        config.intra_pair_overlap = intra_pair_overlap;
        const ScanResult result = hom_scan(config);
        sweep.push_back({eta, hom_visibility(result)});
    }
    return sweep;
}

std::vector<long long> sample_counts(const std::vector<double>& expected,
                                     std::uint64_t seed) {
    for (double mean : expected) {
        if (!(mean >= 0.0)) {
            throw std::invalid_argument("expected counts must be >= 0");
        }
    }
    std::mt19937_64 rng(seed);
    std::vector<long long> counts;
    counts.reserve(expected.size());
    for (double mean : expected) {
        if (mean == 0.0) {
            counts.push_back(0);
            continue;
        }
        std::poisson_distribution<long long> draw(mean);
        counts.push_back(draw(rng));
    }
    return counts;
}

double mz_experiment(double eta1, double eta2, double phi) {
    FockState state = vacuum(2, 1);
    state = apply_creation(state, {0, 0});
    state = apply_circuit(state, mz_circuit(eta1, eta2, phi));
    return pattern_probability(state, {1, 0});
}

}  // namespace psim
