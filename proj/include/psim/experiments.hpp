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
#include <vector>

#include "psim/distinguishability.hpp"

namespace psim {

/// Scan evaluation strategy; results are identical, parallel uses OpenMP
/// across delay points.
enum class Exec { serial, parallel };

/// Source description shared by every photon of a scan: center wavelength
/// and the Gaussian bandpass filter that sets the coherence time.
struct WavepacketTemplate {
    double center_wavelength_nm = 804.0;
    double filter_fwhm_nm = 2.0;
};

/**
 * @brief Parameters of a delay scan.
 *
 * rate_pairs_per_s is the generation rate of the full n-photon input (pairs
 * for two-photon scans, triples for three-photon scans). drift_per_s tilts
 * the effective rate linearly in delay, rate * (1 + drift * tau), to mimic
 * slow source drift; 0 disables it. intra_pair_overlap models mode
 * mismatch: for two-photon scans it multiplies the cross-waveguide overlap,
 * for three-photon scans it is the mutual overlap of the nominally
 * degenerate input pair.
 */
struct ScanConfig {
    std::vector<double> delays_s;
    double eta = 0.5;
    WavepacketTemplate wavepacket;
    double rate_pairs_per_s = 200.0;
    double integration_time_s = 20.0;
    std::uint64_t rng_seed = 1;
    double intra_pair_overlap = 1.0;
    double drift_per_s = 0.0;
    Exec exec = Exec::parallel;
};

/// One delay point: exact probability, expected counts, and a Poisson draw.
struct ScanPoint {
    double tau_s = 0.0;
    double expected_probability = 0.0;
    double expected_counts = 0.0;
    long long sampled_counts = 0;
};

struct ScanResult {
    ScanConfig config;
    std::vector<ScanPoint> points;
};

struct SweepPoint {
    double eta = 0.0;
    double visibility = 0.0;
};

/// Large-delay coincidence probability of the two-photon scan,
/// eta^2 + (1-eta)^2.
double hom_asymptote(double eta);

/// Large-delay (2,1)-pattern probability of the three-photon scan,
/// eta^3 + 2 eta (1-eta)^2; independent of the intra-pair overlap.
double three_photon_asymptote(double eta);

/// Coincidence probability for |11> input at one delay, via full simulation.
double hom_point_probability(double eta, const WavepacketTemplate& wavepacket,
                             double tau_s, double intra_pair_overlap = 1.0);

/// (2,1)-pattern probability for |21> input at one delay, via full
/// simulation; the input pair is split symmetrically in time to realize the
/// requested intra-pair overlap.
double three_photon_point_probability(double eta,
                                      const WavepacketTemplate& wavepacket,
                                      double tau_s,
                                      double intra_pair_overlap = 1.0);

/// Two-photon coincidence dip versus delay, with Poisson-sampled counts.
ScanResult hom_scan(const ScanConfig& config);

/// Three-photon generalized dip versus delay of the single photon, with
/// Poisson-sampled counts.
ScanResult three_photon_scan(const ScanConfig& config);

/// (asymptote - curve minimum) / asymptote from the expected-probability
/// curve; the asymptote is analytic, not taken from the scan edge.
double hom_visibility(const ScanResult& result);
double three_photon_visibility(const ScanResult& result);

/**
 * @brief Dip visibility for each coupler reflectivity.
 *
 * Runs a dense two-photon scan per eta and extracts V = (max-min)/max.
 * intra_pair_overlap degrades each dip exactly as in hom_scan; 1 gives the
 * ideal curve.
 */
std::vector<SweepPoint> visibility_sweep(const std::vector<double>& etas,
                                         const WavepacketTemplate& wavepacket,
                                         double intra_pair_overlap = 1.0);

/// Independent Poisson draws with the given means, consumed in list order;
/// deterministic for a fixed seed.
std::vector<long long> sample_counts(const std::vector<double>& expected,
                                     std::uint64_t seed);

/// Single-photon bar-port probability of a Mach-Zehnder via full simulation.
double mz_experiment(double eta1, double eta2, double phi);

}  // namespace psim
