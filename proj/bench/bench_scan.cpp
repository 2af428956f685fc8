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

// Compares the serial reference scan evaluation against the OpenMP path on
// identical configurations and checks that the curves agree bitwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "psim/distinguishability.hpp"
#include "psim/experiments.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

psim::ScanConfig make_config(std::size_t n_points, psim::Exec exec,
                             bool three) {
    psim::ScanConfig config;
    config.eta = three ? 2.0 / 3.0 : 0.5128;
    config.wavepacket = {804.0, 2.0};
    config.intra_pair_overlap = three ? 0.95 : 1.0;
    config.exec = exec;
    const double sigma = psim::bandwidth_from_filter(804.0, 2.0);
    config.delays_s.reserve(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double x =
            -4.0 + 8.0 * static_cast<double>(k) /
                       static_cast<double>(n_points - 1);
        config.delays_s.push_back(x / sigma);
    }
    return config;
}

double run_case(bool three, psim::Exec exec, std::size_t n_points,
                psim::ScanResult& result) {
    const psim::ScanConfig config = make_config(n_points, exec, three);
    const auto start = clock_type::now();
    result = three ? psim::three_photon_scan(config) : psim::hom_scan(config);
    const auto stop = clock_type::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

bool identical(const psim::ScanResult& a, const psim::ScanResult& b) {
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        if (a.points[i].expected_probability !=
            b.points[i].expected_probability) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel runs fall back to serial\n");
#endif
    std::printf("%-22s %10s %12s %12s %9s %6s\n", "scan", "points",
                "serial[ms]", "parallel[ms]", "speedup", "equal");

    const std::size_t sizes[] = {2000, 8000};
    for (bool three : {false, true}) {
        for (std::size_t n : sizes) {
            const std::size_t points = three ? n / 4 : n;
            psim::ScanResult serial_result, parallel_result;
            const double t_serial =
                run_case(three, psim::Exec::serial, points, serial_result);
            const double t_parallel =
                run_case(three, psim::Exec::parallel, points, parallel_result);
            std::printf("%-22s %10zu %12.2f %12.2f %9.2f %6s\n",
                        three ? "three-photon-scan" : "hom-scan", points,
                        t_serial, t_parallel, t_serial / t_parallel,
                        identical(serial_result, parallel_result) ? "yes"
                                                                  : "NO");
        }
    }
    return 0;
}
