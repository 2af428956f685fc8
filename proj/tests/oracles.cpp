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

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <variant>

namespace psim::oracles {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

Eigen::MatrixXcd minor_matrix(const Eigen::MatrixXcd& m, Eigen::Index col) {
    Eigen::MatrixXcd sub(m.rows() - 1, m.cols() - 1);
    for (Eigen::Index r = 1; r < m.rows(); ++r) {
        Eigen::Index cc = 0;
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c == col) continue;
            sub(r - 1, cc++) = m(r, c);
        }
    }
    return sub;
}

void collect_occupations(int remaining, int mode, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
    if (mode + 1 == static_cast<int>(current.size())) {
        current[static_cast<std::size_t>(mode)] = remaining;
        out.push_back(current);
        return;
    }
    for (int n = 0; n <= remaining; ++n) {
        current[static_cast<std::size_t>(mode)] = n;
        collect_occupations(remaining - n, mode + 1, current, out);
    }
}

}  // namespace

complex permanent(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("permanent needs a square matrix");
    }
    if (m.rows() == 0) return complex{1.0, 0.0};
    if (m.rows() == 1) return m(0, 0);
    complex sum{0.0, 0.0};
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        sum += m(0, c) * permanent(minor_matrix(m, c));
    }
    return sum;
}

Eigen::MatrixXcd circuit_flat_unitary(const Circuit& circuit, int n_internal) {
    const Eigen::Index n_flat =
        static_cast<Eigen::Index>(circuit.n_spatial) * n_internal;
    const auto flat = [n_internal](int spatial, int internal) {
        return static_cast<Eigen::Index>(spatial) * n_internal + internal;
    };
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(n_flat, n_flat);
    for (const auto& element : circuit.elements) {
        Eigen::MatrixXcd step = Eigen::MatrixXcd::Identity(n_flat, n_flat);
        if (const auto* coupler = std::get_if<Coupler>(&element)) {
            const Eigen::Matrix2cd u = coupler_unitary(coupler->eta);
            for (int s = 0; s < n_internal; ++s) {
                const Eigen::Index fi = flat(coupler->mode_a, s);
                const Eigen::Index fj = flat(coupler->mode_b, s);
                step(fi, fi) = u(0, 0);
                step(fi, fj) = u(0, 1);
                step(fj, fi) = u(1, 0);
                step(fj, fj) = u(1, 1);
            }
        } else {
            const auto& shift = std::get<PhaseShift>(element);
            for (int s = 0; s < n_internal; ++s) {
                step(flat(shift.mode, s), flat(shift.mode, s)) =
                    std::exp(complex{0.0, shift.phi});
            }
        }
        // Sequential application composes in reverse on creation operators.
        total = step * total;
    }
    return total;
}

complex transition_amplitude(const Eigen::MatrixXcd& u,
                             const std::vector<int>& in_occ,
                             const std::vector<int>& out_occ) {
    const int photons = std::accumulate(in_occ.begin(), in_occ.end(), 0);
    if (photons != std::accumulate(out_occ.begin(), out_occ.end(), 0)) {
        return complex{0.0, 0.0};
    }
    Eigen::MatrixXcd sub(photons, photons);
    Eigen::Index row = 0;
    for (std::size_t l = 0; l < out_occ.size(); ++l) {
        for (int r = 0; r < out_occ[l]; ++r) {
            Eigen::Index col = 0;
            for (std::size_t k = 0; k < in_occ.size(); ++k) {
                for (int c = 0; c < in_occ[k]; ++c) {
                    sub(row, col++) =
                        u(static_cast<Eigen::Index>(l),
                          static_cast<Eigen::Index>(k));
                }
            }
            ++row;
        }
    }
    double norm = 1.0;
    for (int n : in_occ) norm *= factorial(n);
    for (int n : out_occ) norm *= factorial(n);
    return permanent(sub) / std::sqrt(norm);
}

std::map<std::vector<int>, complex> apply_dense(
    const Eigen::MatrixXcd& u, const std::vector<int>& in_occ) {
    const int photons = std::accumulate(in_occ.begin(), in_occ.end(), 0);
    std::map<std::vector<int>, complex> output;
    for (const auto& out_occ :
         occupation_lists(static_cast<int>(in_occ.size()), photons)) {
        output[out_occ] = transition_amplitude(u, in_occ, out_occ);
    }
    return output;
}

std::vector<std::vector<int>> occupation_lists(int n_modes, int photons) {
    std::vector<std::vector<int>> lists;
    std::vector<int> scratch(static_cast<std::size_t>(n_modes), 0);
    collect_occupations(photons, 0, scratch, lists);
    return lists;
}

double routing_probability(const Eigen::MatrixXcd& spatial_unitary,
                           const std::vector<int>& in_spatial,
                           const std::vector<int>& pattern) {
    const int n_out = static_cast<int>(spatial_unitary.rows());
    const std::size_t photons = in_spatial.size();
    std::vector<int> assignment(photons, 0);
    double total = 0.0;
    while (true) {
        std::vector<int> counts(static_cast<std::size_t>(n_out), 0);
        double weight = 1.0;
        for (std::size_t p = 0; p < photons; ++p) {
            counts[static_cast<std::size_t>(assignment[p])] += 1;
            weight *= std::norm(spatial_unitary(assignment[p], in_spatial[p]));
        }
        if (counts == pattern) total += weight;

        std::size_t digit = 0;
        while (digit < photons && ++assignment[digit] == n_out) {
            assignment[digit++] = 0;
        }
        if (digit == photons) break;
    }
    return total;
}

complex quadrature_overlap(const Wavepacket& w1, const Wavepacket& w2) {
    const double omega1 = center_angular_frequency(w1);
    const double omega2 = center_angular_frequency(w2);
    const double s1 = w1.bandwidth_sigma;
    const double s2 = w2.bandwidth_sigma;
    const double lo =
        std::min(omega1 - 12.0 * s1, omega2 - 12.0 * s2);
    const double hi =
        std::max(omega1 + 12.0 * s1, omega2 + 12.0 * s2);
    const int intervals = 40000;
    const double h = (hi - lo) / intervals;
    const auto integrand = [&](double omega) {
        const double a1 = std::pow(2.0 * std::numbers::pi * s1 * s1, -0.25) *
                          std::exp(-(omega - omega1) * (omega - omega1) /
                                   (4.0 * s1 * s1));
        const double a2 = std::pow(2.0 * std::numbers::pi * s2 * s2, -0.25) *
                          std::exp(-(omega - omega2) * (omega - omega2) /
                                   (4.0 * s2 * s2));
        return a1 * a2 * std::exp(complex{0.0, omega * (w2.delay_s - w1.delay_s)});
    };
    complex sum = integrand(lo) + integrand(hi);
    for (int k = 1; k < intervals; ++k) {
        sum += integrand(lo + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * (h / 3.0);
}

}  // namespace psim::oracles
