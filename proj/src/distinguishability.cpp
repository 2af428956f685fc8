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

#include "psim/distinguishability.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "psim/errors.hpp"

namespace psim {

namespace {

void check_wavepacket(const Wavepacket& w) {
    if (!(w.center_wavelength_nm > 0.0)) {
        throw std::invalid_argument("wavepacket center wavelength must be positive");
    }
    if (!(w.bandwidth_sigma > 0.0)) {
        throw std::invalid_argument("wavepacket bandwidth sigma must be positive");
    }
    if (!std::isfinite(w.delay_s)) {
        throw std::invalid_argument("wavepacket delay must be finite");
    }
}

// Residual diagonal entries below this are clamped to zero (wavepacket lies
// in the span of its predecessors); entries below the negative of it mean a
// non-PSD Gram matrix.
constexpr double kGramTol = 1e-10;

// Applies sum_m coeffs(m) * a^dag(spatial, m) to every term at once.
FockState apply_composite_creation(const FockState& state, int spatial,
                                   const Eigen::RowVectorXcd& coeffs) {
    FockState::TermMap out;
    for (const auto& [occ, amp] : state.terms()) {
        if (occ.total() + 1 > state.photon_cap()) {
            throw capacity_error("input photons exceed the photon cap of " +
                                 std::to_string(state.photon_cap()));
        }
        for (int m = 0; m < coeffs.size(); ++m) {
            if (coeffs(m) == complex{0.0, 0.0}) continue;
            OccupationVector raised = occ;
            const std::size_t flat = state.flat_index({spatial, m});
            const int n = raised.counts[flat];
            raised.counts[flat] = static_cast<std::uint8_t>(n + 1);
            out[raised] +=
                amp * coeffs(m) * std::sqrt(static_cast<double>(n + 1));
        }
    }
    return FockState::from_terms(state.n_spatial(), state.n_internal(),
                                 state.photon_cap(), std::move(out));
}

}  // namespace

double center_angular_frequency(const Wavepacket& w) {
    check_wavepacket(w);
    return 2.0 * std::numbers::pi * kSpeedOfLight /
           (w.center_wavelength_nm * 1e-9);
}

complex overlap(const Wavepacket& w1, const Wavepacket& w2) {
    check_wavepacket(w1);
    check_wavepacket(w2);
    const double s1 = w1.bandwidth_sigma;
    const double s2 = w2.bandwidth_sigma;
    const double ssum = s1 * s1 + s2 * s2;
    const double omega1 = center_angular_frequency(w1);
    const double omega2 = center_angular_frequency(w2);
    const double domega = omega1 - omega2;
    const double dtau = w2.delay_s - w1.delay_s;
    // Gaussian-times-Gaussian spectral integral, written so the two center
    // quadratics cancel analytically instead of numerically (they are each
    // of order (omega/sigma)^2 ~ 1e5 while the result is of order 1).
    const double magnitude =
        std::sqrt(2.0 * s1 * s2 / ssum) *
        std::exp(-domega * domega / (4.0 * ssum) -
                 dtau * dtau * s1 * s1 * s2 * s2 / ssum);
    const double omega_w = (omega1 * s2 * s2 + omega2 * s1 * s1) / ssum;
    return magnitude * std::exp(complex{0.0, omega_w * dtau});
}

double bandwidth_from_filter(double center_wavelength_nm, double fwhm_nm) {
    if (!(center_wavelength_nm > 0.0) || !(fwhm_nm > 0.0)) {
        throw std::invalid_argument(
            "filter wavelengths must be positive");
    }
    const double lambda = center_wavelength_nm * 1e-9;
    const double fwhm_omega =
        2.0 * std::numbers::pi * kSpeedOfLight * (fwhm_nm * 1e-9) /
        (lambda * lambda);
    return fwhm_omega / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

Eigen::MatrixXcd gram_matrix(const std::vector<Wavepacket>& wavepackets) {
    const auto n = static_cast<Eigen::Index>(wavepackets.size());
    Eigen::MatrixXcd gram(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        gram(k, k) = complex{1.0, 0.0};
        for (Eigen::Index l = 0; l < k; ++l) {
            const complex x = overlap(wavepackets[static_cast<std::size_t>(k)],
                                      wavepackets[static_cast<std::size_t>(l)]);
            gram(k, l) = x;
            gram(l, k) = std::conj(x);
        }
    }
    return gram;
}

Eigen::MatrixXcd orthonormal_decomposition(const Eigen::MatrixXcd& gram) {
    const Eigen::Index n = gram.rows();
    if (n == 0 || gram.cols() != n) {
        throw std::invalid_argument("Gram matrix must be square and nonempty");
    }
    // Semidefinite Cholesky: zero residual directions are allowed so that
    // duplicated wavepackets reproduce earlier rows instead of failing.
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index m = 0; m < k; ++m) {
            complex num = gram(k, m);
            for (Eigen::Index l = 0; l < m; ++l) {
                num -= c(k, l) * std::conj(c(m, l));
            }
            const double pivot = c(m, m).real();
            if (pivot > 0.0) {
                c(k, m) = num / pivot;
            } else if (std::abs(num) > 1e-8) {
                throw degeneracy_error(
                    "Gram matrix is numerically inconsistent");
            }
        }
        double d = gram(k, k).real();
        for (Eigen::Index l = 0; l < k; ++l) d -= std::norm(c(k, l));
        if (d < -kGramTol) {
            throw degeneracy_error(
                "Gram matrix is not positive semidefinite (residual " +
                std::to_string(d) + ")");
        }
        c(k, k) = std::sqrt(std::max(d, 0.0));
    }
    return c;
}

Eigen::MatrixXcd orthonormal_decomposition(
    const std::vector<Wavepacket>& wavepackets) {
    if (wavepackets.empty()) {
        throw std::invalid_argument("wavepacket list must be nonempty");
    }
    return orthonormal_decomposition(gram_matrix(wavepackets));
}

FockState build_input_state(const std::vector<PhotonInput>& inputs,
                            int n_spatial, int photon_cap) {
    if (inputs.empty()) {
        throw std::invalid_argument("photon input list must be nonempty");
    }
    int total = 0;
    for (const auto& input : inputs) {
        if (input.spatial_mode < 0 || input.spatial_mode >= n_spatial) {
            throw std::invalid_argument("photon spatial mode outside circuit");
        }
        if (input.multiplicity < 1) {
            throw std::invalid_argument("photon multiplicity must be >= 1");
        }
        check_wavepacket(input.wavepacket);
        total += input.multiplicity;
    }
    if (total > photon_cap) {
        throw capacity_error("input photons (" + std::to_string(total) +
                             ") exceed the photon cap of " +
                             std::to_string(photon_cap));
    }

    // Group photons into distinct wavepacket slots; an input joins an
    // existing slot when its overlap with the slot packet is 1 up to
    // kOverlapDegeneracyTol.
    std::vector<Wavepacket> slots;
    std::vector<std::size_t> slot_of(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        std::size_t found = slots.size();
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (std::abs(1.0 - overlap(slots[s], inputs[i].wavepacket)) <
                kOverlapDegeneracyTol) {
                found = s;
                break;
            }
        }
        if (found == slots.size()) slots.push_back(inputs[i].wavepacket);
        slot_of[i] = found;
    }

    const Eigen::MatrixXcd c = orthonormal_decomposition(slots);
    std::vector<int> spatial_modes;
    Eigen::MatrixXcd coefficients(total, static_cast<Eigen::Index>(slots.size()));
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (int p = 0; p < inputs[i].multiplicity; ++p) {
            spatial_modes.push_back(inputs[i].spatial_mode);
            // Row k of the Cholesky factor satisfies C C^dag = G; the
            // expansion coefficients <e_m|w_k> are its conjugates, which is
            // what makes the built photons reproduce G as their overlaps.
            coefficients.row(row++) =
                c.row(static_cast<Eigen::Index>(slot_of[i])).conjugate();
        }
    }
    return build_input_state_from_coefficients(spatial_modes, coefficients,
                                               n_spatial, photon_cap);
}

FockState build_input_state_from_coefficients(
    const std::vector<int>& spatial_modes, const Eigen::MatrixXcd& coefficients,
    int n_spatial, int photon_cap) {
    const auto n_photons = static_cast<Eigen::Index>(spatial_modes.size());
    if (n_photons == 0 || coefficients.rows() != n_photons) {
        throw std::invalid_argument(
            "one coefficient row per photon is required");
    }
    if (static_cast<int>(spatial_modes.size()) > photon_cap) {
        throw capacity_error("input photons (" +
                             std::to_string(spatial_modes.size()) +
                             ") exceed the photon cap of " +
                             std::to_string(photon_cap));
    }
    for (Eigen::Index k = 0; k < n_photons; ++k) {
        if (spatial_modes[static_cast<std::size_t>(k)] < 0 ||
            spatial_modes[static_cast<std::size_t>(k)] >= n_spatial) {
            throw std::invalid_argument("photon spatial mode outside circuit");
        }
        if (std::abs(coefficients.row(k).norm() - 1.0) > 1e-10) {
            throw std::invalid_argument(
                "internal expansion rows must have unit norm");
        }
    }
    FockState state = vacuum(n_spatial, static_cast<int>(coefficients.cols()),
                             photon_cap);
    for (Eigen::Index k = 0; k < n_photons; ++k) {
        state = apply_composite_creation(
            state, spatial_modes[static_cast<std::size_t>(k)],
            coefficients.row(k));
    }
    return state.normalized();
}

}  // namespace psim
