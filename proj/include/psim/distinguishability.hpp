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

#include <vector>

#include <Eigen/Core>

#include "psim/fock.hpp"

namespace psim {

/// Vacuum speed of light in m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

/// Wavepackets whose mutual overlap is within this of 1 are treated as the
/// same packet when photons are grouped into internal slots.
inline constexpr double kOverlapDegeneracyTol = 1e-12;

/**
 * @brief Gaussian single-photon spectral amplitude.
 *
 * bandwidth_sigma is the standard deviation of the angular-frequency
 * intensity spectrum; delay_s shifts the arrival time and is the scan axis
 * of interference experiments.
 */
struct Wavepacket {
    double center_wavelength_nm = 804.0;
    double bandwidth_sigma = 1e12;
    double delay_s = 0.0;
};

/// One or more photons sharing a wavepacket, injected into a spatial mode.
struct PhotonInput {
    int spatial_mode = 0;
    Wavepacket wavepacket;
    int multiplicity = 1;
};

/// Center angular frequency 2*pi*c / lambda in rad/s.
double center_angular_frequency(const Wavepacket& w);

/**
 * @brief Spectral-amplitude inner product <w1|w2>; magnitude at most 1.
 *
 * For equal sigmas this reduces to e^{i w_bar dtau} e^{-sigma^2 dtau^2 / 2}
 * with w_bar the mean center angular frequency and dtau the delay
 * difference. Evaluated in a cancellation-free closed form.
 */
complex overlap(const Wavepacket& w1, const Wavepacket& w2);

/**
 * @brief Angular-frequency sigma of a Gaussian filter given in wavelength.
 *
 * FWHM conversion: dOmega = 2*pi*c*fwhm_nm / lambda^2, then
 * sigma = dOmega / (2*sqrt(2*ln 2)). Throws std::invalid_argument for
 * nonpositive inputs.
 */
double bandwidth_from_filter(double center_wavelength_nm, double fwhm_nm);

/// Hermitian PSD matrix of pairwise overlaps, G(k,l) = overlap(w_k, w_l).
Eigen::MatrixXcd gram_matrix(const std::vector<Wavepacket>& wavepackets);

/**
 * @brief Expansion of each wavepacket over an orthonormal internal basis.
 *
 * Row k expands wavepacket k; the basis is built by Gram-Schmidt in list
 * order, so the result is the lower-triangular Cholesky-like factor with
 * C * C^dagger equal to the Gram matrix. Duplicated wavepackets yield
 * duplicated rows. Throws degeneracy_error when the Gram matrix is not
 * numerically positive semidefinite.
 */
Eigen::MatrixXcd orthonormal_decomposition(const Eigen::MatrixXcd& gram);

/// Convenience overload building the Gram matrix first.
Eigen::MatrixXcd orthonormal_decomposition(
    const std::vector<Wavepacket>& wavepackets);

/**
 * @brief Multi-photon input state with partial distinguishability.
 *
 * Distinct wavepackets (grouped by kOverlapDegeneracyTol) define the
 * internal-mode grid; each photon enters via the creation operator
 * sum_m conj(C(k,m)) a^dag(spatial, m), the expansion of its wavepacket
 * over the orthonormal basis, so the built photons reproduce the Gram
 * matrix as their mutual overlaps. The result is normalized. Throws
 * capacity_error when the photon cap is exceeded.
 */
FockState build_input_state(const std::vector<PhotonInput>& inputs,
                            int n_spatial, int photon_cap = kDefaultPhotonCap);

/**
 * @brief Input state from explicit internal-mode expansions.
 *
 * Row k of coefficients is the internal expansion of photon k, injected
 * into spatial_modes[k]; rows must have unit norm. Used when the desired
 * overlap structure is given directly rather than via wavepackets.
 */
FockState build_input_state_from_coefficients(
    const std::vector<int>& spatial_modes, const Eigen::MatrixXcd& coefficients,
    int n_spatial, int photon_cap = kDefaultPhotonCap);

}  // namespace psim
