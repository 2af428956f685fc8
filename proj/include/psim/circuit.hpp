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

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "psim/fock.hpp"

namespace psim {

/**
 * @brief Two-mode directional coupler with reflectivity eta in [0,1].
 *
 * eta is the probability a photon stays in its input-side waveguide; the
 * cross-coupling ratio is 1 - eta.
 */
struct Coupler {
    int mode_a = 0;
    int mode_b = 1;
    double eta = 0.5;
};

/// Phase shifter on one spatial mode; multiplies each term by e^{i n phi},
/// n = photon count in that mode.
struct PhaseShift {
    int mode = 0;
    double phi = 0.0;
};

using CircuitElement = std::variant<Coupler, PhaseShift>;

/// Ordered list of couplers and phase shifters over n_spatial waveguides.
struct Circuit {
    int n_spatial = 2;
    std::vector<CircuitElement> elements;
};

/**
 * @brief Coupler matrix [[sqrt(eta), sqrt(1-eta)], [sqrt(1-eta), -sqrt(eta)]].
 *
 * Real and symmetric; the sign convention puts the pi phase on the
 * reflected lower arm. Throws std::invalid_argument for eta outside [0,1].
 */
Eigen::Matrix2cd coupler_unitary(double eta);

/// Applies the elements in list order. Throws std::invalid_argument when the
/// state width differs from the circuit width or an element index is out of
/// range.
FockState apply_circuit(const FockState& state, const Circuit& circuit);

/// Two-waveguide Mach-Zehnder: coupler(eta1), phase phi on arm 1,
/// coupler(eta2).
Circuit mz_circuit(double eta1, double eta2, double phi);

/**
 * @brief Single-photon bar-port probability of a Mach-Zehnder.
 *
 * Closed form |sqrt(eta1 eta2) + e^{i phi} sqrt((1-eta1)(1-eta2))|^2; agrees
 * with simulating one photon through mz_circuit.
 */
double mz_effective_reflectivity(double eta1, double eta2, double phi);

/**
 * @brief Phase in [0, pi] with mz_effective_reflectivity equal to target.
 *
 * Inverts the cosine term of the closed form. Throws std::domain_error when
 * the target lies outside the reflectivity range attainable at (eta1, eta2).
 */
double solve_mz_phase(double eta1, double eta2, double target);

/// Optical path difference (meters) producing phase phi at the given vacuum
/// wavelength.
double path_length_from_phase(double phi, double wavelength_nm);

}  // namespace psim
