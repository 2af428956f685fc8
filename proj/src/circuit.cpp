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

#include "psim/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace psim {

namespace {

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("coupler reflectivity " +
                                    std::to_string(eta) +
                                    " outside [0, 1]");
    }
}

}  // namespace

Eigen::Matrix2cd coupler_unitary(double eta) {
    check_eta(eta);
    const double r = std::sqrt(eta);
    const double t = std::sqrt(1.0 - eta);
    Eigen::Matrix2cd u;
    u << r, t, t, -r;
    return u;
}

FockState apply_circuit(const FockState& state, const Circuit& circuit) {
    if (state.n_spatial() != circuit.n_spatial) {
        throw std::invalid_argument(
            "state width " + std::to_string(state.n_spatial()) +
            " does not match circuit width " +
            std::to_string(circuit.n_spatial));
    }
    FockState current = state;
    for (const auto& element : circuit.elements) {
        if (const auto* coupler = std::get_if<Coupler>(&element)) {
            if (coupler->mode_a < 0 || coupler->mode_a >= circuit.n_spatial ||
                coupler->mode_b < 0 || coupler->mode_b >= circuit.n_spatial ||
                coupler->mode_a == coupler->mode_b) {
                throw std::invalid_argument("coupler modes out of range");
            }
            current = apply_two_mode_unitary(current,
                                             coupler_unitary(coupler->eta),
                                             coupler->mode_a, coupler->mode_b);
        } else {
            const auto& shift = std::get<PhaseShift>(element);
            current = apply_phase_shift(current, shift.mode, shift.phi);
        }
    }
    return current;
}

Circuit mz_circuit(double eta1, double eta2, double phi) {
    check_eta(eta1);
    check_eta(eta2);
    Circuit circuit;
    circuit.n_spatial = 2;
    circuit.elements = {Coupler{0, 1, eta1}, PhaseShift{1, phi},
                        Coupler{0, 1, eta2}};
    return circuit;
}

double mz_effective_reflectivity(double eta1, double eta2, double phi) {
    check_eta(eta1);
    check_eta(eta2);
    const complex bar = std::sqrt(eta1 * eta2) +
                        std::exp(complex{0.0, phi}) *
                            std::sqrt((1.0 - eta1) * (1.0 - eta2));
    return std::norm(bar);
}

double solve_mz_phase(double eta1, double eta2, double target) {
    check_eta(eta1);
    check_eta(eta2);
    const double rr = eta1 * eta2;
    const double tt = (1.0 - eta1) * (1.0 - eta2);
    const double cross = 2.0 * std::sqrt(rr * tt);
    if (cross == 0.0) {
        if (std::abs(target - (rr + tt)) < 1e-12) return 0.0;
        throw std::domain_error(
            "reflectivity is phase-independent at these couplers");
    }
    // target = rr + tt + cross * cos(phi)
    const double c = (target - rr - tt) / cross;
    if (c < -1.0 - 1e-12 || c > 1.0 + 1e-12) {
        throw std::domain_error(
            "target reflectivity " + std::to_string(target) +
            " is unattainable for the given couplers");
    }
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double path_length_from_phase(double phi, double wavelength_nm) {
    if (wavelength_nm <= 0.0) {
        throw std::invalid_argument("wavelength must be positive");
    }
    return phi / (2.0 * std::numbers::pi) * wavelength_nm * 1e-9;
}

}  // namespace psim
