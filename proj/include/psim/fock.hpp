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

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Core>

namespace psim {

using complex = std::complex<double>;

/// Default bound on the total photon number a state may hold.
inline constexpr int kDefaultPhotonCap = 6;

/// Stored amplitudes with magnitude below this are pruned from term maps.
inline constexpr double kAmplitudeEpsilon = 1e-14;

/**
 * @brief Address of a single bosonic mode on the (spatial x internal) grid.
 *
 * Spatial modes are the waveguides of a circuit; internal modes are
 * orthonormal temporal/spectral labels that carry photon distinguishability
 * and are never resolved by detectors.
 */
struct ModeIndex {
    int spatial = 0;
    int internal = 0;
};

/**
 * @brief Photon counts per mode, flattened as spatial * n_internal + internal.
 *
 * Comparison is lexicographic in flat order, which is exactly lexicographic
 * in (spatial, internal); term maps keyed on this type therefore iterate in
 * a deterministic, reproducible order.
 */
struct OccupationVector {
    std::vector<std::uint8_t> counts;

    OccupationVector() = default;
    explicit OccupationVector(std::size_t n_modes) : counts(n_modes, 0) {}

    int at(std::size_t flat) const { return counts[flat]; }
    int total() const;

    auto operator<=>(const OccupationVector&) const = default;
};

/**
 * @brief Sparse complex-amplitude superposition over occupation vectors.
 *
 * Immutable value type: every operation returns a new state. All stored
 * occupation vectors share one total photon number, and no stored amplitude
 * is smaller in magnitude than kAmplitudeEpsilon.
 */
class FockState {
public:
    using TermMap = std::map<OccupationVector, complex>;

    int n_spatial() const noexcept { return n_spatial_; }
    int n_internal() const noexcept { return n_internal_; }
    int photon_cap() const noexcept { return photon_cap_; }
    std::size_t n_modes() const noexcept {
        return static_cast<std::size_t>(n_spatial_) * n_internal_;
    }

    /// Flat storage index of a mode; throws std::invalid_argument when out of range.
    std::size_t flat_index(ModeIndex mode) const;

    const TermMap& terms() const noexcept { return terms_; }

    /// Amplitude of one basis ket, zero when the term is absent.
    complex amplitude(const OccupationVector& occ) const;

    /// Shared photon number of the stored terms (0 for vacuum or empty).
    int photon_number() const;

    double norm() const;
    FockState normalized() const;

    /// Assembles a state from raw terms; prunes tiny amplitudes and checks
    /// that all terms agree on grid size and photon number.
    static FockState from_terms(int n_spatial, int n_internal, int photon_cap,
                                TermMap terms);

private:
    FockState() = default;

    int n_spatial_ = 0;
    int n_internal_ = 0;
    int photon_cap_ = kDefaultPhotonCap;
    TermMap terms_;

    friend FockState vacuum(int, int, int);
};

/// The zero-photon state on an n_spatial x n_internal grid.
FockState vacuum(int n_spatial, int n_internal, int photon_cap = kDefaultPhotonCap);

/**
 * @brief Applies a creation operator: |..n..> -> sqrt(n+1)|..n+1..>.
 *
 * The result is intentionally not renormalized (creation operators are not
 * unitary). Throws capacity_error when the photon cap would be exceeded.
 */
FockState apply_creation(const FockState& state, ModeIndex mode);

/// <bra|ket>, conjugate-linear in the first argument. Grids must match.
complex inner_product(const FockState& bra, const FockState& ket);

/**
 * @brief Transforms creation operators on two spatial modes by a 2x2 unitary.
 *
 * The substitution a^dag_i -> u00 a^dag_i + u10 a^dag_j,
 * a^dag_j -> u01 a^dag_i + u11 a^dag_j is applied identically for every
 * internal index; internal labels are untouched and the norm is preserved.
 * Throws std::invalid_argument for a non-unitary matrix (tolerance 1e-12)
 * or bad mode indices.
 */
FockState apply_two_mode_unitary(const FockState& state, const Eigen::Matrix2cd& u,
                                 int spatial_i, int spatial_j);

/// Multiplies each term by exp(i * phi * n), n = photon count in the spatial
/// mode summed over internal labels.
FockState apply_phase_shift(const FockState& state, int spatial_mode, double phi);

}  // namespace psim
