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

#include "psim/fock.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "psim/errors.hpp"

namespace psim {

namespace {

// Factorials as doubles; arguments never exceed the photon cap.
std::vector<double> factorial_table(int n_max) {
    std::vector<double> f(static_cast<std::size_t>(n_max) + 1, 1.0);
    for (int n = 1; n <= n_max; ++n) {
        f[static_cast<std::size_t>(n)] = f[static_cast<std::size_t>(n - 1)] * n;
    }
    return f;
}

complex ipow(complex base, int exp) {
    complex r{1.0, 0.0};
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
}

void check_unitary(const Eigen::Matrix2cd& u) {
    const Eigen::Matrix2cd residual =
        u.adjoint() * u - Eigen::Matrix2cd::Identity();
    if (residual.cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("two-mode matrix is not unitary");
    }
}

}  // namespace

int OccupationVector::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0);
}

std::size_t FockState::flat_index(ModeIndex mode) const {
    if (mode.spatial < 0 || mode.spatial >= n_spatial_ || mode.internal < 0 ||
        mode.internal >= n_internal_) {
        throw std::invalid_argument(
            "mode index (" + std::to_string(mode.spatial) + ", " +
            std::to_string(mode.internal) + ") outside " +
            std::to_string(n_spatial_) + " x " + std::to_string(n_internal_) +
            " grid");
    }
    return static_cast<std::size_t>(mode.spatial) * n_internal_ + mode.internal;
}

complex FockState::amplitude(const OccupationVector& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? complex{0.0, 0.0} : it->second;
}

int FockState::photon_number() const {
    return terms_.empty() ? 0 : terms_.begin()->first.total();
}

double FockState::norm() const {
    double sum = 0.0;
    for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
    return std::sqrt(sum);
}

FockState FockState::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize a zero state");
    TermMap scaled = terms_;
    for (auto& [occ, amp] : scaled) amp /= n;
    return from_terms(n_spatial_, n_internal_, photon_cap_, std::move(scaled));
}

FockState FockState::from_terms(int n_spatial, int n_internal, int photon_cap,
                                TermMap terms) {
    if (n_spatial < 1 || n_internal < 1) {
        throw std::invalid_argument("mode grid must be at least 1 x 1");
    }
    if (photon_cap < 0) {
        throw std::invalid_argument("photon cap must be non-negative");
    }
    FockState state;
    state.n_spatial_ = n_spatial;
    state.n_internal_ = n_internal;
    state.photon_cap_ = photon_cap;

    const std::size_t n_modes = state.n_modes();
    int shared_total = -1;
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->first.counts.size() != n_modes) {
            throw std::invalid_argument(
                "occupation vector length does not match the mode grid");
        }
        if (std::abs(it->second) < kAmplitudeEpsilon) {
            it = terms.erase(it);
            continue;
        }
        const int total = it->first.total();
        if (shared_total < 0) {
            shared_total = total;
        } else if (total != shared_total) {
            throw std::invalid_argument(
                "terms mix different total photon numbers");
        }
        if (total > photon_cap) {
            throw capacity_error("term holds " + std::to_string(total) +
                                 " photons, cap is " +
                                 std::to_string(photon_cap));
        }
        ++it;
    }
    state.terms_ = std::move(terms);
    return state;
}

FockState vacuum(int n_spatial, int n_internal, int photon_cap) {
    if (n_spatial < 1 || n_internal < 1) {
        throw std::invalid_argument("mode grid must be at least 1 x 1");
    }
    if (photon_cap < 0) {
        throw std::invalid_argument("photon cap must be non-negative");
    }
    FockState state;
    state.n_spatial_ = n_spatial;
    state.n_internal_ = n_internal;
    state.photon_cap_ = photon_cap;
    state.terms_.emplace(
        OccupationVector(static_cast<std::size_t>(n_spatial) * n_internal),
        complex{1.0, 0.0});
    return state;
}

FockState apply_creation(const FockState& state, ModeIndex mode) {
    const std::size_t flat = state.flat_index(mode);
    FockState::TermMap out;
    for (const auto& [occ, amp] : state.terms()) {
        if (occ.total() + 1 > state.photon_cap()) {
            throw capacity_error(
                "creation operator would exceed the photon cap of " +
                std::to_string(state.photon_cap()));
        }
        OccupationVector raised = occ;
        const int n = raised.counts[flat];
        raised.counts[flat] = static_cast<std::uint8_t>(n + 1);
        out[raised] += amp * std::sqrt(static_cast<double>(n + 1));
    }
    return FockState::from_terms(state.n_spatial(), state.n_internal(),
                                 state.photon_cap(), std::move(out));
}

complex inner_product(const FockState& bra, const FockState& ket) {
    if (bra.n_spatial() != ket.n_spatial() ||
        bra.n_internal() != ket.n_internal()) {
        throw std::invalid_argument(
            "inner product requires matching mode grids");
    }
    complex sum{0.0, 0.0};
    const bool bra_smaller = bra.terms().size() <= ket.terms().size();
    const auto& outer = bra_smaller ? bra.terms() : ket.terms();
    const auto& inner = bra_smaller ? ket.terms() : bra.terms();
    for (const auto& [occ, amp] : outer) {
        auto it = inner.find(occ);
        if (it == inner.end()) continue;
        sum += bra_smaller ? std::conj(amp) * it->second
                           : std::conj(it->second) * amp;
    }
    return sum;
}

FockState apply_two_mode_unitary(const FockState& state,
                                 const Eigen::Matrix2cd& u, int spatial_i,
                                 int spatial_j) {
    if (spatial_i == spatial_j) {
        throw std::invalid_argument("two-mode unitary needs distinct modes");
    }
    check_unitary(u);
    const std::vector<double> fact = factorial_table(state.photon_cap());

    FockState::TermMap current = state.terms();
    // The substitution acts on one internal label at a time; labels are
    // independent, so the order of this loop does not matter.
    for (int s = 0; s < state.n_internal(); ++s) {
        const std::size_t fi = state.flat_index({spatial_i, s});
        const std::size_t fj = state.flat_index({spatial_j, s});
        FockState::TermMap next;
        for (const auto& [occ, amp] : current) {
            const int n1 = occ.counts[fi];
            const int n2 = occ.counts[fj];
            if (n1 == 0 && n2 == 0) {
                next[occ] += amp;
                continue;
            }
            // (a_i^dag)^n1 (a_j^dag)^n2 expanded binomially under the
            // substitution, with sqrt(m1! m2! / (n1! n2!)) restoring ket
            // normalization.
            for (int p = 0; p <= n1; ++p) {
                for (int q = 0; q <= n2; ++q) {
                    const int m1 = p + q;
                    const int m2 = (n1 - p) + (n2 - q);
                    const double binom =
                        fact[static_cast<std::size_t>(n1)] /
                        (fact[static_cast<std::size_t>(p)] *
                         fact[static_cast<std::size_t>(n1 - p)]) *
                        fact[static_cast<std::size_t>(n2)] /
                        (fact[static_cast<std::size_t>(q)] *
                         fact[static_cast<std::size_t>(n2 - q)]);
                    const complex weight =
                        ipow(u(0, 0), p) * ipow(u(1, 0), n1 - p) *
                        ipow(u(0, 1), q) * ipow(u(1, 1), n2 - q);
                    const double renorm = std::sqrt(
                        fact[static_cast<std::size_t>(m1)] *
                        fact[static_cast<std::size_t>(m2)] /
                        (fact[static_cast<std::size_t>(n1)] *
                         fact[static_cast<std::size_t>(n2)]));
                    OccupationVector moved = occ;
                    moved.counts[fi] = static_cast<std::uint8_t>(m1);
                    moved.counts[fj] = static_cast<std::uint8_t>(m2);
                    next[moved] += amp * binom * weight * renorm;
                }
            }
        }
        current = std::move(next);
    }
    return FockState::from_terms(state.n_spatial(), state.n_internal(),
                                 state.photon_cap(), std::move(current));
}

FockState apply_phase_shift(const FockState& state, int spatial_mode,
                            double phi) {
    if (spatial_mode < 0 || spatial_mode >= state.n_spatial()) {
        throw std::invalid_argument("phase shift mode outside the grid");
    }
    FockState::TermMap out;
    for (const auto& [occ, amp] : state.terms()) {
        int n = 0;
        for (int s = 0; s < state.n_internal(); ++s) {
            n += occ.counts[state.flat_index({spatial_mode, s})];
        }
        out[occ] = amp * std::exp(complex{0.0, phi * n});
    }
    return FockState::from_terms(state.n_spatial(), state.n_internal(),
                                 state.photon_cap(), std::move(out));
}

}  // namespace psim
