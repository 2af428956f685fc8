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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "psim/circuit.hpp"
#include "psim/errors.hpp"
#include "psim/fock.hpp"

using namespace psim;

namespace {

OccupationVector occ(std::initializer_list<int> counts) {
    OccupationVector o(counts.size());
    std::size_t i = 0;
    for (int c : counts) o.counts[i++] = static_cast<std::uint8_t>(c);
    return o;
}

/// Max amplitude difference over the union of both term maps.
double state_distance(const FockState& a, const FockState& b) {
    double d = 0.0;
    for (const auto& [key, amp] : a.terms())
        d = std::max(d, std::abs(amp - b.amplitude(key)));
    for (const auto& [key, amp] : b.terms())
        d = std::max(d, std::abs(amp - a.amplitude(key)));
    return d;
}

Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double theta = angle(rng), phi = angle(rng);
    const double alpha = angle(rng), beta = angle(rng);
    const complex i(0.0, 1.0);
    Eigen::Matrix2cd u;
    u << std::cos(theta), std::sin(theta) * std::exp(i * phi),
        -std::sin(theta) * std::exp(-i * phi), std::cos(theta);
    u.col(0) *= std::exp(i * alpha);
    u.col(1) *= std::exp(i * beta);
    return u;
}

}  // namespace

TEST_CASE("vacuum state basics") {
    const FockState v = vacuum(3, 2);
    CHECK(v.n_spatial() == 3);
    CHECK(v.n_internal() == 2);
    CHECK(v.n_modes() == 6);
    CHECK(v.photon_number() == 0);
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK(v.terms().size() == 1);
    CHECK(std::abs(v.amplitude(occ({0, 0, 0, 0, 0, 0})) - 1.0) < 1e-15);
}

TEST_CASE("flat index layout is spatial-major") {
    const FockState v = vacuum(3, 2);
    CHECK(v.flat_index({0, 0}) == 0);
    CHECK(v.flat_index({0, 1}) == 1);
    CHECK(v.flat_index({1, 0}) == 2);
    CHECK(v.flat_index({2, 1}) == 5);
    CHECK_THROWS_AS((void)v.flat_index({3, 0}), std::invalid_argument);
    CHECK_THROWS_AS((void)v.flat_index({0, 2}), std::invalid_argument);
    CHECK_THROWS_AS((void)v.flat_index({-1, 0}), std::invalid_argument);
}

TEST_CASE("creation operators carry the sqrt(n+1) ladder factor") {
    FockState s = vacuum(2, 1);
    s = apply_creation(s, {0, 0});
    CHECK(std::abs(s.amplitude(occ({1, 0})) - 1.0) < 1e-15);
    s = apply_creation(s, {0, 0});
    CHECK(std::abs(s.amplitude(occ({2, 0})) - std::sqrt(2.0)) < 1e-15);
    s = apply_creation(s, {0, 0});
    // 1 * sqrt(2) * sqrt(3) = sqrt(6)
    CHECK(std::abs(s.amplitude(occ({3, 0})) - std::sqrt(6.0)) < 1e-14);
    CHECK(s.photon_number() == 3);
}

TEST_CASE("creation past the photon cap throws capacity_error") {
    FockState s = vacuum(1, 1, 2);
    s = apply_creation(s, {0, 0});
    s = apply_creation(s, {0, 0});
    CHECK_THROWS_AS(apply_creation(s, {0, 0}), capacity_error);
}

TEST_CASE("from_terms validates and prunes") {
    FockState::TermMap good;
    good[occ({1, 1})] = complex(0.6, 0.0);
    good[occ({2, 0})] = complex(0.0, 0.8);
    good[occ({0, 2})] = complex(1e-15, 0.0);  // below kAmplitudeEpsilon
    const FockState t = FockState::from_terms(2, 1, 6, good);
    CHECK(t.terms().size() == 2);
    CHECK(t.photon_number() == 2);

    FockState::TermMap mixed;
    mixed[occ({1, 0})] = 1.0;
    mixed[occ({2, 0})] = 1.0;  // different photon number
    CHECK_THROWS_AS(FockState::from_terms(2, 1, 6, mixed), std::invalid_argument);

    FockState::TermMap wide;
    wide[occ({1, 0, 0})] = 1.0;  // wrong grid size
    CHECK_THROWS_AS(FockState::from_terms(2, 1, 6, wide), std::invalid_argument);

    FockState::TermMap deep;
    deep[occ({3, 0})] = 1.0;  // beyond cap 2
    CHECK_THROWS_AS(FockState::from_terms(2, 1, 2, deep), capacity_error);
}

TEST_CASE("inner product is conjugate-linear in the bra") {
    FockState::TermMap ta, tb;
    ta[occ({1, 0})] = complex(0.0, 1.0);
    tb[occ({1, 0})] = complex(1.0, 0.0);
    tb[occ({0, 1})] = complex(0.5, 0.0);
    const FockState a = FockState::from_terms(2, 1, 6, ta);
    const FockState b = FockState::from_terms(2, 1, 6, tb);
    // <i x | y> = conj(i) <x|y> = -i
    CHECK(std::abs(inner_product(a, b) - complex(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(inner_product(b, a) - std::conj(inner_product(a, b))) < 1e-15);
    CHECK(std::abs(inner_product(a, a) - complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("balanced coupler on |11> suppresses the coincidence term") {
    FockState s = vacuum(2, 1);
    s = apply_creation(s, {0, 0});
    s = apply_creation(s, {1, 0});
    s = apply_two_mode_unitary(s, coupler_unitary(0.5), 0, 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.amplitude(occ({2, 0})) - inv_sqrt2) < 1e-12);
    CHECK(std::abs(s.amplitude(occ({0, 2})) + inv_sqrt2) < 1e-12);
    CHECK(std::abs(s.amplitude(occ({1, 1}))) < 1e-12);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eta=2/3 coupler on |21> cancels the (2,1) output") {
    FockState s = vacuum(2, 1);
    s = apply_creation(s, {0, 0});
    s = apply_creation(s, {0, 0});
    s = apply_creation(s, {1, 0});
    s = s.normalized();
    s = apply_two_mode_unitary(s, coupler_unitary(2.0 / 3.0), 0, 1);
    CHECK(std::abs(s.amplitude(occ({3, 0})) - 2.0 / 3.0) < 1e-12);
    CHECK(std::abs(s.amplitude(occ({1, 2})) + std::sqrt(3.0) / 3.0) < 1e-12);
    CHECK(std::abs(s.amplitude(occ({0, 3})) + std::sqrt(2.0) / 3.0) < 1e-12);
    CHECK(std::abs(s.amplitude(occ({2, 1}))) < 1e-12);
}

TEST_CASE("two-mode unitaries preserve the norm") {
    std::mt19937_64 rng(7);
    FockState s = vacuum(3, 2);
    s = apply_creation(s, {0, 0});
    s = apply_creation(s, {1, 1});
    s = apply_creation(s, {2, 0});
    for (int k = 0; k < 25; ++k) {
        const int i = static_cast<int>(rng() % 3);
        const int j = (i + 1 + static_cast<int>(rng() % 2)) % 3;
        s = apply_two_mode_unitary(s, random_unitary(rng), i, j);
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("rejects non-unitary matrices and bad mode pairs") {
    FockState s = vacuum(2, 1);
    s = apply_creation(s, {0, 0});
    Eigen::Matrix2cd m;
    m << 1.0, 0.0, 0.0, 2.0;
    CHECK_THROWS_AS(apply_two_mode_unitary(s, m, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(apply_two_mode_unitary(s, coupler_unitary(0.5), 0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_two_mode_unitary(s, coupler_unitary(0.5), 0, 2),
                    std::invalid_argument);
}

TEST_CASE("sequential unitaries compose as a matrix product") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        FockState s = vacuum(2, 1);
        s = apply_creation(s, {0, 0});
        s = apply_creation(s, {0, 0});
        s = apply_creation(s, {1, 0});
        s = s.normalized();
        const Eigen::Matrix2cd u = random_unitary(rng);
        const Eigen::Matrix2cd v = random_unitary(rng);
        const FockState step = apply_two_mode_unitary(
            apply_two_mode_unitary(s, u, 0, 1), v, 0, 1);
        const FockState fused = apply_two_mode_unitary(s, (v * u).eval(), 0, 1);
        CHECK(state_distance(step, fused) < 1e-12);
    }
}

TEST_CASE("spatial unitaries act identically on every internal label") {
    std::mt19937_64 rng(13);
    const Eigen::Matrix2cd u = random_unitary(rng);
    // One photon in internal label 0 versus label 1: identical spatial
    // amplitudes, keyed one internal slot over.
    FockState s0 = apply_creation(vacuum(2, 2), {0, 0});
    FockState s1 = apply_creation(vacuum(2, 2), {0, 1});
    s0 = apply_two_mode_unitary(s0, u, 0, 1);
    s1 = apply_two_mode_unitary(s1, u, 0, 1);
    CHECK(std::abs(s0.amplitude(occ({1, 0, 0, 0})) -
                   s1.amplitude(occ({0, 1, 0, 0}))) < 1e-14);
    CHECK(std::abs(s0.amplitude(occ({0, 0, 1, 0})) -
                   s1.amplitude(occ({0, 0, 0, 1}))) < 1e-14);
}

TEST_CASE("ladder algebra agrees with the permanent oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> etas(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double eta = etas(rng);
        Circuit c;
        c.elements = {Coupler{0, 1, eta}};
        const Eigen::MatrixXcd u = oracles::circuit_flat_unitary(c, 1);
        FockState s = vacuum(2, 1);
        s = apply_creation(s, {0, 0});
        s = apply_creation(s, {1, 0});
        s = apply_two_mode_unitary(s, coupler_unitary(eta), 0, 1);
        for (const auto& out : oracles::occupation_lists(2, 2)) {
            const complex expected =
                oracles::transition_amplitude(u, {1, 1}, out);
            OccupationVector key(2);
            key.counts[0] = static_cast<std::uint8_t>(out[0]);
            key.counts[1] = static_cast<std::uint8_t>(out[1]);
            CHECK(std::abs(s.amplitude(key) - expected) < 1e-12);
        }
    }
}

TEST_CASE("phase shift multiplies by exp(i n phi)") {
    FockState s = vacuum(2, 2);
    s = apply_creation(s, {0, 0});
    s = apply_creation(s, {0, 1});  // two photons in spatial 0, distinct labels
    s = apply_creation(s, {1, 0});
    s = s.normalized();
    const double phi = 0.7;
    const FockState shifted = apply_phase_shift(s, 0, phi);
    const complex factor = std::exp(complex(0.0, 2.0 * phi));
    for (const auto& [key, amp] : s.terms())
        CHECK(std::abs(shifted.amplitude(key) - amp * factor) < 1e-14);
    // Phase on an unoccupied mode is a no-op.
    const FockState untouched = apply_phase_shift(s, 1, 0.0);
    CHECK(state_distance(untouched, s) == 0.0);
    CHECK(shifted.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("term maps iterate in deterministic lexicographic order") {
    FockState s = vacuum(2, 1);
    s = apply_creation(s, {0, 0});
    s = apply_creation(s, {1, 0});
    s = apply_two_mode_unitary(s, coupler_unitary(0.3), 0, 1);
    OccupationVector prev;
    bool first = true;
    for (const auto& [key, amp] : s.terms()) {
        if (!first) CHECK(prev < key);
        prev = key;
        first = false;
    }
    CHECK(s.terms().size() == 3);
}
