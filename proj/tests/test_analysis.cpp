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
#include <vector>

#include "psim/analysis.hpp"
#include "psim/errors.hpp"
#include "psim/experiments.hpp"

using namespace psim;

namespace {

/// Expected dip counts on a symmetric grid of 2*half+1 delays.
std::vector<DipPoint> model_points(double a, double b, double v, double tau0,
                                   double w, int half, double reach) {
    std::vector<DipPoint> points;
    for (int k = -half; k <= half; ++k) {
        const double tau = reach * k / half;
        const double z = (tau - tau0) / w;
        const double y = (a + b * tau) * (1.0 - v * std::exp(-0.5 * z * z));
        points.push_back({tau, y, std::sqrt(std::max(y, 1.0))});
    }
    return points;
}

std::vector<DipPoint> poisson_replicate(const std::vector<DipPoint>& exact,
                                        std::uint64_t seed) {
    std::vector<double> means;
    for (const auto& p : exact) means.push_back(p.counts);
    const auto counts = sample_counts(means, seed);
    const auto sigmas = poisson_sigmas(counts);
    std::vector<DipPoint> noisy;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        noisy.push_back({exact[i].tau_s, static_cast<double>(counts[i]),
                         sigmas[i]});
    }
    return noisy;
}

}  // namespace

TEST_CASE("ideal visibility formula") {
    CHECK(v_ideal(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v_ideal(0.5128) ==
          doctest::Approx(0.9986901384308778).epsilon(1e-15));
    CHECK(v_ideal(0.659) == doctest::Approx(0.8163258633904992).epsilon(1e-15));
    CHECK(v_ideal(0.0) == 0.0);
    CHECK(v_ideal(1.0) == 0.0);
    for (int k = 0; k <= 1000; ++k) {
        const double eta = k / 1000.0;
        CHECK(std::abs(v_ideal(eta) - v_ideal(1.0 - eta)) < 1e-12);
    }
}

TEST_CASE("relative visibility divides out the coupler") {
    CHECK(relative_visibility(0.958, 0.5128) ==
          doctest::Approx(0.958 / 0.9986901384308778).epsilon(1e-15));
    const double v84 = 0.84 * v_ideal(0.659);
    CHECK(relative_visibility(v84, 0.659) == doctest::Approx(0.84).epsilon(1e-12));
    CHECK_THROWS_AS(relative_visibility(0.5, 0.0), std::domain_error);
}

TEST_CASE("poisson sigmas floor empty bins at one") {
    const std::vector<long long> counts = {0, 1, 4, 10000};
    const auto sigmas = poisson_sigmas(counts);
    REQUIRE(sigmas.size() == 4);
    CHECK(sigmas[0] == 1.0);
    CHECK(sigmas[1] == 1.0);
    CHECK(sigmas[2] == 2.0);
    CHECK(sigmas[3] == 100.0);
}

TEST_CASE("noiseless dip fit recovers the parameters") {
    const double a = 1000.0, b = 0.0, v = 0.5, tau0 = 0.0, w = 1e-13;
    const auto points = model_points(a, b, v, tau0, w, 20, 4e-13);
    const DipFitResult fit = fit_dip(points);
    CHECK(fit.baseline_a == doctest::Approx(a).epsilon(1e-6));
    CHECK(fit.visibility_v == doctest::Approx(v).epsilon(1e-6));
    CHECK(std::abs(fit.center_tau0 - tau0) < 1e-19);
    CHECK(fit.width_w == doctest::Approx(w).epsilon(1e-6));
    CHECK(std::abs(fit.baseline_slope_b) < 1e-6 * a / w);
    CHECK(fit.reduced_chi2 < 1e-10);
    CHECK(!fit.clamped_v);
    // The model evaluator reproduces the data it was fitted to.
    for (const auto& p : points) {
        CHECK(dip_model(fit, p.tau_s) == doctest::Approx(p.counts).epsilon(1e-8));
    }
}

TEST_CASE("noiseless fit recovers slope and off-center dips") {
    const double a = 2000.0, v = 0.7, tau0 = 6e-14, w = 1.3e-13;
    const double b = 0.15 * a / 4e-13;  // 15% tilt across the window
    const auto points = model_points(a, b, v, tau0, w, 25, 4e-13);
    const DipFitResult fit = fit_dip(points);
    CHECK(fit.baseline_a == doctest::Approx(a).epsilon(1e-6));
    CHECK(fit.baseline_slope_b == doctest::Approx(b).epsilon(1e-4));
    CHECK(fit.visibility_v == doctest::Approx(v).epsilon(1e-6));
    CHECK(fit.center_tau0 == doctest::Approx(tau0).epsilon(1e-5));
    CHECK(fit.width_w == doctest::Approx(w).epsilon(1e-6));
}

TEST_CASE("fit preconditions and failure modes") {
    const auto points = model_points(1000, 0, 0.5, 0, 1e-13, 20, 4e-13);
    std::vector<DipPoint> few(points.begin(), points.begin() + 5);
    CHECK_THROWS_AS(fit_dip(few), std::invalid_argument);

    auto bad_sigma = points;
    bad_sigma[3].sigma = 0.0;
    CHECK_THROWS_AS(fit_dip(bad_sigma), std::invalid_argument);

    std::vector<DipPoint> flat;
    for (int k = 0; k < 12; ++k)
        flat.push_back({k * 1e-14, 500.0, std::sqrt(500.0)});
    CHECK_THROWS_AS(fit_dip(flat), fit_error);
}

TEST_CASE("poisson round trip stays within two fitted errors") {
    // Counting-noise replicate of each dip shape; the 2 sigma criterion is
    // the everyday consistency check, deterministic via fixed seeds.
    struct Shape {
        double a, b, v, tau0, w;
        std::uint64_t seed;
    };
    const std::vector<Shape> shapes = {
        {1000, 0, 0.5, 0, 1e-13, 5},
        {2000, 0, 0.958, 0, 1.2e-13, 6},
        {1500, 0.1 * 1500 / 4e-13, 0.3, -5e-14, 1.5e-13, 7},
    };
    for (const auto& s : shapes) {
        const auto exact = model_points(s.a, s.b, s.v, s.tau0, s.w, 20, 4e-13);
        const DipFitResult fit = fit_dip(poisson_replicate(exact, s.seed));
        CHECK(std::abs(fit.visibility_v - s.v) <= 2.0 * fit.err_v);
        CHECK(std::abs(fit.baseline_a - s.a) <= 3.0 * fit.err_a);
        CHECK(fit.reduced_chi2 > 0.3);
        CHECK(fit.reduced_chi2 < 3.0);
    }
}

TEST_CASE("visibility estimator is unbiased over 200 replicates") {
    // Mean fitted V over seeded counting-noise replicates stays within
    // 3 standard errors of the injected value.
    const double v_true = 0.5;
    const auto exact = model_points(1000, 0, v_true, 0, 1e-13, 20, 4e-13);
    const int n_rep = 200;
    double sum = 0.0, sum_sq = 0.0;
    for (int rep = 0; rep < n_rep; ++rep) {
        const DipFitResult fit =
            fit_dip(poisson_replicate(exact, 42 + static_cast<std::uint64_t>(rep)));
        sum += fit.visibility_v;
        sum_sq += fit.visibility_v * fit.visibility_v;
    }
    const double mean = sum / n_rep;
    const double sd = std::sqrt((sum_sq - n_rep * mean * mean) / (n_rep - 1));
    const double se = sd / std::sqrt(static_cast<double>(n_rep));
    CHECK(std::abs(mean - v_true) <= 3.0 * se);
    CHECK(sd < 0.02);  // sanity: spread matches counting noise, not blowups
}

TEST_CASE("fit is equivariant under axis rescaling") {
    // tau -> s*tau, counts -> c*counts maps (a, b, V, tau0, w) to
    // (c*a, c*b/s, V, s*tau0, s*w); internal normalization must not leak.
    const auto base = model_points(1200, 0.05 * 1200 / 4e-13, 0.6, 4e-14,
                                   1.1e-13, 20, 4e-13);
    const auto noisy = poisson_replicate(base, 11);
    const double s = 250.0, c = 3.0;
    std::vector<DipPoint> scaled;
    for (const auto& p : noisy)
        scaled.push_back({p.tau_s * s, p.counts * c, p.sigma * c});
    const DipFitResult f1 = fit_dip(noisy);
    const DipFitResult f2 = fit_dip(scaled);
    CHECK(f2.baseline_a == doctest::Approx(c * f1.baseline_a).epsilon(1e-8));
    CHECK(f2.baseline_slope_b ==
          doctest::Approx(c / s * f1.baseline_slope_b).epsilon(1e-8));
    CHECK(f2.visibility_v == doctest::Approx(f1.visibility_v).epsilon(1e-8));
    CHECK(f2.center_tau0 == doctest::Approx(s * f1.center_tau0).epsilon(1e-8));
    CHECK(f2.width_w == doctest::Approx(s * f1.width_w).epsilon(1e-8));
    CHECK(f2.err_v == doctest::Approx(f1.err_v).epsilon(1e-8));
    CHECK(f2.reduced_chi2 == doctest::Approx(f1.reduced_chi2).epsilon(1e-8));
}

TEST_CASE("visibility outside [0,1] is clamped and flagged") {
    // Synthetic data whose unconstrained optimum is V = 1.05 (the model
    // dips below zero near the center); the fit converges there, then
    // clamps the reported V into [0, 1] and flags it.
    std::vector<DipPoint> points;
    for (int k = -20; k <= 20; ++k) {
        const double tau = 4e-13 * k / 20.0;
        const double z = tau / 1.2e-13;
        points.push_back(
            {tau, 1000.0 * (1.0 - 1.05 * std::exp(-0.5 * z * z)), 10.0});
    }
    const DipFitResult fit = fit_dip(points);
    CHECK(fit.clamped_v);
    CHECK(fit.visibility_v == 1.0);
}

TEST_CASE("mode-mismatch regression recovers an exact scaling") {
    const std::vector<double> etas = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<ModeMismatchPoint> points;
    for (double eta : etas)
        points.push_back({eta, 0.952 * v_ideal(eta), 0.005});
    const ModeMismatchFit fit = fit_mode_mismatch(points);
    CHECK(fit.m == doctest::Approx(0.952).epsilon(1e-14));
    // Weighted-regression variance: 1 / sum(v_ideal^2 / sigma^2).
    double denom = 0.0;
    for (double eta : etas)
        denom += v_ideal(eta) * v_ideal(eta) / (0.005 * 0.005);
    CHECK(fit.uncertainty == doctest::Approx(1.0 / std::sqrt(denom))
                                 .epsilon(1e-12));
    for (double r : fit.residuals) CHECK(std::abs(r) < 1e-14);
}

TEST_CASE("mode-mismatch closed form minimizes the weighted chi square") {
    const std::vector<ModeMismatchPoint> points = {
        {0.3, 0.80, 0.01}, {0.5, 0.93, 0.004}, {0.7, 0.82, 0.02}};
    const ModeMismatchFit fit = fit_mode_mismatch(points);
    const auto chi2 = [&](double m) {
        double total = 0.0;
        for (const auto& p : points) {
            const double r = (p.visibility - m * v_ideal(p.eta)) / p.sigma;
            total += r * r;
        }
        return total;
    };
    // The quadratic's vertex from finite differences equals the closed form.
    const double h = 1e-6;
    const double slope = (chi2(fit.m + h) - chi2(fit.m - h)) / (2.0 * h);
    CHECK(std::abs(slope) < 1e-6);
    CHECK(chi2(fit.m) < chi2(fit.m + 0.01));
    CHECK(chi2(fit.m) < chi2(fit.m - 0.01));
}

TEST_CASE("mode-mismatch regression handles edge cases") {
    // A single point pins M directly.
    const ModeMismatchFit single = fit_mode_mismatch({{0.5, 1.0, 0.0}});
    CHECK(single.m == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(fit_mode_mismatch({}), std::invalid_argument);
    // v_ideal vanishing everywhere leaves M undetermined.
    CHECK_THROWS_AS(fit_mode_mismatch({{0.0, 0.1, 0.01}, {1.0, 0.2, 0.01}}),
                    std::invalid_argument);
}

TEST_CASE("noisy mode-mismatch fit recovers the injected scaling") {
    const std::vector<double> etas = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    // Deterministic Gaussian perturbations via Poisson tail trick is
    // overkill; reuse the seeded counting sampler on large means instead:
    // N ~ Poisson(1e6) gives (N - 1e6)/1e6 approximately N(0, 1e-3).
    std::vector<double> means(etas.size(), 1e6);
    const auto draws = sample_counts(means, 17);
    std::vector<ModeMismatchPoint> points;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        const double noise = (static_cast<double>(draws[i]) - 1e6) / 1e6 * 5.0;
        points.push_back({etas[i], (0.952 + noise) * v_ideal(etas[i]), 0.005});
    }
    const ModeMismatchFit fit = fit_mode_mismatch(points);
    CHECK(std::abs(fit.m - 0.952) <= 2.0 * fit.uncertainty);
}
