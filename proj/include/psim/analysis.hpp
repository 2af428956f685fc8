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

namespace psim {

/// One dip sample: delay, observed counts, counting uncertainty.
struct DipPoint {
    double tau_s = 0.0;
    double counts = 0.0;
    double sigma = 1.0;
};

/**
 * @brief Converged parameters of the dip model
 * C(tau) = (a + b tau) (1 - V exp(-(tau - tau0)^2 / (2 w^2))).
 *
 * Uncertainties come from the fit covariance, scaled by the reduced
 * chi-squared when that exceeds 1. clamped_v flags a V that left [0,1]
 * and was clamped.
 */
struct DipFitResult {
    double baseline_a = 0.0;
    double baseline_slope_b = 0.0;
    double visibility_v = 0.0;
    double center_tau0 = 0.0;
    double width_w = 0.0;
    double err_a = 0.0;
    double err_b = 0.0;
    double err_v = 0.0;
    double err_tau0 = 0.0;
    double err_w = 0.0;
    double reduced_chi2 = 0.0;
    int iterations = 0;
    bool clamped_v = false;
};

/// One visibility sample for the mode-mismatch regression.
struct ModeMismatchPoint {
    double eta = 0.5;
    double visibility = 1.0;
    double sigma = 0.0;
};

/// Weighted least-squares result of V = M * v_ideal(eta).
struct ModeMismatchFit {
    double m = 0.0;
    double uncertainty = 0.0;
    std::vector<double> residuals;
};

/// Ideal two-photon dip visibility 2 eta (1-eta) / (1 - 2 eta + 2 eta^2).
double v_ideal(double eta);

/// V / v_ideal(eta); throws std::domain_error when v_ideal(eta) is 0.
double relative_visibility(double v, double eta);

/// Poisson counting uncertainties sqrt(max(N, 1)), the 1 flooring empty bins.
std::vector<double> poisson_sigmas(const std::vector<long long>& counts);

/**
 * @brief Weighted nonlinear least-squares fit of the Gaussian-times-linear
 * dip model.
 *
 * Damped Gauss-Newton (Levenberg-Marquardt) with analytic derivatives,
 * initial guesses taken from the data, at most 200 iterations, relative
 * parameter tolerance 1e-10. Needs at least 6 points with positive sigmas
 * (std::invalid_argument otherwise); throws fit_error on flat data or
 * non-convergence.
 */
DipFitResult fit_dip(const std::vector<DipPoint>& points);

/// Evaluates the dip model at tau for a fitted parameter set.
double dip_model(const DipFitResult& fit, double tau_s);

/**
 * @brief One-parameter mode-mismatch regression V = M * v_ideal(eta).
 *
 * Weighted closed form M = sum(w V V_id) / sum(w V_id^2) with w = 1/sigma^2
 * (weight 1 where sigma is not positive); uncertainty is the
 * weighted-regression variance. Throws std::invalid_argument when the list
 * is empty or every v_ideal vanishes.
 */
ModeMismatchFit fit_mode_mismatch(const std::vector<ModeMismatchPoint>& points);

}  // namespace psim
