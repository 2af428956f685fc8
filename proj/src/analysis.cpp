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

#include "psim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "psim/errors.hpp"

namespace psim {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kParameterTol = 1e-10;
constexpr int kNumParams = 5;

// Dip model and derivatives on the normalized axes; parameter order
// (a, b, V, tau0, w).
struct ModelEval {
    double value;
    Eigen::Matrix<double, 1, kNumParams> gradient;
};

ModelEval evaluate_model(const Eigen::Matrix<double, kNumParams, 1>& p,
                         double t) {
    const double a = p(0), b = p(1), v = p(2), t0 = p(3), w = p(4);
    const double line = a + b * t;
    const double z = (t - t0) / w;
    const double g = std::exp(-0.5 * z * z);
    ModelEval eval;
    eval.value = line * (1.0 - v * g);
    eval.gradient(0) = 1.0 - v * g;
    eval.gradient(1) = t * (1.0 - v * g);
    eval.gradient(2) = -line * g;
    eval.gradient(3) = -line * v * g * z / w;
    eval.gradient(4) = -line * v * g * z * z / w;
    return eval;
}

double chi_squared(const Eigen::Matrix<double, kNumParams, 1>& p,
                   const std::vector<double>& t, const std::vector<double>& y,
                   const std::vector<double>& s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = (y[i] - evaluate_model(p, t[i]).value) / s[i];
        sum += r * r;
    }
    return sum;
}

}  // namespace

double v_ideal(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("coupler reflectivity outside [0, 1]");
    }
    return 2.0 * eta * (1.0 - eta) / (1.0 - 2.0 * eta + 2.0 * eta * eta);
}

double relative_visibility(double v, double eta) {
    const double ideal = v_ideal(eta);
    if (ideal <= 0.0) {
        throw std::domain_error(
            "relative visibility undefined where the ideal visibility is 0");
    }
    return v / ideal;
}

std::vector<double> poisson_sigmas(const std::vector<long long>& counts) {
    std::vector<double> sigmas;
    sigmas.reserve(counts.size());
    for (long long n : counts) {
        if (n < 0) throw std::invalid_argument("counts must be >= 0");
        sigmas.push_back(std::sqrt(static_cast<double>(std::max<long long>(n, 1))));
    }
    return sigmas;
}

DipFitResult fit_dip(const std::vector<DipPoint>& points) {
    const std::size_t n = points.size();
    if (n < 6) {
        throw std::invalid_argument(
            "dip fit needs at least 6 points, got " + std::to_string(n));
    }
    for (const auto& point : points) {
        if (!(point.sigma > 0.0)) {
            throw std::invalid_argument("point uncertainties must be positive");
        }
        if (!std::isfinite(point.tau_s) || !std::isfinite(point.counts)) {
            throw std::invalid_argument("points must be finite");
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&points](std::size_t l, std::size_t r) {
        return points[l].tau_s < points[r].tau_s;
    });
    const double tau_min = points[order.front()].tau_s;
    const double tau_max = points[order.back()].tau_s;
    double y_min = points[0].counts, y_max = points[0].counts;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].counts < y_min) {
            y_min = points[i].counts;
            argmin = i;
        }
        y_max = std::max(y_max, points[i].counts);
    }
    if (tau_max <= tau_min) {
        throw fit_error("degenerate data: all delays coincide");
    }
    if (!(y_max > 0.0) || y_max <= y_min) {
        throw fit_error("degenerate data: counts carry no dip");
    }

    // Normalized axes keep the normal equations well conditioned: delays in
    // femtoseconds against counts in thousands are otherwise 25 orders of
    // magnitude apart.
    const double tau_mid = 0.5 * (tau_min + tau_max);
    const double scale = 0.5 * (tau_max - tau_min);
    std::vector<double> t(n), y(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = (points[i].tau_s - tau_mid) / scale;
        y[i] = points[i].counts / y_max;
        s[i] = points[i].sigma / y_max;
    }

    // Initial guesses from the data: baseline from the outer quarter of the
    // delay-sorted points, center at the raw minimum, width as an eighth of
    // the span, V from the raw depth.
    const std::size_t quarter = std::max<std::size_t>(1, n / 4);
    double baseline = 0.0;
    for (std::size_t k = 0; k < quarter; ++k) {
        baseline += points[order[k]].counts + points[order[n - 1 - k]].counts;
    }
    baseline /= static_cast<double>(2 * quarter);

    Eigen::Matrix<double, kNumParams, 1> p;
    p(0) = baseline / y_max;
    p(1) = 0.0;
    p(2) = (y_max - y_min) / y_max;
    p(3) = (points[argmin].tau_s - tau_mid) / scale;
    p(4) = (tau_max - tau_min) / 8.0 / scale;

    double chi2 = chi_squared(p, t, y, s);
    double lambda = 1e-3;
    int iterations = 0;
    bool converged = false;
    while (iterations < kMaxIterations && !converged) {
        ++iterations;
        Eigen::Matrix<double, kNumParams, kNumParams> a =
            Eigen::Matrix<double, kNumParams, kNumParams>::Zero();
        Eigen::Matrix<double, kNumParams, 1> g =
            Eigen::Matrix<double, kNumParams, 1>::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const ModelEval eval = evaluate_model(p, t[i]);
            const Eigen::Matrix<double, 1, kNumParams> row =
                eval.gradient / s[i];
            a += row.transpose() * row;
            g += row.transpose() * ((y[i] - eval.value) / s[i]);
        }

        bool accepted = false;
        while (!accepted) {
            Eigen::Matrix<double, kNumParams, kNumParams> damped = a;
            for (int j = 0; j < kNumParams; ++j) {
                damped(j, j) += lambda * std::max(a(j, j), 1e-12);
            }
            const Eigen::Matrix<double, kNumParams, 1> step =
                damped.ldlt().solve(g);
            Eigen::Matrix<double, kNumParams, 1> trial = p + step;
            trial(4) = std::max(std::abs(trial(4)), 1e-8);
            const double trial_chi2 =
                step.allFinite() ? chi_squared(trial, t, y, s)
                                 : std::numeric_limits<double>::infinity();
            if (trial_chi2 <= chi2) {
                converged = true;
                for (int j = 0; j < kNumParams; ++j) {
                    if (std::abs(step(j)) >
                        kParameterTol * (1.0 + std::abs(p(j)))) {
                        converged = false;
                        break;
                    }
                }
                p = trial;
                chi2 = trial_chi2;
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e12) {
                    throw fit_error(
                        "dip fit failed to converge: damping exhausted at "
                        "chi2 = " +
                        std::to_string(chi2));
                }
            }
        }
    }
    if (!converged) {
        throw fit_error("dip fit did not converge within " +
                        std::to_string(kMaxIterations) +
                        " iterations (chi2 = " + std::to_string(chi2) + ")");
    }

    Eigen::Matrix<double, kNumParams, kNumParams> a_final =
        Eigen::Matrix<double, kNumParams, kNumParams>::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Matrix<double, 1, kNumParams> row =
            evaluate_model(p, t[i]).gradient / s[i];
        a_final += row.transpose() * row;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a_final);
    if (!lu.isInvertible()) {
        throw fit_error("dip fit covariance is singular");
    }
    Eigen::MatrixXd covariance = lu.inverse();
    const double reduced_chi2 = chi2 / static_cast<double>(n - kNumParams);
    if (reduced_chi2 > 1.0) covariance *= reduced_chi2;

    // Map parameters and covariance back to physical axes; a picks up a
    // cross term because the internal baseline is anchored at tau_mid.
    Eigen::Matrix<double, kNumParams, kNumParams> jac =
        Eigen::Matrix<double, kNumParams, kNumParams>::Zero();
    jac(0, 0) = y_max;
    jac(0, 1) = -tau_mid * y_max / scale;
    jac(1, 1) = y_max / scale;
    jac(2, 2) = 1.0;
    jac(3, 3) = scale;
    jac(4, 4) = scale;
    const Eigen::MatrixXd physical = jac * covariance * jac.transpose();

    DipFitResult result;
    result.baseline_slope_b = p(1) * y_max / scale;
    result.baseline_a = p(0) * y_max - result.baseline_slope_b * tau_mid;
    result.visibility_v = p(2);
    result.center_tau0 = tau_mid + p(3) * scale;
    result.width_w = std::abs(p(4)) * scale;
    result.err_a = std::sqrt(physical(0, 0));
    result.err_b = std::sqrt(physical(1, 1));
    result.err_v = std::sqrt(physical(2, 2));
    result.err_tau0 = std::sqrt(physical(3, 3));
    result.err_w = std::sqrt(physical(4, 4));
    result.reduced_chi2 = reduced_chi2;
    result.iterations = iterations;
    if (result.visibility_v < 0.0 || result.visibility_v > 1.0) {
        result.visibility_v = std::clamp(result.visibility_v, 0.0, 1.0);
        result.clamped_v = true;
    }
    return result;
}

double dip_model(const DipFitResult& fit, double tau_s) {
    const double z = (tau_s - fit.center_tau0) / fit.width_w;
    return (fit.baseline_a + fit.baseline_slope_b * tau_s) *
           (1.0 - fit.visibility_v * std::exp(-0.5 * z * z));
}

ModeMismatchFit fit_mode_mismatch(
    const std::vector<ModeMismatchPoint>& points) {
    if (points.empty()) {
        throw std::invalid_argument("mode-mismatch fit needs data");
    }
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto& point : points) {
        const double ideal = v_ideal(point.eta);
        const double weight =
            point.sigma > 0.0 ? 1.0 / (point.sigma * point.sigma) : 1.0;
        numerator += weight * point.visibility * ideal;
        denominator += weight * ideal * ideal;
    }
    if (denominator <= 0.0) {
        throw std::invalid_argument(
            "mode-mismatch fit needs a point with nonzero ideal visibility");
    }
    ModeMismatchFit fit;
    fit.m = numerator / denominator;
    fit.uncertainty = std::sqrt(1.0 / denominator);
    fit.residuals.reserve(points.size());
    for (const auto& point : points) {
        fit.residuals.push_back(point.visibility - fit.m * v_ideal(point.eta));
    }
    return fit;
}

}  // namespace psim
