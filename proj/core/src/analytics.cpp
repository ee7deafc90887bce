// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "murk/quadrature.hpp"
#include "murk/symmetric_means.hpp"

namespace murk {
namespace {

constexpr double kSeriesTolerance = 1e-14;
constexpr long kSeriesTermCap = 100000;

[[noreturn]] void diverged(const std::string& what) {
    throw std::runtime_error("series did not converge within the term cap: " +
                             what);
}

}  // namespace

double var_delta_tracking(double tau) {
    if (tau < 0.0) throw std::invalid_argument("tau must be >= 0");
    return std::exp(-tau) - std::exp(-2.0 * tau);
}

double var_johnson(double tau, int rounds) {
    if (tau < 0.0 || rounds < 1)
        throw std::invalid_argument("tau >= 0 and rounds >= 1 required");
    return std::exp(-2.0 * tau) *
           (std::exp(tau / static_cast<double>(rounds)) - 1.0);
}

double var_rrt(const DensityField& field, const Interval& interval,
               double majorant, double control) {
    const double len = interval.length();
    const double lambda = (majorant - control) * len;
    const double tau = field.optical_depth(interval);
    const double tau_bar = majorant * len;

    EvalCounter scratch;
    const double v =
        len * integrate_adaptive(
                  [&](double x) {
                      const double d = majorant - field.eval(x, scratch);
                      return d * d;
                  },
                  interval.a, interval.b)
                  .value;
    if (lambda <= 0.0) {
        if (v > 0.0)
            throw std::invalid_argument(
                "rate is zero but the residual does not vanish");
        return 0.0;
    }
    return std::exp(-2.0 * tau_bar + lambda + v / lambda) -
           std::exp(-2.0 * tau);
}

double cost_rrt(double residual_thickness, int query_size) {
    return static_cast<double>(query_size) * residual_thickness;
}

double cost_delta_tracking(double majorant_thickness, double tau,
                           int query_size) {
    if (tau <= 0.0) return 0.0;
    return static_cast<double>(query_size) * majorant_thickness *
           (1.0 - std::exp(-tau)) / tau;
}

double cost_johnson(double majorant_thickness, int rounds, int query_size) {
    return static_cast<double>(query_size) * majorant_thickness *
           static_cast<double>(rounds);
}

double var_series_uniform(double tau, double tau_c, double c,
                          int guaranteed_order) {
    if (!(c > 0.0) || c > static_cast<double>(guaranteed_order) + 1.0)
        throw std::invalid_argument(
            "closed-form series variance needs 0 < c <= K + 1");
    const double y = tau_c - tau;  // the deterministic residual estimate
    const int k_order = guaranteed_order;

    // Partial sum through the guaranteed orders, then extend one rouletted
    // order at a time: increment_i = Y^(K+i) / (c^i K!).
    double partial = 0.0;
    double term = 1.0;
    for (int n = 0; n <= k_order; ++n) {
        partial += term;
        term *= y / static_cast<double>(n + 1);
    }
    // term now equals Y^(K+1)/(K+1)!; rescale to Y^(K+1)/(c K!).
    double increment = term * static_cast<double>(k_order + 1) / c;

    double survival = 1.0;  // c^j / pochhammer(K+1, j)
    double sum = 0.0;
    double previous = 0.0;
    for (long j = 0; j < kSeriesTermCap; ++j) {
        const double stop_prob =
            1.0 - std::min(c / static_cast<double>(j + k_order + 1), 1.0);
        sum += survival * stop_prob * partial * partial;
        if (j > 2 && std::abs(sum - previous) <= kSeriesTolerance * std::abs(sum))
            break;
        if (j == kSeriesTermCap - 1)
            diverged("uniform series variance, tau_c=" + std::to_string(tau_c) +
                     " c=" + std::to_string(c));
        previous = sum;
        survival *= c / static_cast<double>(j + k_order + 1);
        partial += increment;
        increment *= y / c;
    }
    return std::exp(-2.0 * tau_c) * sum - std::exp(-2.0 * tau);
}

double var_series_fixed_order(double tau, double ey2, int order) {
    double sum = 0.0;
    double term = 1.0;  // ey2^k / (k!)^2
    for (int k = 1; k <= order; ++k) {
        term *= ey2 / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
    }
    return std::exp(-2.0 * tau) * sum;
}

double var_symmetrized_fixed_order(double tau, double ey2, int order) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= order; ++k) {
        term *= ey2 / (static_cast<double>(k) * static_cast<double>(k));
        sum += term / binomial(order, k);
    }
    return std::exp(-2.0 * tau) * sum;
}

double var_symmetrized_roulette(double tau, double ey2, double c,
                                int guaranteed_order) {
    if (!(c > 0.0) || c > static_cast<double>(guaranteed_order) + 1.0)
        throw std::invalid_argument(
            "closed-form series variance needs 0 < c <= K + 1");
    const int k_order = guaranteed_order;
    double survival = 1.0;  // c^k / pochhammer(K+1, k)
    double second_moment = 0.0;
    double previous = 0.0;
    for (long k = 0; k < kSeriesTermCap; ++k) {
        const double stop_prob =
            1.0 - std::min(c / static_cast<double>(1 + k_order + k), 1.0);

        // Terms guaranteed by K, symmetrized over the k+K available samples.
        double bracket = 0.0;
        double term = 1.0;  // ey2^n / (n!)^2
        for (int n = 0; n <= k_order; ++n) {
            bracket += term / binomial(static_cast<int>(k) + k_order, n);
            term *= ey2 / (static_cast<double>(n + 1) * static_cast<double>(n + 1));
        }
        // Rouletted orders K+1 .. K+k.
        double tail = ey2;
        for (int n = 1; n <= k_order; ++n)
            tail *= ey2 / (static_cast<double>(n) * static_cast<double>(n));
        // tail = ey2^(K+1) / (K!)^2; walk i = 1..k with factor ey2 / c^2.
        double ci = 1.0 / (c * c);
        for (long i = 1; i <= k; ++i) {
            bracket += tail * ci /
                       binomial(static_cast<int>(k) + k_order,
                                k_order + static_cast<int>(i));
            tail *= ey2;
            ci /= c * c;
        }

        second_moment += survival * stop_prob * bracket;
        if (k > 2 &&
            std::abs(second_moment - previous) <=
                kSeriesTolerance * std::abs(second_moment))
            break;
        if (k == kSeriesTermCap - 1)
            diverged("symmetrized roulette variance, c=" + std::to_string(c));
        previous = second_moment;
        survival *= c / static_cast<double>(1 + k_order + k);
    }
    const double t = std::exp(-tau);
    return std::exp(-2.0 * tau) * second_moment - t * t;
}

EfficiencyReport efficiency(double variance, double cost) {
    if (!(cost > 0.0)) throw std::invalid_argument("cost must be positive");
    EfficiencyReport report;
    report.variance = variance;
    report.cost = cost;
    report.inverse_efficiency = variance * cost;
    if (variance == 0.0) {
        report.unbounded = true;
        report.efficiency = std::numeric_limits<double>::infinity();
    } else {
        report.efficiency = 1.0 / (variance * cost);
    }
    return report;
}

}  // namespace murk
