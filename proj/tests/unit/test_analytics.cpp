// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "murk/analytics.hpp"
#include "murk/estimators.hpp"
#include "murk/stats.hpp"
#include "murk/symmetric_means.hpp"
#include "test_support.hpp"

using namespace murk;

TEST_SUITE("analytics") {

TEST_CASE("tracking variance formulas") {
    CHECK(var_delta_tracking(0.0) == 0.0);
    CHECK(var_delta_tracking(1.0) == doctest::Approx(0.232544).epsilon(1e-5));
    for (double tau : {0.5, 1.0, 2.0})
        CHECK(var_johnson(tau, 1) ==
              doctest::Approx(var_delta_tracking(tau)).epsilon(1e-14));
    CHECK(var_johnson(1.0, 4) ==
          doctest::Approx(std::exp(-2.0) * (std::exp(0.25) - 1.0)));
}

TEST_CASE("residual ratio tracking variance") {
    const Interval interval{0.0, 1.0};
    DensityField f(ConstantProfile{1.0}, interval);
    SUBCASE("uniform medium, majorant 2, no control") {
        CHECK(var_rrt(f, interval, 2.0, 0.0) ==
              doctest::Approx(std::exp(-1.5) - std::exp(-2.0)).epsilon(1e-12));
        CHECK(var_rrt(f, interval, 2.0, 0.0) ==
              doctest::Approx(0.087793).epsilon(1e-4));
    }
    SUBCASE("tight majorant collapses to delta tracking") {
        CHECK(var_rrt(f, interval, 1.0, 0.0) ==
              doctest::Approx(var_delta_tracking(1.0)).epsilon(1e-12));
    }
    SUBCASE("perfect control has zero variance") {
        CHECK(var_rrt(f, interval, 2.0, 1.0) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("cost formulas") {
    CHECK(cost_rrt(2.0) == 2.0);
    CHECK(cost_delta_tracking(2.0, 1.0) ==
          doctest::Approx(1.26424).epsilon(1e-5));
    CHECK(cost_johnson(2.0, 4) == 8.0);
}

TEST_CASE("uniform-medium series variance") {
    SUBCASE("pivot at the optical depth is exact") {
        CHECK(std::abs(var_series_uniform(1.0, 1.0, 2.0, 2)) < 1e-12);
        CHECK(std::abs(var_series_uniform(4.0, 4.0, 2.0, 2)) < 1e-12);
    }
    SUBCASE("matches Monte Carlo on the uniform medium") {
        const Interval interval{0.0, 1.0};
        DensityField f(ConstantProfile{1.0}, interval);
        SeriesParams params;
        params.control = 0.5;
        params.roulette = {2.0, 2, 0.0};
        params.sampler.control_density = 0.5;
        MomentAccumulator acc;
        for (long t = 0; t < 2000000; ++t) {
            Rng rng = Rng::substream(61, 0, 0, static_cast<std::uint64_t>(t));
            EvalCounter counter;
            acc.push(truncated_series(f, interval, params, rng, counter)
                         .estimate);
        }
        const double reference = var_series_uniform(1.0, 0.5, 2.0, 2);
        CHECK(acc.variance() == doctest::Approx(reference).epsilon(0.03));
        CHECK(acc.mean == doctest::Approx(std::exp(-1.0))
                              .epsilon(5.0 * acc.std_error()));
    }
    SUBCASE("rejects out-of-domain expansion parameters") {
        CHECK_THROWS_AS(var_series_uniform(1.0, 0.5, 4.0, 2),
                        std::invalid_argument);
    }
}

TEST_CASE("fixed-order series variance at the optimal pivot") {
    CHECK(var_series_fixed_order(1.0, 0.0, 5) == 0.0);
    CHECK(var_symmetrized_fixed_order(1.0, 0.0, 5) == 0.0);

    // Monte Carlo cross-check straight from the estimator definitions,
    // with zero-mean uniform residual estimates.
    const double tau = 0.7;
    const double half_width = 0.9;
    const double ey2 = half_width * half_width / 3.0;
    const int order = 3;
    MomentAccumulator plain, sym;
    Rng rng(62);
    for (long t = 0; t < 2000000; ++t) {
        double ys[order];
        for (auto& y : ys) y = rng.uniform(-half_width, half_width);
        double product = 1.0, acc_plain = 1.0;
        double factorial = 1.0;
        for (int k = 1; k <= order; ++k) {
            product *= ys[k - 1];
            factorial *= static_cast<double>(k);
            acc_plain += product / factorial;
        }
        const auto means = means_incremental({ys, order}, order);
        double acc_sym = 1.0;
        factorial = 1.0;
        for (int k = 1; k <= order; ++k) {
            factorial *= static_cast<double>(k);
            acc_sym += means[static_cast<std::size_t>(k)] / factorial;
        }
        plain.push(std::exp(-tau) * acc_plain);
        sym.push(std::exp(-tau) * acc_sym);
    }
    CHECK(plain.variance() ==
          doctest::Approx(var_series_fixed_order(tau, ey2, order)).epsilon(0.02));
    CHECK(sym.variance() ==
          doctest::Approx(var_symmetrized_fixed_order(tau, ey2, order))
              .epsilon(0.02));
}

TEST_CASE("rouletted symmetrized variance at the optimal pivot") {
    // Field with exactly matched pivot: control = mean density, so the
    // residual estimates have zero expectation by construction.
    const Interval interval{0.0, 1.0};
    DensityField f(murk::test::wavy_profile(), interval);
    const double tau = f.optical_depth(interval);

    SeriesParams params;
    params.control = tau / interval.length();
    params.roulette = {2.0, 2, 0.0};
    params.sampler.control_density = params.control;

    // Measured second moment of the residual estimate.
    MomentAccumulator y2;
    for (long t = 0; t < 1000000; ++t) {
        Rng rng = Rng::substream(63, 0, 0, static_cast<std::uint64_t>(t));
        EvalCounter counter;
        const double y =
            depth_estimate(f, interval, params.sampler, rng, counter).value;
        y2.push(y * y);
    }

    MomentAccumulator estimate;
    for (long t = 0; t < 2000000; ++t) {
        Rng rng = Rng::substream(64, 0, 0, static_cast<std::uint64_t>(t));
        EvalCounter counter;
        estimate.push(
            symmetrized_series(f, interval, params, rng, counter).estimate);
    }
    const double reference = var_symmetrized_roulette(tau, y2.mean, 2.0, 2);
    CHECK(estimate.variance() == doctest::Approx(reference).epsilon(0.03));
}

TEST_CASE("roulette efficiency identity") {
    // p Var[R X / p] = Var[X] + (1 - p) E[X]^2 for Bernoulli(p) roulette.
    Rng rng(65);
    for (double mean : {0.0, 0.5}) {
        for (double p : {0.1, 0.5}) {
            MomentAccumulator acc;
            for (long t = 0; t < 2000000; ++t) {
                const double x = mean + rng.uniform(-1.0, 1.0);
                const double rouletted = rng.uniform() < p ? x / p : 0.0;
                acc.push(rouletted);
            }
            const double var_x = 1.0 / 3.0;
            const double expected = var_x + (1.0 - p) * mean * mean;
            CHECK(p * acc.variance() ==
                  doctest::Approx(expected).epsilon(0.03));
        }
    }
}

TEST_CASE("product variance of zero-mean factors") {
    Rng rng(66);
    const double half_width = 1.2;
    const double v = half_width * half_width / 3.0;
    for (int k : {2, 3, 4}) {
        MomentAccumulator acc;
        for (long t = 0; t < 4000000; ++t) {
            double product = 1.0;
            for (int i = 0; i < k; ++i)
                product *= rng.uniform(-half_width, half_width);
            acc.push(product);
        }
        const double ratio = acc.variance() / std::pow(v, k);
        CHECK(ratio > 0.9);
        CHECK(ratio < 1.1);
    }
}

TEST_CASE("efficiency report") {
    const auto unit = efficiency(0.25, 4.0);
    CHECK(unit.efficiency == doctest::Approx(1.0));
    CHECK_FALSE(unit.unbounded);

    const auto zero = efficiency(0.0, 10.0);
    CHECK(zero.unbounded);
    CHECK(std::isinf(zero.efficiency));

    const double tau = 1.0;
    const auto dt = efficiency(var_delta_tracking(tau),
                               cost_delta_tracking(tau, tau));
    CHECK(dt.efficiency == doctest::Approx(6.803).epsilon(1e-3));

    CHECK_THROWS_AS(efficiency(0.1, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
