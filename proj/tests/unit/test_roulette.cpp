// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "murk/rng.hpp"
#include "murk/roulette.hpp"

using namespace murk;

TEST_SUITE("roulette") {

TEST_CASE("hand-traced order selection") {
    SUBCASE("zero-truncation branch") {
        const auto out = aggressive_roulette({2.0, 2, 0.9}, 0.95);
        CHECK(out.order == 0);
        REQUIRE(out.weights.size() == 1);
        CHECK(out.weights[0] == 1.0);
    }
    SUBCASE("plain scheme, u = 0.05") {
        // Survivals past the guaranteed orders: 2/3, 1/3, 2/15, 2/45 <= u.
        const auto out = aggressive_roulette({2.0, 2, 0.0}, 0.05);
        CHECK(out.order == 5);
        REQUIRE(out.weights.size() == 6);
        CHECK(out.weights[0] == 1.0);
        CHECK(out.weights[1] == doctest::Approx(1.0));
        CHECK(out.weights[2] == doctest::Approx(1.0));
        CHECK(out.weights[3] == doctest::Approx(1.5));
        CHECK(out.weights[4] == doctest::Approx(3.0));
        CHECK(out.weights[5] == doctest::Approx(7.5));
    }
    SUBCASE("aggressive scheme, u = 0.05") {
        // 0.1, 0.1, 0.0667, 0.0333 <= u: stops after order 3.
        const auto out = aggressive_roulette({2.0, 2, 0.9}, 0.05);
        CHECK(out.order == 3);
        REQUIRE(out.weights.size() == 4);
        CHECK(out.weights[1] == doctest::Approx(10.0));
        CHECK(out.weights[2] == doctest::Approx(10.0));
        CHECK(out.weights[3] == doctest::Approx(15.0));
    }
}

TEST_CASE("expected order closed form") {
    CHECK(bk_expected_order(2.0) ==
          doctest::Approx(2.0 + 0.5 * (std::exp(2.0) - 5.0)).epsilon(1e-14));
    CHECK(bk_expected_order(2.0) == doctest::Approx(3.194528).epsilon(1e-5));
    CHECK(bk_expected_order(2.0, 0.9) == doctest::Approx(0.3194528).epsilon(1e-5));
    CHECK(bk_expected_order(1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    CHECK_THROWS_AS(bk_expected_order(0.0), std::invalid_argument);
    CHECK_THROWS_AS(bk_expected_order(-2.0), std::invalid_argument);
}

TEST_CASE("series expected order matches the closed form") {
    for (double c : {0.5, 1.0, 2.0, 3.7, 6.0}) {
        for (double pz : {0.0, 0.5, 0.9}) {
            const RouletteSpec spec{c, static_cast<int>(std::floor(c)), pz};
            CHECK(expected_order(spec) ==
                  doctest::Approx(bk_expected_order(c, pz)).epsilon(1e-12));
        }
    }
    // Clamped continuations (c > K + 1) stay finite and sensible.
    CHECK(expected_order({10.0, 2, 0.0}) > 9.0);
}

TEST_CASE("truncation probabilities") {
    CHECK(bk_truncation_prob(2.0, 2, 2) == 1.0);
    CHECK(bk_truncation_prob(2.0, 2, 3) == doctest::Approx(2.0 / 3.0));
    CHECK(bk_truncation_prob(2.0, 2, 5) == doctest::Approx(2.0 / 15.0));
    CHECK(bk_truncation_prob(3.0, 0, 1) == 1.0);  // clamped to 1
}

TEST_CASE("sampled order distribution matches the survival weights") {
    const RouletteSpec spec{2.0, 2, 0.9};
    const long draws = 1000000;
    std::vector<long> at_least(12, 0);
    double mean_order = 0.0;
    std::vector<double> weight_of_order(12, 0.0);
    Rng rng(42);
    for (long i = 0; i < draws; ++i) {
        const auto out = aggressive_roulette(spec, rng.uniform());
        mean_order += static_cast<double>(out.order);
        for (int k = 0; k <= out.order && k < 12; ++k) ++at_least[static_cast<std::size_t>(k)];
        if (out.order < 12)
            weight_of_order[static_cast<std::size_t>(out.order)] =
                out.weights.back();
    }
    mean_order /= static_cast<double>(draws);
    CHECK(mean_order ==
          doctest::Approx(bk_expected_order(2.0, 0.9)).epsilon(0.01));

    for (int k = 1; k <= 8; ++k) {
        const double expected =
            (1.0 - spec.p_zero) * bk_truncation_prob(spec.c, 2, k);
        const double observed =
            static_cast<double>(at_least[static_cast<std::size_t>(k)]) /
            static_cast<double>(draws);
        const double se =
            std::sqrt(expected * (1.0 - expected) / static_cast<double>(draws));
        REQUIRE(std::abs(observed - expected) <= 4.0 * se + 1e-9);
    }
}

TEST_CASE("emitted weights are reciprocal survival probabilities") {
    const RouletteSpec spec{2.0, 2, 0.5};
    Rng rng(9);
    for (int i = 0; i < 2000; ++i) {
        const auto out = aggressive_roulette(spec, rng.uniform());
        for (int k = 1; k <= out.order; ++k) {
            const double survival =
                (1.0 - spec.p_zero) * bk_truncation_prob(spec.c, 2, k);
            REQUIRE(out.weights[static_cast<std::size_t>(k)] ==
                    doctest::Approx(1.0 / survival).epsilon(1e-12));
        }
    }
}

TEST_CASE("poisson 99% order") {
    CHECK(cmf99_order(0.0) == 0);
    CHECK(cmf99_order(1.0) == 4);
    SUBCASE("against direct summation") {
        for (double tau : {0.5, 1.0, 2.0, 5.0, 10.0, 37.5}) {
            double term = std::exp(-tau);
            double cmf = term;
            int k = 0;
            while (cmf < 0.99) {
                ++k;
                term *= tau / static_cast<double>(k);
                cmf += term;
            }
            REQUIRE(cmf99_order(tau) == k);
        }
    }
}

TEST_CASE("sample count fit and tuple size") {
    CHECK(cmf_expected_samples(0.0) == 1);
    CHECK(cmf_expected_samples(10.0) == 20);
    CHECK(tuple_size(0.0) == 1);
    CHECK(tuple_size(10.0) == 15);
    // Asymptotics: the fit tracks tau and the tuple tracks its share.
    CHECK(cmf_sample_count_fit(1e6) / 1e6 == doctest::Approx(1.0).epsilon(1e-3));
    const double expected = bk_expected_order(2.0, 0.9);
    CHECK(static_cast<double>(tuple_size(1e5)) /
              (1e5 / (expected + 1.0)) ==
          doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("cmf sample fit tracks the measured roulette cost") {
    // The fitted count approximates the mean evaluated order of the
    // p-series CMF roulette; tolerance 0.5 samples on the unrounded fit.
    Rng rng(1234);
    double absolute_error_sum = 0.0;
    const std::vector<double> taus = {0.5, 1.0, 2.0, 5.0};
    for (double tau : taus) {
        const RouletteSpec spec = pseries_cmf_roulette(tau);
        const long draws = 400000;
        double mean = 0.0;
        for (long i = 0; i < draws; ++i)
            mean += static_cast<double>(
                aggressive_roulette(spec, rng.uniform()).order);
        mean /= static_cast<double>(draws);
        absolute_error_sum += std::abs(cmf_sample_count_fit(tau) - mean);
    }
    const double mae = absolute_error_sum / static_cast<double>(taus.size());
    MESSAGE("cmf fit MAE vs sampled cost: ", mae);
    CHECK(mae <= 0.5);
}

}  // TEST_SUITE
