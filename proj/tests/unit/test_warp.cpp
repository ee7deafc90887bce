// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "murk/rng.hpp"
#include "murk/warp.hpp"

using namespace murk;

TEST_SUITE("warp") {

TEST_CASE("uniform cells reduce to the identity warp") {
    const auto w = WarpMap::from_cell_means({1.0, 1.0}, {0.0, 2.0});
    CHECK(w.warp(0.25) == doctest::Approx(0.5));
    CHECK(w.pdf(1.3) == doctest::Approx(0.5));
}

TEST_CASE("inverse-CDF placement") {
    // Cells [0,.5) and [.5,1) carrying mass 1/4 and 3/4: the first quarter
    // of u-space covers the left half of the interval.
    const auto w = WarpMap::from_cell_means({1.0, 3.0}, {0.0, 1.0});
    CHECK(w.warp(0.25) == doctest::Approx(0.5));
    CHECK(w.warp(0.125) == doctest::Approx(0.25));
    CHECK(w.warp(0.625) == doctest::Approx(0.75));
    CHECK(w.pdf(0.1) == doctest::Approx(0.5));
    CHECK(w.pdf(0.9) == doctest::Approx(1.5));
}

TEST_CASE("all mass in the second cell") {
    const auto w = WarpMap::from_cell_means({0.0, 1.0}, {0.0, 1.0});
    CHECK(w.warp(0.5) == doctest::Approx(0.75));
    CHECK(w.pdf(0.25) == 0.0);
    CHECK(w.pdf(0.75) == doctest::Approx(2.0));
}

TEST_CASE("all-zero means degrade to the uniform warp") {
    const auto w = WarpMap::from_cell_means({0.0, 0.0, 0.0}, {1.0, 3.0});
    CHECK(w.is_uniform());
    CHECK(w.warp(0.5) == doctest::Approx(2.0));
}

TEST_CASE("warp then unwarp is the identity within 1e-12") {
    const auto w =
        WarpMap::from_cell_means({0.7, 0.1, 2.4, 0.0, 1.1, 0.3}, {-1.0, 2.0});
    Rng rng(3);
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform();
        const double x = w.warp(u);
        REQUIRE(std::abs(w.unwarp(x) - u) <= 1e-12);
    }
}

TEST_CASE("pushforward of uniform u matches the normalized PDF") {
    const std::vector<double> means = {0.5, 2.0, 0.0, 1.5};
    const auto w = WarpMap::from_cell_means(means, {0.0, 1.0});
    Rng rng(11);
    const int draws = 200000;
    std::vector<int> hits(means.size(), 0);
    for (int i = 0; i < draws; ++i) {
        const double x = w.warp(rng.uniform());
        const auto cell = std::min<std::size_t>(
            static_cast<std::size_t>(x * static_cast<double>(means.size())),
            means.size() - 1);
        ++hits[cell];
    }
    const double total = 0.5 + 2.0 + 0.0 + 1.5;
    for (std::size_t c = 0; c < means.size(); ++c) {
        const double expected = means[c] / total;
        const double observed =
            static_cast<double>(hits[c]) / static_cast<double>(draws);
        // 4 binomial standard errors.
        const double se =
            std::sqrt(std::max(expected * (1.0 - expected), 1e-12) / draws);
        REQUIRE(std::abs(observed - expected) <= 4.0 * se + 1e-9);
    }
}

TEST_CASE("negative means are rejected") {
    CHECK_THROWS_AS(WarpMap::from_cell_means({1.0, -0.5}, {0.0, 1.0}),
                    std::invalid_argument);
}

}  // TEST_SUITE
