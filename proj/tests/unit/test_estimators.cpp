// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "murk/estimators.hpp"
#include "murk/stats.hpp"
#include "test_support.hpp"

using namespace murk;
using test::kTwoPi;

namespace {

/// Mean/SE of an estimator over independent substreams.
MomentAccumulator sample_mean(const DensityField& field,
                              const Interval& interval,
                              const ResolvedEstimator& est, long trials,
                              std::uint64_t seed) {
    MomentAccumulator acc;
    for (long t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, 55, 0, static_cast<std::uint64_t>(t));
        EvalCounter counter;
        acc.push(run_trial(field, interval, est, rng, counter).estimate);
    }
    return acc;
}

void check_unbiased(const DensityField& field, const Interval& interval,
                    const ResolvedEstimator& est, long trials,
                    std::uint64_t seed) {
    const double reference = std::exp(-field.optical_depth(interval));
    const auto acc = sample_mean(field, interval, est, trials, seed);
    REQUIRE(std::abs(acc.mean - reference) <=
            4.0 * acc.std_error() + 1e-12);
}

ResolvedEstimator make(const DensityField& field, const Interval& interval,
                       EstimatorSpec spec) {
    return resolve(field, interval, spec);
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("delta tracking basics") {
    const Interval interval{0.0, 1.0};
    SUBCASE("vacuum always transmits") {
        DensityField f(ConstantProfile{0.0}, interval);
        Rng rng(1);
        EvalCounter counter;
        for (int i = 0; i < 100; ++i)
            REQUIRE(delta_tracking(f, interval, 0.0, rng, counter).estimate ==
                    1.0);
    }
    SUBCASE("estimates are binary and unbiased") {
        DensityField f(test::wavy_profile(), interval);
        const double majorant = f.stats().majorant;
        const double reference = std::exp(-f.optical_depth(interval));
        MomentAccumulator acc;
        for (long t = 0; t < 200000; ++t) {
            Rng rng = Rng::substream(2, 0, 0, static_cast<std::uint64_t>(t));
            EvalCounter counter;
            const double v =
                delta_tracking(f, interval, majorant, rng, counter).estimate;
            REQUIRE((v == 0.0 || v == 1.0));
            acc.push(v);
        }
        CHECK(std::abs(acc.mean - reference) <= 4.0 * acc.std_error());
    }
}

TEST_CASE("johnson with one round replays delta tracking bit for bit") {
    const Interval interval{0.0, 1.0};
    DensityField f(test::wavy_profile(), interval);
    const double majorant = f.stats().majorant;
    for (long t = 0; t < 5000; ++t) {
        Rng a = Rng::substream(3, 0, 0, static_cast<std::uint64_t>(t));
        Rng b = a;
        EvalCounter ca, cb;
        REQUIRE(johnson(f, interval, majorant, 1, a, ca).estimate ==
                delta_tracking(f, interval, majorant, b, cb).estimate);
    }
}

TEST_CASE("johnson values live on the (1 - 1/n)^k lattice") {
    const Interval interval{0.0, 1.0};
    DensityField f(test::wavy_profile(), interval);
    const double majorant = f.stats().majorant;
    Rng rng(4);
    EvalCounter counter;
    for (int i = 0; i < 2000; ++i) {
        const double v = johnson(f, interval, majorant, 4, rng, counter).estimate;
        const double k = std::log(v) / std::log(0.75);
        REQUIRE(k > -1e-9);
        REQUIRE(std::abs(k - std::round(k)) < 1e-9);
    }
}

TEST_CASE("ratio tracking") {
    const Interval interval{0.0, 1.0};
    SUBCASE("perfect control is exact with zero cost") {
        DensityField f(ConstantProfile{1.5}, interval);
        Rng rng(5);
        EvalCounter counter;
        const auto out = ratio_tracking(f, interval, 1.5, 1.5, rng, counter);
        CHECK(out.estimate == std::exp(-1.5));
        CHECK(out.evals_used == 0);
    }
    SUBCASE("cost is the residual thickness") {
        DensityField f(ConstantProfile{1.0}, interval);
        MomentAccumulator cost;
        for (long t = 0; t < 400000; ++t) {
            Rng rng = Rng::substream(6, 0, 0, static_cast<std::uint64_t>(t));
            EvalCounter counter;
            cost.push(static_cast<double>(
                ratio_tracking(f, interval, 2.0, 0.0, rng, counter)
                    .evals_used));
        }
        CHECK(cost.mean == doctest::Approx(2.0).epsilon(0.01));
    }
    SUBCASE("majorant below control is rejected") {
        DensityField f(ConstantProfile{1.0}, interval);
        Rng rng(7);
        EvalCounter counter;
        CHECK_THROWS_AS(ratio_tracking(f, interval, 1.0, 1.5, rng, counter),
                        std::invalid_argument);
    }
}

TEST_CASE("single-term estimator replays ratio tracking on a shared stream") {
    const Interval interval{0.0, 1.0};
    DensityField f(test::wavy_profile(), interval);
    const double majorant = f.stats().majorant;
    for (long t = 0; t < 100000; ++t) {
        Rng a = Rng::substream(8, 0, 0, static_cast<std::uint64_t>(t));
        Rng b = a;
        EvalCounter ca, cb;
        const double rt =
            ratio_tracking(f, interval, majorant, 0.0, a, ca).estimate;
        const double single =
            single_term_poisson(f, interval, majorant, majorant, b, cb)
                .estimate;
        REQUIRE(std::abs(single - rt) <= 1e-12 * (1.0 + std::abs(rt)));
        REQUIRE(ca.count() == cb.count());
    }
}

TEST_CASE("truncated series with a perfect control is exact at any order") {
    const Interval interval{0.0, 2.0};
    DensityField f(ConstantProfile{0.8}, interval);
    SeriesParams params;
    params.control = 0.8;
    params.roulette = {2.0, 2, 0.0};
    params.sampler.control_density = 0.8;
    Rng rng(9);
    EvalCounter counter;
    for (int i = 0; i < 500; ++i) {
        const auto out = truncated_series(f, interval, params, rng, counter);
        REQUIRE(out.estimate == std::exp(-1.6));
    }
}

TEST_CASE("series estimators are unbiased on a varying field") {
    const Interval interval{0.0, 1.0};
    DensityField f(test::wavy_profile(), interval);
    EstimatorSpec bk;
    bk.kind = EstimatorKind::TruncatedSeries;
    bk.control = f.stats().mean;  // pivot near the optimum
    check_unbiased(f, interval, make(f, interval, bk), 200000, 11);

    EstimatorSpec sym = bk;
    sym.kind = EstimatorKind::SymmetrizedSeries;
    check_unbiased(f, interval, make(f, interval, sym), 200000, 12);

    EstimatorSpec cmf;
    cmf.kind = EstimatorKind::PSeriesCmf;
    cmf.majorant_scale = 1.25;
    check_unbiased(f, interval, make(f, interval, cmf), 200000, 13);
}

TEST_CASE("symmetrization is the identity through order one (paired)") {
    const Interval interval{0.0, 1.0};
    DensityField f(test::wavy_profile(), interval);
    SeriesParams params;
    params.control = 1.0;
    params.roulette = {0.05, 1, 0.0};  // orders 0 and 1 dominate
    params.sampler.control_density = params.control;
    for (long t = 0; t < 20000; ++t) {
        Rng a = Rng::substream(14, 0, 0, static_cast<std::uint64_t>(t));
        Rng b = a;
        EvalCounter ca, cb;
        const auto plain = truncated_series(f, interval, params, a, ca);
        const auto sym = symmetrized_series(f, interval, params, b, cb);
        if (plain.evals_used <= 1)
            REQUIRE(plain.estimate == sym.estimate);
    }
}

TEST_CASE("unbiased ray marching is exact on constant media") {
    const Interval interval{0.0, 3.0};
    DensityField f(ConstantProfile{2.0}, interval);
    const double reference = std::exp(-(2.0 * 3.0));
    RayMarchParams params;
    params.query_size = 5;
    params.endpoint_matching = false;
    EvalCounter counter;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng = Rng::substream(seed, 1, 2, 3);
        const auto out = unbiased_ray_marching(f, interval, params, rng, counter);
        REQUIRE(std::abs(out.estimate - reference) <=
                std::ldexp(reference, -52));
    }
}

TEST_CASE("endpoint matching makes ray marching exact on the ramp") {
    const Interval interval{0.0, 1.0};
    DensityField f(LinearRampProfile{0.0, 2.0}, interval);
    const double reference = std::exp(-1.0);
    RayMarchParams params;
    params.query_size = 2;
    params.endpoint_matching = true;  // forced on despite the small comb
    EvalCounter counter;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng = Rng::substream(seed, 4, 5, 6);
        const auto out = unbiased_ray_marching(f, interval, params, rng, counter);
        REQUIRE(std::abs(out.estimate - reference) <=
                std::ldexp(reference, -50));
    }
}

TEST_CASE("ray marching cost accounting") {
    const Interval interval{0.0, 1.0};
    DensityField f(test::wavy_profile(), interval);
    RayMarchParams params;
    params.query_size = 9;
    params.endpoint_matching = true;
    MomentAccumulator evals;
    for (long t = 0; t < 200000; ++t) {
        Rng rng = Rng::substream(15, 0, 0, static_cast<std::uint64_t>(t));
        EvalCounter counter;
        const auto out = unbiased_ray_marching(f, interval, params, rng, counter);
        REQUIRE(out.evals_used == static_cast<long>(counter.count()));
        evals.push(static_cast<double>(out.evals_used));
    }
    const double expected = (bk_expected_order(2.0, 0.9) + 1.0) * 9.0 + 2.0;
    CHECK(evals.mean == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("unbiased ray marching on a varying field") {
    const Interval interval{0.0, 1.0};
    DensityField f(test::wavy_profile(), interval);
    EstimatorSpec spec;
    spec.kind = EstimatorKind::UnbiasedRayMarching;
    check_unbiased(f, interval, make(f, interval, spec), 300000, 16);
}

TEST_CASE("biased ray marching") {
    const Interval interval{0.0, 2.0};
    SUBCASE("exact on constant media") {
        DensityField f(ConstantProfile{1.1}, interval);
        RayMarchParams params;
        params.query_size = 7;
        Rng rng(17);
        EvalCounter counter;
        const auto out = biased_ray_marching(f, interval, params, rng, counter);
        CHECK(out.estimate == std::exp(-2.2));
        CHECK(out.evals_used == 7 + 2);
    }
    SUBCASE("bias points up (Jensen)") {
        const Interval unit{0.0, 1.0};
        DensityField f(test::wavy_profile(), unit);
        const double reference = std::exp(-f.optical_depth(unit));
        EstimatorSpec spec;
        spec.kind = EstimatorKind::BiasedRayMarching;
        spec.query_size = 4;
        spec.epm_policy = EpmPolicy::ForceOff;
        const auto acc =
            sample_mean(f, unit, make(f, unit, spec), 200000, 18);
        CHECK(acc.mean >= reference - 4.0 * acc.std_error());
    }
}

TEST_CASE("degenerate interval: everything transmits") {
    const Interval interval{0.0, 1e-12};
    DensityField f(DensityProfile(test::wavy_profile()), interval);
    const EstimatorKind kinds[] = {
        EstimatorKind::DeltaTracking,     EstimatorKind::Johnson,
        EstimatorKind::RatioTracking,     EstimatorKind::ResidualRatioTracking,
        EstimatorKind::SingleTermPoisson, EstimatorKind::TruncatedSeries,
        EstimatorKind::SymmetrizedSeries, EstimatorKind::PSeriesCmf,
        EstimatorKind::UnbiasedRayMarching, EstimatorKind::BiasedRayMarching,
    };
    for (const auto kind : kinds) {
        EstimatorSpec spec;
        spec.kind = kind;
        spec.johnson_rounds = 2;
        spec.control = kind == EstimatorKind::ResidualRatioTracking ? 0.5 : 0.0;
        const ResolvedEstimator est = make(f, interval, spec);
        for (std::uint64_t s = 0; s < 50; ++s) {
            Rng rng = Rng::substream(s, 9, 9, 9);
            EvalCounter counter;
            REQUIRE(std::abs(
                        run_trial(f, interval, est, rng, counter).estimate -
                        1.0) <= 1e-9);
        }
    }
}

TEST_CASE("replayed trials recount identically") {
    const Interval interval{0.0, 1.0};
    DensityField f(test::wavy_profile(), interval);
    EstimatorSpec spec;
    spec.kind = EstimatorKind::UnbiasedRayMarching;
    const ResolvedEstimator est = make(f, interval, spec);
    for (std::uint64_t t = 0; t < 500; ++t) {
        Rng first = Rng::substream(20, 1, 0, t);
        EvalCounter ca;
        const auto a = run_trial(f, interval, est, first, ca);
        Rng second = Rng::substream(20, 1, 0, t);
        EvalCounter cb;
        const auto b = run_trial(f, interval, est, second, cb);
        REQUIRE(a.estimate == b.estimate);
        REQUIRE(a.evals_used == b.evals_used);
        REQUIRE(ca.count() == cb.count());
        REQUIRE(a.evals_used == static_cast<long>(ca.count()));
    }
}

TEST_CASE("spec resolution") {
    const Interval interval{0.0, 1.0};
    DensityField f(ConstantProfile{2.0}, interval);
    SUBCASE("automatic comb width follows the control thickness") {
        EstimatorSpec spec;
        spec.kind = EstimatorKind::UnbiasedRayMarching;
        spec.control_thickness = 10.0;
        const auto est = resolve(f, interval, spec);
        CHECK(est.ray_march.query_size == tuple_size(10.0));
        CHECK(est.ray_march.endpoint_matching);  // 15 >= 6
    }
    SUBCASE("small combs drop endpoint matching") {
        EstimatorSpec spec;
        spec.kind = EstimatorKind::UnbiasedRayMarching;
        spec.control_thickness = 0.5;
        const auto est = resolve(f, interval, spec);
        CHECK(est.ray_march.query_size < 6);
        CHECK_FALSE(est.ray_march.endpoint_matching);
        spec.epm_policy = EpmPolicy::ForceOn;
        CHECK(resolve(f, interval, spec).ray_march.endpoint_matching);
    }
    SUBCASE("biased ray marching uses the CMF sample count directly") {
        EstimatorSpec spec;
        spec.kind = EstimatorKind::BiasedRayMarching;
        spec.control_thickness = 10.0;
        CHECK(resolve(f, interval, spec).ray_march.query_size ==
              cmf_expected_samples(10.0));
    }
    SUBCASE("majorant scale below one is rejected") {
        EstimatorSpec spec;
        spec.majorant_scale = 0.5;
        CHECK_THROWS_AS(resolve(f, interval, spec), std::invalid_argument);
    }
}

}  // TEST_SUITE
