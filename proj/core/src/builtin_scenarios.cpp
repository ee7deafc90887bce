// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "murk/scenario.hpp"

namespace murk {
namespace {

constexpr double kTwoPi = 6.283185307179586476925;

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

/// Control thickness whose fitted CMF sample count equals `budget`.
double thickness_for_budget(double budget) {
    double lo = 0.0, hi = 1.0;
    while (cmf_sample_count_fit(hi) < budget) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cmf_sample_count_fit(mid) < budget ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

EstimatorEntry series_entry(const std::string& label, EstimatorKind kind,
                            double c) {
    EstimatorEntry e;
    e.label = label;
    e.spec.kind = kind;
    e.spec.roulette = RouletteSpec{c, static_cast<int>(std::floor(c)), 0.0};
    e.spec.depth_sampler.query_size = 1;
    return e;
}

EstimatorEntry rrt_cost_matched(double c) {
    EstimatorEntry e;
    e.label = "rrt-cost-matched";
    e.spec.kind = EstimatorKind::ResidualRatioTracking;
    e.spec.cost_match_bk = true;
    e.spec.roulette = RouletteSpec{c, static_cast<int>(std::floor(c)), 0.0};
    return e;
}

ScenarioConfig pivot_sweep_uniform(double tau, double c, std::uint64_t seed) {
    ScenarioConfig s;
    s.name = "pivot-sweep-uniform-tau" + std::to_string(static_cast<int>(tau)) +
             "-c" + std::to_string(static_cast<int>(c));
    s.field = ConstantProfile{tau};
    s.trials = 1 << 15;
    s.max_trials = 1 << 21;
    s.seed = seed;
    s.sweep = {SweepParam::Pivot, linspace(0.0, 2.0 * tau, 33)};
    s.estimators = {rrt_cost_matched(c),
                    series_entry("series", EstimatorKind::TruncatedSeries, c),
                    series_entry("u-series", EstimatorKind::SymmetrizedSeries, c)};
    return s;
}

ScenarioConfig inverse_efficiency(double tau, std::uint64_t seed) {
    ScenarioConfig s;
    s.name = "bk-inverse-efficiency-tau" + std::to_string(static_cast<int>(tau));
    s.field = ConstantProfile{tau};
    s.trials = 1 << 15;
    s.max_trials = 1 << 21;
    s.seed = seed;
    s.sweep = {SweepParam::Pivot, linspace(0.0, 2.0 * tau, 33)};
    for (double c : {1.0, 2.0, 3.0, 4.0, 6.0})
        s.estimators.push_back(series_entry(
            "series-c" + std::to_string(static_cast<int>(c)),
            EstimatorKind::TruncatedSeries, c));
    return s;
}

ScenarioConfig fluctuation_sweep(double tau, double relative_amplitude,
                                 std::uint64_t seed) {
    ScenarioConfig s;
    const int percent = static_cast<int>(std::lround(relative_amplitude * 100));
    s.name = "bk-ubk-fluctuation-tau" + std::to_string(static_cast<int>(tau)) +
             "-amp" + std::to_string(percent);
    s.field = SineSumProfile{
        {{relative_amplitude * tau, kTwoPi * 3.37, 0.7}}, tau};
    s.trials = 1 << 14;
    s.max_trials = 1 << 19;
    s.seed = seed;
    s.sweep = {SweepParam::Pivot, linspace(0.0, 2.0 * tau, 33)};
    s.estimators = {series_entry("series", EstimatorKind::TruncatedSeries, 2.0),
                    series_entry("u-series",
                                 EstimatorKind::SymmetrizedSeries, 2.0)};
    return s;
}

/// Multi-frequency profile used by the convergence and slab-adjacent tests:
/// geometric frequencies with shrinking amplitudes, offset high enough to
/// stay positive.
SineSumProfile fractal_like_profile() {
    return SineSumProfile{{{0.40, kTwoPi * 1.3, 0.4},
                           {0.25, kTwoPi * 2.9, 1.7},
                           {0.16, kTwoPi * 6.1, 0.2},
                           {0.10, kTwoPi * 13.7, 2.9},
                           {0.06, kTwoPi * 29.3, 1.1}},
                          1.2};
}

std::vector<double> budget_list() { return {4, 8, 16, 32, 64, 128, 256, 512}; }

ScenarioConfig convergence_ray_marching(std::uint64_t seed) {
    ScenarioConfig s;
    s.name = "convergence-ray-marching";
    s.field = fractal_like_profile();
    s.trials = 1 << 14;
    s.max_trials = 1 << 18;
    s.seed = seed;
    std::vector<double> thicknesses;
    for (double b : budget_list())
        thicknesses.push_back(thickness_for_budget(b));
    s.sweep = {SweepParam::ControlThickness, thicknesses};
    EstimatorEntry unbiased;
    unbiased.label = "unbiased-ray-marching";
    unbiased.spec.kind = EstimatorKind::UnbiasedRayMarching;
    EstimatorEntry biased;
    biased.label = "biased-ray-marching";
    biased.spec.kind = EstimatorKind::BiasedRayMarching;
    s.estimators = {unbiased, biased};
    return s;
}

ScenarioConfig convergence_cmf_average(std::uint64_t seed) {
    ScenarioConfig s;
    s.name = "convergence-cmf-average";
    s.field = fractal_like_profile();
    s.trials = 1 << 14;
    s.max_trials = 1 << 18;
    s.seed = seed;
    s.sweep = {SweepParam::Average, {1, 2, 4, 8, 16, 32, 64}};
    EstimatorEntry cmf;
    cmf.label = "pseries-cmf-avg";
    cmf.spec.kind = EstimatorKind::PSeriesCmf;
    s.estimators = {cmf};
    return s;
}

ScenarioConfig convergence_cmf_scaled(std::uint64_t seed) {
    ScenarioConfig s;
    s.name = "convergence-cmf-scaled";
    s.field = fractal_like_profile();
    s.trials = 1 << 14;
    s.max_trials = 1 << 18;
    s.seed = seed;
    // Express the budget sweep as majorant scales; the control thickness
    // follows the scaled majorant.
    const SineSumProfile profile = fractal_like_profile();
    double amplitude = 0.0;
    for (const auto& w : profile.waves) amplitude += w.amplitude;
    const double majorant_thickness = profile.offset + amplitude;
    std::vector<double> scales;
    for (double b : budget_list()) {
        const double target = thickness_for_budget(b);
        if (target >= majorant_thickness)
            scales.push_back(target / majorant_thickness);
    }
    s.sweep = {SweepParam::MajorantScale, scales};
    EstimatorEntry cmf;
    cmf.label = "pseries-cmf-scaled";
    cmf.spec.kind = EstimatorKind::PSeriesCmf;
    s.estimators = {cmf};
    return s;
}

ScenarioConfig endpoint_matching(bool matched_ends, std::uint64_t seed) {
    ScenarioConfig s;
    s.name = matched_ends ? "endpoint-matching-matched"
                          : "endpoint-matching-mismatched";
    if (matched_ends) {
        // Whole periods: identical densities at both interval ends.
        s.field = SineSumProfile{{{0.5, kTwoPi * 3.0, 0.8}}, 1.0};
    } else {
        // Slow quarter-wave dominates, so the ends differ strongly compared
        // with the small ripple.
        s.field = SineSumProfile{{{1.0, 1.3, 0.2}, {0.05, kTwoPi * 6.8, 1.0}},
                                 1.1};
    }
    s.trials = 1 << 14;
    s.max_trials = 1 << 18;
    s.seed = seed;
    std::vector<double> thicknesses;
    for (double b : {8.0, 16.0, 32.0, 64.0, 128.0})
        thicknesses.push_back(thickness_for_budget(b));
    s.sweep = {SweepParam::ControlThickness, thicknesses};
    EstimatorEntry on;
    on.label = "ray-marching-epm";
    on.spec.kind = EstimatorKind::UnbiasedRayMarching;
    on.spec.epm_policy = EpmPolicy::ForceOn;
    EstimatorEntry off;
    off.label = "ray-marching-no-epm";
    off.spec.kind = EstimatorKind::UnbiasedRayMarching;
    off.spec.epm_policy = EpmPolicy::ForceOff;
    s.estimators = {on, off};
    return s;
}

ScenarioConfig slab(std::uint64_t seed) {
    ScenarioConfig s;
    s.name = "slab-128";
    s.slab = SlabSpec{};
    s.trials = 64;  // per pixel
    s.seed = seed;

    EstimatorEntry cmf;
    cmf.label = "pseries-cmf";
    cmf.spec.kind = EstimatorKind::PSeriesCmf;

    EstimatorEntry cmf_global = cmf;
    cmf_global.label = "pseries-cmf-global";
    cmf_global.global_majorant = true;

    // Sampled pivot + comb with the plain roulette, without and with
    // endpoint matching; then the full aggressive-roulette estimator.
    EstimatorEntry comb_pivot;
    comb_pivot.label = "u-comb-pivot";
    comb_pivot.spec.kind = EstimatorKind::UnbiasedRayMarching;
    comb_pivot.spec.roulette = RouletteSpec{2.0, 2, 0.0};
    comb_pivot.spec.epm_policy = EpmPolicy::ForceOff;

    EstimatorEntry comb_pivot_epm = comb_pivot;
    comb_pivot_epm.label = "u-comb-pivot-epm";
    comb_pivot_epm.spec.epm_policy = EpmPolicy::Auto;

    EstimatorEntry unbiased;
    unbiased.label = "unbiased-ray-marching";
    unbiased.spec.kind = EstimatorKind::UnbiasedRayMarching;

    EstimatorEntry unbiased_global = unbiased;
    unbiased_global.label = "unbiased-ray-marching-global";
    unbiased_global.global_majorant = true;

    EstimatorEntry biased;
    biased.label = "biased-ray-marching";
    biased.spec.kind = EstimatorKind::BiasedRayMarching;

    s.estimators = {cmf,         cmf_global,       comb_pivot,
                    comb_pivot_epm, unbiased,      unbiased_global,
                    biased};
    return s;
}

}  // namespace

std::vector<ScenarioConfig> builtin_scenarios() {
    std::vector<ScenarioConfig> all;
    all.push_back(pivot_sweep_uniform(1.0, 2.0, 101));
    all.push_back(pivot_sweep_uniform(4.0, 2.0, 102));
    all.push_back(pivot_sweep_uniform(4.0, 4.0, 103));
    all.push_back(inverse_efficiency(1.0, 104));
    all.push_back(inverse_efficiency(4.0, 105));
    int seed = 110;
    for (double tau : {1.0, 4.0})
        for (double amp : {0.1, 0.25, 0.5, 0.75, 0.95})
            all.push_back(fluctuation_sweep(tau, amp,
                                            static_cast<std::uint64_t>(seed++)));
    all.push_back(convergence_ray_marching(120));
    all.push_back(convergence_cmf_average(121));
    all.push_back(convergence_cmf_scaled(122));
    all.push_back(endpoint_matching(false, 130));
    all.push_back(endpoint_matching(true, 131));
    all.push_back(slab(140));
    return all;
}

}  // namespace murk
