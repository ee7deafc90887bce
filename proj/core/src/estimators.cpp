// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "murk/symmetric_means.hpp"

namespace murk {
namespace {

double exponential_flight(Rng& rng) {
    // uniform() < 1, so the argument stays strictly positive.
    return -std::log(1.0 - rng.uniform());
}

}  // namespace

TrialOutcome delta_tracking(const DensityField& field, const Interval& interval,
                            double majorant, Rng& rng, EvalCounter& counter) {
    const auto start_count = counter.count();
    if (majorant <= 0.0)
        return {1.0, 0};  // valid only for vacuum; bounded by field stats
    double x = interval.a;
    for (;;) {
        x += exponential_flight(rng) / majorant;
        if (x >= interval.b)
            return {1.0, static_cast<long>(counter.count() - start_count)};
        const double mu = field.eval(x, counter);
        if (rng.uniform() * majorant < mu)
            return {0.0, static_cast<long>(counter.count() - start_count)};
    }
}

TrialOutcome johnson(const DensityField& field, const Interval& interval,
                     double majorant, int rounds, Rng& rng,
                     EvalCounter& counter) {
    if (rounds < 1) throw std::invalid_argument("johnson needs rounds >= 1");
    const auto start_count = counter.count();
    long collisions = 0;
    if (majorant > 0.0) {
        for (int r = 0; r < rounds; ++r) {
            double x = interval.a;
            for (;;) {
                x += exponential_flight(rng) / majorant;
                if (x >= interval.b) break;
                const double mu = field.eval(x, counter);
                if (rng.uniform() * majorant < mu) ++collisions;
            }
        }
    }
    double estimate;
    if (rounds == 1) {
        estimate = collisions == 0 ? 1.0 : 0.0;  // 0^0 = 1
    } else {
        const double base = 1.0 - 1.0 / static_cast<double>(rounds);
        estimate = std::pow(base, static_cast<double>(collisions));
    }
    return {estimate, static_cast<long>(counter.count() - start_count)};
}

TrialOutcome ratio_tracking(const DensityField& field, const Interval& interval,
                            double majorant, double control, Rng& rng,
                            EvalCounter& counter) {
    const auto start_count = counter.count();
    const double len = interval.length();
    const double rate = majorant - control;
    const double control_factor = std::exp(-control * len);
    if (rate <= 0.0) {
        // Legitimate only when the residual vanishes identically.
        if (rate < 0.0)
            throw std::invalid_argument("ratio tracking needs majorant >= control");
        return {control_factor, 0};
    }
    double product = 1.0;
    double x = interval.a;
    for (;;) {
        x += exponential_flight(rng) / rate;
        if (x >= interval.b) break;
        const double mu_r = field.eval(x, counter) - control;
        product *= 1.0 - mu_r / rate;
    }
    return {control_factor * product,
            static_cast<long>(counter.count() - start_count)};
}

TrialOutcome single_term_poisson(const DensityField& field,
                                 const Interval& interval, double rate_density,
                                 double control, Rng& rng,
                                 EvalCounter& counter) {
    if (rate_density <= 0.0)
        throw std::invalid_argument("single-term estimator needs rate > 0");
    const auto start_count = counter.count();
    const double len = interval.length();
    // e^(-tau_c) / (N! P(N)) = e^(lambda - tau_c) / lambda^N for a Poisson
    // order distribution; each point contributes Y_i / lambda with
    // Y_i = -len * mu_r(x_i), i.e. (control - mu) / rate_density.
    double product = 1.0;
    double x = interval.a;
    for (;;) {
        x += exponential_flight(rng) / rate_density;
        if (x >= interval.b) break;
        product *= (control - field.eval(x, counter)) / rate_density;
    }
    const double prefix = std::exp((rate_density - control) * len);
    return {prefix * product,
            static_cast<long>(counter.count() - start_count)};
}

TrialOutcome truncated_series(const DensityField& field,
                              const Interval& interval,
                              const SeriesParams& params, Rng& rng,
                              EvalCounter& counter) {
    const auto start_count = counter.count();
    const double tau_c = params.control * interval.length();
    const RouletteOutcome roulette =
        aggressive_roulette(params.roulette, rng.uniform());

    const EndpointTerms endpoints =
        params.sampler.endpoint_matching
            ? epm_endpoints(field, interval, params.sampler, counter)
            : EndpointTerms{};
    const EndpointTerms* cache =
        params.sampler.endpoint_matching ? &endpoints : nullptr;

    // Keep every term in Poisson-mass scale: term_k = e^(-tau_c) w_k/k!
    // prod Y_i, built by term_k = term_{k-1} * Y_k * (w_k/w_{k-1}) / k.
    // This stays bounded even for control thicknesses in the hundreds.
    double term = std::exp(-tau_c);
    double acc = term;
    for (int k = 1; k <= roulette.order; ++k) {
        const DepthEstimate y =
            depth_estimate(field, interval, params.sampler, rng, counter, cache);
        const double weight_step =
            roulette.weights[static_cast<std::size_t>(k)] /
            roulette.weights[static_cast<std::size_t>(k - 1)];
        term *= y.value * weight_step / static_cast<double>(k);
        acc += term;
    }
    return {acc, static_cast<long>(counter.count() - start_count)};
}

TrialOutcome symmetrized_series(const DensityField& field,
                                const Interval& interval,
                                const SeriesParams& params, Rng& rng,
                                EvalCounter& counter) {
    const auto start_count = counter.count();
    const double tau_c = params.control * interval.length();
    const RouletteOutcome roulette =
        aggressive_roulette(params.roulette, rng.uniform());
    const int order = roulette.order;

    const EndpointTerms endpoints =
        params.sampler.endpoint_matching
            ? epm_endpoints(field, interval, params.sampler, counter)
            : EndpointTerms{};
    const EndpointTerms* cache =
        params.sampler.endpoint_matching ? &endpoints : nullptr;

    SymmetricMeansAccumulator means(order);
    for (int k = 0; k < order; ++k)
        means.push(
            depth_estimate(field, interval, params.sampler, rng, counter, cache)
                .value);

    // e^(-tau_c) sum_k m_k w_k / k!, with the k-dependent factor walked
    // multiplicatively like in truncated_series.
    double factor = std::exp(-tau_c);
    double acc = factor;  // k = 0, m_0 = 1
    for (int k = 1; k <= order; ++k) {
        const double weight_step =
            roulette.weights[static_cast<std::size_t>(k)] /
            roulette.weights[static_cast<std::size_t>(k - 1)];
        factor *= weight_step / static_cast<double>(k);
        acc += factor * means.means()[static_cast<std::size_t>(k)];
    }
    return {acc, static_cast<long>(counter.count() - start_count)};
}

TrialOutcome unbiased_ray_marching(const DensityField& field,
                                   const Interval& interval,
                                   const RayMarchParams& params, Rng& rng,
                                   EvalCounter& counter) {
    const auto start_count = counter.count();
    const RouletteOutcome roulette =
        aggressive_roulette(params.roulette, rng.uniform());
    const int order = roulette.order;

    DepthSamplerSpec sampler;
    sampler.query_size = params.query_size;
    sampler.pattern = params.pattern;
    sampler.endpoint_matching = params.endpoint_matching;
    sampler.epm_frame = params.epm_frame;
    sampler.warp = params.warp;
    sampler.control_density = 0.0;  // estimates of the full -tau

    const EndpointTerms endpoints =
        sampler.endpoint_matching
            ? epm_endpoints(field, interval, sampler, counter)
            : EndpointTerms{};
    const EndpointTerms* cache =
        sampler.endpoint_matching ? &endpoints : nullptr;

    std::vector<double> estimates(static_cast<std::size_t>(order) + 1);
    for (auto& x : estimates)
        x = comb_depth_estimate(field, interval, sampler, rng.uniform(),
                                counter, cache)
                .value;

    // Leave-one-out: each estimate pivots the series built from the others.
    // The running mean keeps the constant-medium case exact to the last bit.
    double mean = 0.0;
    for (int j = 0; j <= order; ++j) {
        const double pivot = estimates[static_cast<std::size_t>(j)];
        SymmetricMeansAccumulator means(order);
        for (int i = 0; i <= order; ++i)
            if (i != j) means.push(estimates[static_cast<std::size_t>(i)] - pivot);
        double factor = 1.0;
        double series = 1.0;  // k = 0
        for (int k = 1; k <= order; ++k) {
            const double weight_step =
                roulette.weights[static_cast<std::size_t>(k)] /
                roulette.weights[static_cast<std::size_t>(k - 1)];
            factor *= weight_step / static_cast<double>(k);
            series += factor * means.means()[static_cast<std::size_t>(k)];
        }
        const double value = std::exp(pivot) * series;
        mean += (value - mean) / static_cast<double>(j + 1);
    }
    return {mean, static_cast<long>(counter.count() - start_count)};
}

TrialOutcome biased_ray_marching(const DensityField& field,
                                 const Interval& interval,
                                 const RayMarchParams& params, Rng& rng,
                                 EvalCounter& counter) {
    const auto start_count = counter.count();
    DepthSamplerSpec sampler;
    sampler.query_size = params.query_size;
    sampler.pattern = params.pattern;
    sampler.endpoint_matching = params.endpoint_matching;
    sampler.epm_frame = params.epm_frame;
    sampler.warp = params.warp;
    sampler.control_density = 0.0;
    const DepthEstimate x =
        comb_depth_estimate(field, interval, sampler, rng.uniform(), counter);
    return {std::exp(x.value),
            static_cast<long>(counter.count() - start_count)};
}

ResolvedEstimator resolve(const DensityField& field, const Interval& interval,
                          const EstimatorSpec& spec) {
    if (spec.majorant_scale < 1.0)
        throw std::invalid_argument("majorant_scale must be >= 1");
    if (spec.average < 1)
        throw std::invalid_argument("average count must be >= 1");

    const FieldStats stats = field.stats(interval);
    const double len = interval.length();

    ResolvedEstimator est;
    est.kind = spec.kind;
    est.majorant = stats.majorant * spec.majorant_scale;
    est.control = spec.control;
    est.johnson_rounds = spec.johnson_rounds;
    est.average = spec.average;
    est.control_thickness = spec.control_thickness.value_or(
        (stats.majorant - stats.minorant) * len);

    switch (spec.kind) {
        case EstimatorKind::ResidualRatioTracking:
            if (spec.cost_match_bk) {
                // Match the expected lookup count of the series estimator:
                // residual thickness = expected evaluation order.
                const RouletteSpec rl = spec.roulette.value_or(RouletteSpec{});
                est.majorant = est.control + expected_order(rl) / len;
            }
            break;
        case EstimatorKind::SingleTermPoisson:
            // Default instantiation: control sits at the (scaled) majorant,
            // which keeps every residual weight nonnegative.
            est.control = spec.control != 0.0 ? spec.control : est.majorant;
            break;
        case EstimatorKind::TruncatedSeries:
        case EstimatorKind::SymmetrizedSeries: {
            est.series.control = spec.control;
            est.series.roulette = spec.roulette.value_or(RouletteSpec{});
            est.series.sampler = spec.depth_sampler;
            est.series.sampler.control_density = spec.control;
            est.series.sampler.query_size = spec.query_size.value_or(
                spec.depth_sampler.query_size);
            break;
        }
        case EstimatorKind::PSeriesCmf: {
            const double tau_bar = est.majorant * len;
            est.series.control = est.majorant;
            est.series.roulette =
                spec.roulette.value_or(pseries_cmf_roulette(tau_bar));
            est.series.sampler = spec.depth_sampler;
            est.series.sampler.control_density = est.majorant;
            est.series.sampler.query_size = spec.query_size.value_or(
                spec.depth_sampler.query_size);
            break;
        }
        case EstimatorKind::UnbiasedRayMarching:
        case EstimatorKind::BiasedRayMarching: {
            RayMarchParams& rm = est.ray_march;
            rm.roulette = spec.roulette.value_or(RouletteSpec{2.0, 2, 0.9});
            rm.pattern = spec.depth_sampler.pattern == SamplePattern::Iid
                             ? SamplePattern::EquidistantComb
                             : spec.depth_sampler.pattern;
            rm.epm_frame = spec.depth_sampler.epm_frame;
            rm.warp = spec.depth_sampler.warp;
            int automatic;
            if (spec.kind == EstimatorKind::BiasedRayMarching) {
                automatic = cmf_expected_samples(est.control_thickness);
            } else if (!spec.roulette) {
                automatic = tuple_size(est.control_thickness);
            } else {
                // Budget-match a non-default roulette the same way: comb
                // width = CMF sample count over (expected orders + pivot).
                const double orders = expected_order(rm.roulette);
                const double m = std::floor(
                    cmf_expected_samples(est.control_thickness) /
                        (orders + 1.0) +
                    0.5);
                automatic = std::max(1, static_cast<int>(m));
            }
            rm.query_size = spec.query_size.value_or(automatic);
            switch (spec.epm_policy) {
                case EpmPolicy::ForceOn: rm.endpoint_matching = true; break;
                case EpmPolicy::ForceOff: rm.endpoint_matching = false; break;
                case EpmPolicy::Auto:
                    // Two extra endpoint lookups only pay off for wide combs.
                    rm.endpoint_matching = rm.query_size >= 6;
                    break;
            }
            break;
        }
        default:
            break;
    }
    return est;
}

namespace {

TrialOutcome run_single(const DensityField& field, const Interval& interval,
                        const ResolvedEstimator& est, Rng& rng,
                        EvalCounter& counter) {
    switch (est.kind) {
        case EstimatorKind::DeltaTracking:
            return delta_tracking(field, interval, est.majorant, rng, counter);
        case EstimatorKind::Johnson:
            return johnson(field, interval, est.majorant, est.johnson_rounds,
                           rng, counter);
        case EstimatorKind::RatioTracking:
            return ratio_tracking(field, interval, est.majorant, 0.0, rng,
                                  counter);
        case EstimatorKind::ResidualRatioTracking:
            return ratio_tracking(field, interval, est.majorant, est.control,
                                  rng, counter);
        case EstimatorKind::SingleTermPoisson:
            return single_term_poisson(field, interval, est.majorant,
                                       est.control, rng, counter);
        case EstimatorKind::TruncatedSeries:
        case EstimatorKind::PSeriesCmf:
            return truncated_series(field, interval, est.series, rng, counter);
        case EstimatorKind::SymmetrizedSeries:
            return symmetrized_series(field, interval, est.series, rng,
                                      counter);
        case EstimatorKind::UnbiasedRayMarching:
            return unbiased_ray_marching(field, interval, est.ray_march, rng,
                                         counter);
        case EstimatorKind::BiasedRayMarching:
            return biased_ray_marching(field, interval, est.ray_march, rng,
                                       counter);
    }
    throw std::logic_error("unknown estimator kind");
}

}  // namespace

TrialOutcome run_trial(const DensityField& field, const Interval& interval,
                       const ResolvedEstimator& est, Rng& rng,
                       EvalCounter& counter) {
    if (est.average == 1) return run_single(field, interval, est, rng, counter);
    double mean = 0.0;
    long evals = 0;
    for (int i = 0; i < est.average; ++i) {
        const TrialOutcome one = run_single(field, interval, est, rng, counter);
        mean += (one.estimate - mean) / static_cast<double>(i + 1);
        evals += one.evals_used;
    }
    return {mean, evals};
}

}  // namespace murk
