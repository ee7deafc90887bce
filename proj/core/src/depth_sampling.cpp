// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/depth_sampling.hpp"

#include <cmath>

namespace murk {
namespace {

constexpr double kGoldenFrac = 0.6180339887498948482;  // frac((1+sqrt(5))/2)

void validate(const DepthSamplerSpec& spec) {
    if (spec.query_size < 1)
        throw std::invalid_argument("query_size must be >= 1");
    if (spec.endpoint_matching && spec.pattern == SamplePattern::Iid)
        throw std::invalid_argument(
            "endpoint matching requires a comb pattern");
    if (!std::isfinite(spec.control_density))
        throw std::invalid_argument("control density must be finite");
}

double position(const Interval& interval, const DepthSamplerSpec& spec,
                double t) {
    return spec.warp ? spec.warp->warp(t) : interval.lerp(t);
}

double pdf_at(const Interval& interval, const DepthSamplerSpec& spec,
              double x) {
    return spec.warp ? spec.warp->pdf(x) : 1.0 / interval.length();
}

/// Residual density at x, with the world-space endpoint-matching reshuffle
/// folded in when active. delta is mu(b) - mu(a).
double reshuffled_residual(const DensityField& field, const Interval& interval,
                           const DepthSamplerSpec& spec, double x,
                           double world_delta, EvalCounter& counter) {
    double mu = field.eval(x, counter);
    if (world_delta != 0.0) {
        const double s = (x - interval.a) / interval.length();
        mu += (0.5 - s) * world_delta;
    }
    return mu - spec.control_density;
}

/// The primary-domain integrand g(t) whose mean over t in [0,1) is tau_r.
/// For the mirrored pattern this is the blend of the field with its
/// interval-reflected copy, costing two lookups.
double pattern_integrand(const DensityField& field, const Interval& interval,
                         const DepthSamplerSpec& spec, double t,
                         double world_delta, EvalCounter& counter) {
    const double x = position(interval, spec, t);
    const double p = pdf_at(interval, spec, x);
    double mu_r = reshuffled_residual(field, interval, spec, x, world_delta,
                                      counter);
    if (spec.pattern == SamplePattern::MirroredComb) {
        const double mirrored = interval.a + interval.b - x;
        mu_r = 0.5 * (mu_r + reshuffled_residual(field, interval, spec,
                                                 mirrored, world_delta,
                                                 counter));
    }
    if (p <= 0.0) {
        if (mu_r != 0.0)
            throw SamplingSupportError(
                "sampling PDF vanished where the residual density does not");
        return 0.0;
    }
    return mu_r / p;
}

}  // namespace

EndpointTerms epm_endpoints(const DensityField& field, const Interval& interval,
                            const DepthSamplerSpec& spec,
                            EvalCounter& counter) {
    EndpointTerms terms;
    if (spec.epm_frame == EpmFrame::WorldSpace) {
        terms.start = field.eval(interval.a, counter);
        terms.end = field.eval(interval.b, counter);
        return terms;
    }
    // Warped frame: match the ends of the integrand the comb actually sees.
    const double xa = position(interval, spec, 0.0);
    const double xb = position(interval, spec, 1.0);
    double ga = field.eval(xa, counter) - spec.control_density;
    double gb = field.eval(xb, counter) - spec.control_density;
    if (spec.pattern == SamplePattern::MirroredComb) {
        // The blended integrand shares one value pair at both ends.
        ga = gb = 0.5 * (ga + gb);
    }
    terms.start = ga / pdf_at(interval, spec, xa);
    terms.end = gb / pdf_at(interval, spec, xb);
    return terms;
}

DepthEstimate iid_depth_estimate(const DensityField& field,
                                 const Interval& interval,
                                 const DepthSamplerSpec& spec,
                                 std::span<const double> u_stream,
                                 EvalCounter& counter) {
    validate(spec);
    if (u_stream.size() != static_cast<std::size_t>(spec.query_size))
        throw std::invalid_argument("u_stream must hold query_size variates");
    const auto start_count = counter.count();
    double mean = 0.0;
    for (int i = 0; i < spec.query_size; ++i) {
        const double x = position(interval, spec, u_stream[static_cast<std::size_t>(i)]);
        const double p = pdf_at(interval, spec, x);
        const double mu_r =
            field.eval(x, counter) - spec.control_density;
        double ratio;
        if (p <= 0.0) {
            if (mu_r != 0.0)
                throw SamplingSupportError(
                    "sampling PDF vanished where the residual density does "
                    "not");
            ratio = 0.0;
        } else {
            ratio = mu_r / p;
        }
        mean += (ratio - mean) / static_cast<double>(i + 1);
    }
    return {-mean, static_cast<long>(counter.count() - start_count)};
}

DepthEstimate comb_depth_estimate(const DensityField& field,
                                  const Interval& interval,
                                  const DepthSamplerSpec& spec, double u,
                                  EvalCounter& counter,
                                  const EndpointTerms* cached) {
    validate(spec);
    if (spec.pattern == SamplePattern::Iid)
        throw std::invalid_argument("comb estimate needs a comb pattern");
    const auto start_count = counter.count();

    EndpointTerms local;
    double warped_delta = 0.0;
    double world_delta = 0.0;
    if (spec.endpoint_matching) {
        local = cached ? *cached : epm_endpoints(field, interval, spec, counter);
        if (spec.epm_frame == EpmFrame::WorldSpace)
            world_delta = local.end - local.start;
        else
            warped_delta = local.end - local.start;
    }

    const int points = spec.pattern == SamplePattern::MirroredComb
                           ? (spec.query_size + 1) / 2
                           : spec.query_size;
    const double inv_points = 1.0 / static_cast<double>(points);

    double mean = 0.0;
    for (int j = 0; j < points; ++j) {
        double t;
        if (spec.pattern == SamplePattern::GoldenComb) {
            t = u + static_cast<double>(j) * kGoldenFrac;
            t -= std::floor(t);
        } else {
            t = (u + static_cast<double>(j)) * inv_points;
        }
        double g = pattern_integrand(field, interval, spec, t, world_delta,
                                     counter);
        if (warped_delta != 0.0) g += (0.5 - t) * warped_delta;
        mean += (g - mean) / static_cast<double>(j + 1);
    }
    return {-mean, static_cast<long>(counter.count() - start_count)};
}

DepthEstimate depth_estimate(const DensityField& field,
                             const Interval& interval,
                             const DepthSamplerSpec& spec, Rng& rng,
                             EvalCounter& counter,
                             const EndpointTerms* cached) {
    if (spec.pattern == SamplePattern::Iid) {
        validate(spec);
        const auto start_count = counter.count();
        double mean = 0.0;
        for (int i = 0; i < spec.query_size; ++i) {
            const double x = position(interval, spec, rng.uniform());
            const double p = pdf_at(interval, spec, x);
            const double mu_r =
                field.eval(x, counter) - spec.control_density;
            double ratio;
            if (p <= 0.0) {
                if (mu_r != 0.0)
                    throw SamplingSupportError(
                        "sampling PDF vanished where the residual density "
                        "does not");
                ratio = 0.0;
            } else {
                ratio = mu_r / p;
            }
            mean += (ratio - mean) / static_cast<double>(i + 1);
        }
        return {-mean, static_cast<long>(counter.count() - start_count)};
    }
    return comb_depth_estimate(field, interval, spec, rng.uniform(), counter,
                               cached);
}

double depth_estimate_variance(const DensityField& field,
                               const Interval& interval,
                               const DepthSamplerSpec& spec, long trials,
                               std::uint64_t seed) {
    if (trials < 2)
        throw std::invalid_argument("variance needs at least 2 trials");
    double mean = 0.0;
    double m2 = 0.0;
    for (long t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, hash_name("depth-variance"), 0,
                                 static_cast<std::uint64_t>(t));
        EvalCounter counter;
        const double x =
            depth_estimate(field, interval, spec, rng, counter).value;
        const double delta = x - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (x - mean);
    }
    return m2 / static_cast<double>(trials - 1);
}

}  // namespace murk
