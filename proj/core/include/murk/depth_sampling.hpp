// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "murk/density.hpp"
#include "murk/rng.hpp"
#include "murk/warp.hpp"

namespace murk {

enum class SamplePattern {
    Iid,             // independent draws from the sampling PDF
    EquidistantComb, // Cranley-Patterson rotated equidistant tuple
    GoldenComb,      // golden-ratio offsets, for highly irregular densities
    MirroredComb,    // comb over the field blended with its reversed copy
};

/// Which integrand the endpoint-matching reshuffle equalizes: the warped
/// primary-domain integrand (default) or the raw world-space density.
/// Identical when no warp is installed.
enum class EpmFrame { Warped, WorldSpace };

/// Configuration of one optical-depth estimator: how many lookups it may
/// spend (query_size), where it places them, and which constant control
/// density is subtracted from the field before integration.
struct DepthSamplerSpec {
    int query_size = 1;  // M, lookups per estimate
    SamplePattern pattern = SamplePattern::Iid;
    bool endpoint_matching = false;
    EpmFrame epm_frame = EpmFrame::Warped;
    std::optional<WarpMap> warp;
    double control_density = 0.0;  // mu_c; 0 disables the control
};

/// One estimate of the negative (residual) optical depth.
struct DepthEstimate {
    double value = 0.0;
    long evals_used = 0;
};

/// Sampling PDF vanished at a point where the residual density does not;
/// the estimate would be unnormalizable, so the trial aborts.
struct SamplingSupportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The two reshuffle endpoint values used by endpoint matching, evaluated
/// once (2 lookups) and reusable across the estimates of one trial.
struct EndpointTerms {
    double start = 0.0;  // integrand at the interval start
    double end = 0.0;    // integrand at the interval end
};

EndpointTerms epm_endpoints(const DensityField& field, const Interval& interval,
                            const DepthSamplerSpec& spec, EvalCounter& counter);

/// Mean-of-ratios estimate of -tau_r from query_size independent points,
/// one primary variate per point.
DepthEstimate iid_depth_estimate(const DensityField& field,
                                 const Interval& interval,
                                 const DepthSamplerSpec& spec,
                                 std::span<const double> u_stream,
                                 EvalCounter& counter);

/// Combed estimate of -tau_r from a single rotation variate u in [0,1).
/// With endpoint_matching and no cached terms this spends 2 extra lookups.
DepthEstimate comb_depth_estimate(const DensityField& field,
                                  const Interval& interval,
                                  const DepthSamplerSpec& spec, double u,
                                  EvalCounter& counter,
                                  const EndpointTerms* cached = nullptr);

/// Draws the variates the configured pattern needs and dispatches.
DepthEstimate depth_estimate(const DensityField& field,
                             const Interval& interval,
                             const DepthSamplerSpec& spec, Rng& rng,
                             EvalCounter& counter,
                             const EndpointTerms* cached = nullptr);

/// Unbiased sample variance of the estimator over independent trials.
double depth_estimate_variance(const DensityField& field,
                               const Interval& interval,
                               const DepthSamplerSpec& spec, long trials,
                               std::uint64_t seed);

}  // namespace murk
