// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "murk/density.hpp"
#include "murk/depth_sampling.hpp"
#include "murk/roulette.hpp"
#include "murk/rng.hpp"

namespace murk {

enum class EstimatorKind {
    DeltaTracking,
    Johnson,
    RatioTracking,
    ResidualRatioTracking,
    SingleTermPoisson,
    TruncatedSeries,    // power series with plain product numerators
    SymmetrizedSeries,  // U-statistic (elementary symmetric mean) numerators
    PSeriesCmf,         // majorant pivot, Poisson-CMF guaranteed order
    UnbiasedRayMarching,
    BiasedRayMarching,
};

enum class EpmPolicy { Auto, ForceOn, ForceOff };

/// Declarative estimator description as it appears in scenario configs.
/// resolve() turns it into runnable parameters against a concrete field.
struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::RatioTracking;
    double control = 0.0;       // mu_c (constant control density)
    double majorant_scale = 1.0;
    int johnson_rounds = 1;
    std::optional<RouletteSpec> roulette;      // series kinds
    DepthSamplerSpec depth_sampler;            // series kinds
    std::optional<int> query_size;             // fixed M; nullopt = automatic
    std::optional<double> control_thickness;   // ray marching budget knob
    EpmPolicy epm_policy = EpmPolicy::Auto;
    bool cost_match_bk = false;  // RRT only: majorant from the BK eval budget
    int average = 1;             // mean of this many independent estimates
};

/// One transmittance estimate. Series estimators may legitimately fall
/// outside [0, 1]; values are reported raw and never clamped.
struct TrialOutcome {
    double estimate = 0.0;
    long evals_used = 0;
};

// --- tracking estimators -----------------------------------------------------

/// Binary free-flight estimator under a constant majorant: 1 if the interval
/// is traversed without a real collision, else 0.
TrialOutcome delta_tracking(const DensityField& field, const Interval& interval,
                            double majorant, Rng& rng, EvalCounter& counter);

/// Minimum-variance estimator given only collision counts: runs `rounds`
/// non-terminating trackings and returns (1 - 1/n)^(total collisions).
/// rounds = 1 reduces to the delta-tracking value distribution.
TrialOutcome johnson(const DensityField& field, const Interval& interval,
                     double majorant, int rounds, Rng& rng,
                     EvalCounter& counter);

/// Expected-value tracking: product of null-collision ratios over a Poisson
/// point process with rate (majorant - control). control > 0 gives the
/// residual form with the e^(-tau_c) prefactor.
TrialOutcome ratio_tracking(const DensityField& field, const Interval& interval,
                            double majorant, double control, Rng& rng,
                            EvalCounter& counter);

/// Single-term power-series (generalized Poisson) estimator: samples
/// N ~ Po(rate_density * length) points and weights the product of residual
/// estimates by 1 / (N! P(N)). With control = rate_density = majorant this
/// reproduces ratio tracking sample for sample.
TrialOutcome single_term_poisson(const DensityField& field,
                                 const Interval& interval, double rate_density,
                                 double control, Rng& rng,
                                 EvalCounter& counter);

// --- truncated power-series estimators ---------------------------------------

/// Parameters shared by the truncated series family, fully resolved
/// against a field (no optional knobs left).
struct SeriesParams {
    double control = 0.0;  // pivot density mu_c
    RouletteSpec roulette;
    DepthSamplerSpec sampler;  // control_density must equal control
};

/// e^(-tau_c) sum_k w_k/k! prod_{i<=k} Y_i with the order from the roulette;
/// every Y_i draws fresh variates so estimates stay independent across
/// orders (correlation within one Y's lookups is fine and intended).
TrialOutcome truncated_series(const DensityField& field,
                              const Interval& interval,
                              const SeriesParams& params, Rng& rng,
                              EvalCounter& counter);

/// Same sampling as truncated_series, but each order k is estimated by the
/// k-th elementary symmetric mean of all N residual estimates, the
/// minimum-variance symmetrization of the plain product form.
TrialOutcome symmetrized_series(const DensityField& field,
                                const Interval& interval,
                                const SeriesParams& params, Rng& rng,
                                EvalCounter& counter);

// --- ray-marching estimators --------------------------------------------------

struct RayMarchParams {
    int query_size = 1;  // comb lookups per depth estimate
    SamplePattern pattern = SamplePattern::EquidistantComb;
    bool endpoint_matching = true;
    EpmFrame epm_frame = EpmFrame::Warped;
    std::optional<WarpMap> warp;
    RouletteSpec roulette{2.0, 2, 0.9};
};

/// Unbiased ray marching: N+1 combed, endpoint-matched depth estimates;
/// each in turn serves as the pivot while the rest feed the symmetrized
/// series, and the N+1 leave-one-out estimators are averaged. Exact on
/// constant media (all estimates coincide and every correction vanishes).
TrialOutcome unbiased_ray_marching(const DensityField& field,
                                   const Interval& interval,
                                   const RayMarchParams& params, Rng& rng,
                                   EvalCounter& counter);

/// Biased ray marching: a single combed, endpoint-matched depth estimate X,
/// exponentiated. E[e^X] >= e^(-tau), with the bias vanishing as Var[X]
/// does.
TrialOutcome biased_ray_marching(const DensityField& field,
                                 const Interval& interval,
                                 const RayMarchParams& params, Rng& rng,
                                 EvalCounter& counter);

// --- spec resolution ----------------------------------------------------------

/// An EstimatorSpec bound to a concrete field: majorants resolved, automatic
/// query sizes computed, endpoint matching decided. Cheap to run per trial.
struct ResolvedEstimator {
    EstimatorKind kind;
    double majorant = 0.0;
    double control = 0.0;
    int johnson_rounds = 1;
    SeriesParams series;
    RayMarchParams ray_march;
    double control_thickness = 0.0;
    int average = 1;
};

ResolvedEstimator resolve(const DensityField& field, const Interval& interval,
                          const EstimatorSpec& spec);

TrialOutcome run_trial(const DensityField& field, const Interval& interval,
                       const ResolvedEstimator& est, Rng& rng,
                       EvalCounter& counter);

}  // namespace murk
