// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace murk {

/// Bhanot-Kennedy style series roulette. Orders 1..K are evaluated with
/// probability 1 - p_zero; past K, order i is reached from i-1 with
/// conditional probability min(c / i, 1). p_zero = 0 recovers the plain
/// scheme; p_zero > 0 truncates at the zeroth order that often.
struct RouletteSpec {
    double c = 2.0;
    int guaranteed_order = 2;  // K
    double p_zero = 0.0;
};

/// Sampled truncation order N plus the weights w_k = 1 / Pr[N >= k] needed
/// to keep a truncated series estimator unbiased. weights.size() == N + 1.
struct RouletteOutcome {
    int order = 0;
    std::vector<double> weights;
};

/// Inverse-CDF coupled sampling of the truncation order from a single
/// uniform variate. The same u that decides zero-truncation also decides
/// every later continuation, so N is a monotone function of u.
RouletteOutcome aggressive_roulette(const RouletteSpec& spec, double u);

/// Expected evaluation order for K = floor(c) in closed form:
/// (1 - p_zero) * [K + (K!/c^K) (e^c - sum_{k<=K} c^k/k!)]. Requires c > 0.
double bk_expected_order(double c, double p_zero = 0.0);

/// Expected evaluation order of the sampler above for arbitrary specs,
/// by direct summation of the survival probabilities (clamp-aware).
double expected_order(const RouletteSpec& spec);

/// Pr[order >= n] for the plain (p_zero = 0) scheme:
/// prod_{i=K+1}^{n} min(c/i, 1), i.e. c^{n-K} K!/n! while c <= K+1.
double bk_truncation_prob(double c, int guaranteed_order, int n);

/// Smallest K with Poisson(tau_bar) CMF >= 0.99.
int cmf99_order(double tau_bar);

/// Grid-search fit of the expected sample count of the p-series CMF
/// estimator at control thickness tau_bar:
/// cbrt((0.015 + t)(0.65 + t)(60.3 + t)).
double cmf_sample_count_fit(double tau_bar);

/// The fit above, rounded up to a whole sample count.
int cmf_expected_samples(double tau_bar);

/// Comb tuple size matching the p-series CMF budget when driven by the
/// aggressive roulette (c = K = 2, p_zero = 0.9):
/// max(1, floor(N_cmf / (E[N] + 1) + 1/2)).
int tuple_size(double tau_bar);

/// Roulette used by the p-series CMF estimator: c = tau_bar and K covering
/// 99% of the Poisson CMF at rate tau_bar.
RouletteSpec pseries_cmf_roulette(double tau_bar);

}  // namespace murk
