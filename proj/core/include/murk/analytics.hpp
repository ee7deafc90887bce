// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "murk/density.hpp"
#include "murk/roulette.hpp"

namespace murk {

// Closed-form variance and cost references for the estimators, used to
// validate empirical measurements. Series are summed until the relative
// increment drops below 1e-14, with a 1e5-term cap.

/// e^-tau - e^-2tau; exact for any density profile.
double var_delta_tracking(double tau);

/// e^-2tau (e^(tau/n) - 1); n = 1 recovers delta tracking.
double var_johnson(double tau, int rounds);

/// Residual ratio tracking with constant majorant and control. The second
/// moment needs V = len * integral (majorant - mu(x))^2 dx, evaluated by
/// quadrature.
double var_rrt(const DensityField& field, const Interval& interval,
               double majorant, double control);

/// Expected lookups: residual thickness times query size.
double cost_rrt(double residual_thickness, int query_size = 1);

/// Expected lookups of early-terminating delta tracking in a uniform
/// medium (control-free): majorant_thickness (1 - e^-tau)/tau.
double cost_delta_tracking(double majorant_thickness, double tau,
                           int query_size = 1);

/// Non-terminating tracking walks the interval `rounds` times.
double cost_johnson(double majorant_thickness, int rounds, int query_size = 1);

/// Roulette-only variance of the truncated series estimator in a uniform
/// medium (deterministic residual estimates, p_zero = 0).
double var_series_uniform(double tau, double tau_c, double c,
                          int guaranteed_order);

/// Variance of the series with truncation fixed at `order` and pivot at the
/// optical depth (zero-mean residual estimates with second moment ey2).
double var_series_fixed_order(double tau, double ey2, int order);

/// Symmetrized counterpart; the binomial denominators shrink every term.
double var_symmetrized_fixed_order(double tau, double ey2, int order);

/// Symmetrized series under plain roulette at the optimal pivot.
double var_symmetrized_roulette(double tau, double ey2, double c,
                                int guaranteed_order);

struct EfficiencyReport {
    double variance = 0.0;
    double cost = 0.0;
    double efficiency = 0.0;          // 1 / (variance * cost)
    double inverse_efficiency = 0.0;  // variance * cost
    bool unbounded = false;           // variance was zero
};

EfficiencyReport efficiency(double variance, double cost);

}  // namespace murk
