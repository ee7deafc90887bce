// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace murk {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 7/15 integration of f over [a, b].
/// Bisects the subinterval with the largest error estimate until the total
/// estimate drops below abs_tol or the evaluation cap (2^20) is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol = 1e-12,
                                    long max_evaluations = 1 << 20);

}  // namespace murk
