// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

namespace murk {

/// Online central moments up to order four (Welford / Pebay update), with
/// an order-independent pairwise combine so chunked parallel reductions
/// reproduce the sequential result bit for bit when chunk boundaries and
/// combine order are fixed.
struct MomentAccumulator {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;

    void push(double x);
    static MomentAccumulator combine(const MomentAccumulator& a,
                                     const MomentAccumulator& b);

    std::uint64_t count() const { return static_cast<std::uint64_t>(n); }
    double variance() const;             // unbiased sample variance
    double std_error() const;            // of the mean
    double variance_std_error() const;   // of the sample variance
};

/// Reduction of one batch of trials: value and cost moments plus the mean
/// squared error against a fixed reference.
struct TrialStats {
    MomentAccumulator value;
    MomentAccumulator cost;
    double mse_sum = 0.0;
    std::uint64_t n = 0;

    double mse() const { return n ? mse_sum / static_cast<double>(n) : 0.0; }
    static TrialStats combine(const TrialStats& a, const TrialStats& b);
};

/// A trial maps its global index to (estimate, evaluation count).
using TrialFn = std::function<std::pair<double, double>(std::uint64_t)>;

/// Runs trials [begin, end) across `workers` threads. Trials are grouped
/// into fixed-size chunks on the absolute index grid, reduced independently
/// and folded into `carry` in chunk order, so the result is a pure function
/// of the trial indices no matter how many workers execute them. Passing the
/// result of [0, a) as carry for [a, b) with chunk-aligned a reproduces the
/// single run over [0, b) bit for bit. workers <= 0 uses the hardware count.
TrialStats run_trials(std::uint64_t begin, std::uint64_t end, int workers,
                      double reference, const TrialFn& trial,
                      TrialStats carry = {});

}  // namespace murk
