// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "murk/interval.hpp"

namespace murk {

/// Inverse-CDF warp from the primary domain [0,1) onto an interval,
/// distributing points proportionally to a piecewise-constant PDF built
/// from per-cell mean densities (equal-width cells). An all-zero mean
/// vector degrades to the uniform (identity) warp.
class WarpMap {
  public:
    /// Uniform warp over the interval (identity in the primary domain).
    static WarpMap uniform(const Interval& range);

    /// Warp proportional to the given nonnegative per-cell means.
    static WarpMap from_cell_means(std::vector<double> means,
                                   const Interval& range);

    /// Primary coordinate u in [0,1) to world position.
    double warp(double u) const;

    /// World position back to the primary coordinate; inverse of warp().
    double unwarp(double x) const;

    /// PDF of warped points in world measure (integrates to 1 over range).
    double pdf(double x) const;

    const Interval& range() const { return range_; }
    bool is_uniform() const { return cdf_.empty(); }

    /// Normalized per-cell masses; empty for the uniform warp.
    const std::vector<double>& cell_masses() const { return cell_mass_; }

  private:
    explicit WarpMap(const Interval& range) : range_(range) {}

    Interval range_;
    // Empty for the uniform warp; otherwise cdf_[i] is the cumulative mass
    // at the start of cell i, with an extra trailing 1.0.
    std::vector<double> cdf_;
    std::vector<double> cell_mass_;
};

}  // namespace murk
