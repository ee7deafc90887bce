// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/warp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace murk {

WarpMap WarpMap::uniform(const Interval& range) { return WarpMap(range); }

WarpMap WarpMap::from_cell_means(std::vector<double> means,
                                 const Interval& range) {
    double total = 0.0;
    for (double m : means) {
        if (m < 0.0 || !std::isfinite(m))
            throw std::invalid_argument("warp cell means must be nonnegative");
        total += m;
    }
    if (means.empty() || total <= 0.0) return uniform(range);

    WarpMap w(range);
    w.cell_mass_.resize(means.size());
    w.cdf_.resize(means.size() + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i) {
        w.cdf_[i] = acc;
        w.cell_mass_[i] = means[i] / total;
        acc += w.cell_mass_[i];
    }
    w.cdf_.back() = 1.0;
    return w;
}

double WarpMap::warp(double u) const {
    if (is_uniform()) return range_.lerp(u);
    // Inversion method: locate the cell containing mass u, then place the
    // point linearly within it.
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t cell = (it == cdf_.begin())
                           ? 0
                           : static_cast<std::size_t>(it - cdf_.begin()) - 1;
    cell = std::min(cell, cell_mass_.size() - 1);
    // Skip zero-mass cells that u can touch only at their left boundary.
    while (cell_mass_[cell] <= 0.0 && cell + 1 < cell_mass_.size()) ++cell;
    const double t = (u - cdf_[cell]) / cell_mass_[cell];
    const double n = static_cast<double>(cell_mass_.size());
    return range_.lerp((static_cast<double>(cell) + t) / n);
}

double WarpMap::unwarp(double x) const {
    const double t = (x - range_.a) / range_.length();
    if (is_uniform()) return t;
    const double n = static_cast<double>(cell_mass_.size());
    double scaled = t * n;
    std::size_t cell = std::min(static_cast<std::size_t>(std::max(scaled, 0.0)),
                                cell_mass_.size() - 1);
    return cdf_[cell] + cell_mass_[cell] * (scaled - static_cast<double>(cell));
}

double WarpMap::pdf(double x) const {
    const double len = range_.length();
    if (is_uniform()) return 1.0 / len;
    const double t = (x - range_.a) / len;
    const double n = static_cast<double>(cell_mass_.size());
    std::size_t cell = std::min(static_cast<std::size_t>(std::max(t * n, 0.0)),
                                cell_mass_.size() - 1);
    return cell_mass_[cell] * n / len;
}

}  // namespace murk
