// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace murk {

/// A finite ray segment [a, b] in world units, b > a.
struct Interval {
    double a = 0.0;
    double b = 1.0;

    Interval() = default;
    Interval(double a_, double b_) : a(a_), b(b_) {
        if (!(b > a) || !(b - a < 1e300))
            throw std::invalid_argument("Interval requires finite b > a");
    }

    double length() const { return b - a; }

    /// Map a primary-domain coordinate t in [0,1] to a world position.
    double lerp(double t) const { return a + t * (b - a); }
};

}  // namespace murk
