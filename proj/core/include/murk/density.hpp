// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "murk/eval_counter.hpp"
#include "murk/interval.hpp"

namespace murk {

// ----------------------------------------------------------------------------
// Extinction profiles. All are pure deterministic functions of position with
// mu(x) >= 0, so fields are immutable and freely shareable across threads.

struct ConstantProfile {
    double level = 1.0;
};

/// Linear in x, interpolating v0 at the domain start to v1 at the domain end.
struct LinearRampProfile {
    double v0 = 0.0;
    double v1 = 1.0;
};

struct SineWave {
    double amplitude = 0.0;
    double frequency = 0.0;  // angular, radians per world unit
    double phase = 0.0;
};

/// offset + sum_i A_i * sin(f_i * x + phi_i). Offset must dominate the
/// summed amplitudes for the profile to stay nonnegative.
struct SineSumProfile {
    std::vector<SineWave> waves;
    double offset = 0.0;
};

struct GaussianBump {
    double weight = 0.0;  // peak height, >= 0
    double center = 0.0;
    double width = 1.0;  // standard deviation, > 0
};

struct GaussianMixProfile {
    std::vector<GaussianBump> bumps;
    double offset = 0.0;
};

/// Piecewise-constant cells of equal width anchored at the domain start;
/// lookups outside the covered range clamp to the edge cells.
struct GridProfile {
    std::vector<double> values;
    double cell_width = 1.0;
};

/// A 1-D slice through seeded 2-D value-noise fBm, for slab-style scenarios.
/// slice_coord selects the cross-section row; amplitude scales the octave sum
/// (fBm values lie in [0, sum(gain^k)]).
struct FractalSliceProfile {
    int octaves = 4;
    double lacunarity = 2.0;
    double gain = 0.5;
    std::uint64_t seed = 0;
    double slice_coord = 0.0;
    double amplitude = 1.0;
    double base_frequency = 4.0;  // lattice cells across a unit interval
};

using DensityProfile =
    std::variant<ConstantProfile, LinearRampProfile, SineSumProfile,
                 GaussianMixProfile, GridProfile, FractalSliceProfile>;

/// Bounding and aggregate statistics of a field over an interval.
/// majorant/minorant are true bounds (not necessarily tight).
struct FieldStats {
    double majorant = 0.0;
    double minorant = 0.0;
    double mean = 0.0;
    std::optional<double> exact_tau;  // optical depth over the interval
    bool tau_from_quadrature = false;
};

/// A 1-D extinction field mu(x) on an interval, with exact reference
/// quantities where the profile admits them and adaptive quadrature
/// (abs tol 1e-12, capped at 2^20 evaluations) otherwise.
class DensityField {
  public:
    DensityField(DensityProfile profile, Interval domain);

    /// Point lookup; total on the domain. Counts one evaluation.
    double eval(double x, EvalCounter& counter) const;

    /// Optical depth over [interval.a, interval.b].
    double optical_depth(const Interval& interval) const;
    double optical_depth() const { return optical_depth(domain_); }

    /// True if optical_depth() is closed form rather than quadrature.
    bool has_closed_form_depth() const;

    FieldStats stats(const Interval& interval) const;
    FieldStats stats() const { return stats(domain_); }

    const Interval& domain() const { return domain_; }
    const DensityProfile& profile() const { return profile_; }

  private:
    double eval_raw(double x) const;

    DensityProfile profile_;
    Interval domain_;
};

}  // namespace murk
