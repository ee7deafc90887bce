// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "murk/quadrature.hpp"
#include "murk/rng.hpp"

namespace murk {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate(const DensityProfile& profile) {
    std::visit(
        Overloaded{
            [](const ConstantProfile& p) {
                if (p.level < 0.0)
                    throw std::invalid_argument("constant level must be >= 0");
            },
            [](const LinearRampProfile& p) {
                if (p.v0 < 0.0 || p.v1 < 0.0)
                    throw std::invalid_argument("ramp endpoints must be >= 0");
            },
            [](const SineSumProfile& p) {
                if (p.offset < 0.0)
                    throw std::invalid_argument("sine offset must be >= 0");
            },
            [](const GaussianMixProfile& p) {
                if (p.offset < 0.0)
                    throw std::invalid_argument("mix offset must be >= 0");
                for (const auto& b : p.bumps)
                    if (b.weight < 0.0 || b.width <= 0.0)
                        throw std::invalid_argument("bad gaussian bump");
            },
            [](const GridProfile& p) {
                if (p.values.empty() || p.cell_width <= 0.0)
                    throw std::invalid_argument("grid needs cells of width > 0");
                for (double v : p.values)
                    if (v < 0.0)
                        throw std::invalid_argument("grid cells must be >= 0");
            },
            [](const FractalSliceProfile& p) {
                if (p.octaves < 1 || p.gain <= 0.0 || p.lacunarity <= 0.0 ||
                    p.amplitude < 0.0)
                    throw std::invalid_argument("bad fractal parameters");
            },
        },
        profile);
}

// --- seeded 2-D value noise ------------------------------------------------

double lattice_value(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
    std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(ix)));
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(iy) * 0x9e3779b97f4a7c15ull));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double fade(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise2(double x, double y, std::uint64_t seed) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    const double tx = fade(x - fx);
    const double ty = fade(y - fy);
    const double v00 = lattice_value(ix, iy, seed);
    const double v10 = lattice_value(ix + 1, iy, seed);
    const double v01 = lattice_value(ix, iy + 1, seed);
    const double v11 = lattice_value(ix + 1, iy + 1, seed);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

double fbm2(double x, double y, const FractalSliceProfile& p) {
    double sum = 0.0;
    double amp = 1.0;
    double freq = p.base_frequency;
    for (int o = 0; o < p.octaves; ++o) {
        // Offset octaves so lattice corners do not line up.
        sum += amp * value_noise2(x * freq + 31.0 * o, y * freq - 17.0 * o,
                                  p.seed + static_cast<std::uint64_t>(o));
        amp *= p.gain;
        freq *= p.lacunarity;
    }
    return sum;
}

double fbm_amplitude_sum(const FractalSliceProfile& p) {
    double sum = 0.0;
    double amp = 1.0;
    for (int o = 0; o < p.octaves; ++o) {
        sum += amp;
        amp *= p.gain;
    }
    return sum;
}

}  // namespace

DensityField::DensityField(DensityProfile profile, Interval domain)
    : profile_(std::move(profile)), domain_(domain) {
    validate(profile_);
}

double DensityField::eval_raw(double x) const {
    return std::visit(
        Overloaded{
            [](const ConstantProfile& p) { return p.level; },
            [&](const LinearRampProfile& p) {
                const double t = (x - domain_.a) / domain_.length();
                return p.v0 + (p.v1 - p.v0) * t;
            },
            [&](const SineSumProfile& p) {
                double mu = p.offset;
                for (const auto& w : p.waves)
                    mu += w.amplitude * std::sin(w.frequency * x + w.phase);
                return mu;
            },
            [&](const GaussianMixProfile& p) {
                double mu = p.offset;
                for (const auto& b : p.bumps) {
                    const double d = (x - b.center) / b.width;
                    mu += b.weight * std::exp(-0.5 * d * d);
                }
                return mu;
            },
            [&](const GridProfile& p) {
                const double t = (x - domain_.a) / p.cell_width;
                const auto n = static_cast<std::ptrdiff_t>(p.values.size());
                auto i = static_cast<std::ptrdiff_t>(std::floor(t));
                i = std::clamp<std::ptrdiff_t>(i, 0, n - 1);
                return p.values[static_cast<std::size_t>(i)];
            },
            [&](const FractalSliceProfile& p) {
                const double t = (x - domain_.a) / domain_.length();
                return p.amplitude * fbm2(p.slice_coord, t, p);
            },
        },
        profile_);
}

double DensityField::eval(double x, EvalCounter& counter) const {
    counter.tally();
    return eval_raw(x);
}

bool DensityField::has_closed_form_depth() const {
    return !std::holds_alternative<FractalSliceProfile>(profile_);
}

double DensityField::optical_depth(const Interval& interval) const {
    const double lo = interval.a;
    const double hi = interval.b;
    return std::visit(
        Overloaded{
            [&](const ConstantProfile& p) { return p.level * (hi - lo); },
            [&](const LinearRampProfile& p) {
                // Trapezoid between the ramp values at the interval ends.
                const double len = domain_.length();
                const double va =
                    p.v0 + (p.v1 - p.v0) * (lo - domain_.a) / len;
                const double vb =
                    p.v0 + (p.v1 - p.v0) * (hi - domain_.a) / len;
                return 0.5 * (va + vb) * (hi - lo);
            },
            [&](const SineSumProfile& p) {
                double tau = p.offset * (hi - lo);
                for (const auto& w : p.waves) {
                    if (w.frequency == 0.0) {
                        tau += w.amplitude * std::sin(w.phase) * (hi - lo);
                    } else {
                        tau += w.amplitude / w.frequency *
                               (std::cos(w.frequency * lo + w.phase) -
                                std::cos(w.frequency * hi + w.phase));
                    }
                }
                return tau;
            },
            [&](const GaussianMixProfile& p) {
                double tau = p.offset * (hi - lo);
                constexpr double kSqrtHalf = 0.70710678118654752440;
                constexpr double kSqrtHalfPi = 1.25331413731550025121;
                for (const auto& b : p.bumps) {
                    const double s = b.width;
                    tau += b.weight * s * kSqrtHalfPi *
                           (std::erf((hi - b.center) / s * kSqrtHalf) -
                            std::erf((lo - b.center) / s * kSqrtHalf));
                }
                return tau;
            },
            [&](const GridProfile& p) {
                // Exact finite sum over cell pieces, honoring edge clamping.
                const auto n = static_cast<std::ptrdiff_t>(p.values.size());
                double tau = 0.0;
                double x = lo;
                while (x < hi) {
                    const double t = (x - domain_.a) / p.cell_width;
                    auto i = static_cast<std::ptrdiff_t>(std::floor(t));
                    double next;
                    if (i < 0) {
                        next = domain_.a;
                        i = 0;
                    } else if (i >= n - 1) {
                        next = hi;
                        i = n - 1;
                    } else {
                        next = domain_.a + static_cast<double>(i + 1) * p.cell_width;
                    }
                    next = std::min(next, hi);
                    tau += p.values[static_cast<std::size_t>(i)] * (next - x);
                    x = next;
                }
                return tau;
            },
            [&](const FractalSliceProfile&) {
                auto r = integrate_adaptive(
                    [this](double x) { return eval_raw(x); }, lo, hi);
                return r.value;
            },
        },
        profile_);
}

FieldStats DensityField::stats(const Interval& interval) const {
    FieldStats s;
    std::visit(
        Overloaded{
            [&](const ConstantProfile& p) {
                s.majorant = s.minorant = p.level;
            },
            [&](const LinearRampProfile& p) {
                const double len = domain_.length();
                const double va =
                    p.v0 + (p.v1 - p.v0) * (interval.a - domain_.a) / len;
                const double vb =
                    p.v0 + (p.v1 - p.v0) * (interval.b - domain_.a) / len;
                s.majorant = std::max(va, vb);
                s.minorant = std::min(va, vb);
            },
            [&](const SineSumProfile& p) {
                double amp = 0.0;
                for (const auto& w : p.waves) amp += std::abs(w.amplitude);
                s.majorant = p.offset + amp;
                s.minorant = p.offset - amp;
            },
            [&](const GaussianMixProfile& p) {
                double peak = 0.0;
                for (const auto& b : p.bumps) peak += b.weight;
                s.majorant = p.offset + peak;
                s.minorant = p.offset;
            },
            [&](const GridProfile& p) {
                s.majorant = *std::max_element(p.values.begin(), p.values.end());
                s.minorant = *std::min_element(p.values.begin(), p.values.end());
            },
            [&](const FractalSliceProfile& p) {
                s.majorant = p.amplitude * fbm_amplitude_sum(p);
                s.minorant = 0.0;
            },
        },
        profile_);
    const double tau = optical_depth(interval);
    s.exact_tau = tau;
    s.tau_from_quadrature = !has_closed_form_depth();
    s.mean = tau / interval.length();
    return s;
}

}  // namespace murk
