// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/roulette.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace murk {
namespace {

void validate(const RouletteSpec& spec) {
    if (!(spec.c >= 0.0) || spec.guaranteed_order < 0 || spec.p_zero < 0.0 ||
        spec.p_zero >= 1.0)
        throw std::invalid_argument("invalid roulette spec");
}

}  // namespace

RouletteOutcome aggressive_roulette(const RouletteSpec& spec, double u) {
    validate(spec);
    RouletteOutcome out;
    out.weights.push_back(1.0);  // w_0

    double survival = 1.0 - spec.p_zero;  // Pr[order >= current]
    if (survival <= u) return out;        // truncate at the zeroth order

    const int guaranteed = spec.guaranteed_order;
    for (int i = 1; i <= guaranteed; ++i)
        out.weights.push_back(1.0 / survival);

    for (int i = guaranteed + 1;; ++i) {
        const double cont = std::min(spec.c / static_cast<double>(i), 1.0);
        survival *= cont;
        if (survival <= u) {
            out.order = i - 1;
            return out;
        }
        out.weights.push_back(1.0 / survival);
    }
}

double bk_expected_order(double c, double p_zero) {
    if (!(c > 0.0)) throw std::invalid_argument("expansion parameter c <= 0");
    if (p_zero < 0.0 || p_zero >= 1.0)
        throw std::invalid_argument("p_zero must lie in [0, 1)");
    const int guaranteed = static_cast<int>(std::floor(c));
    // t walks c^k/k!; the partial sum tracks sum_{k<=K} c^k/k!.
    double t = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= guaranteed; ++k) {
        t *= c / static_cast<double>(k);
        sum += t;
    }
    const double expected =
        static_cast<double>(guaranteed) + (std::exp(c) - sum) / t;
    return (1.0 - p_zero) * expected;
}

double expected_order(const RouletteSpec& spec) {
    validate(spec);
    // E[N] = sum_{k>=1} Pr[N >= k].
    double survival = 1.0 - spec.p_zero;
    double expected = survival * spec.guaranteed_order;
    for (int i = spec.guaranteed_order + 1;; ++i) {
        survival *= std::min(spec.c / static_cast<double>(i), 1.0);
        if (survival < 1e-18 * (expected + 1.0)) break;
        expected += survival;
    }
    return expected;
}

double bk_truncation_prob(double c, int guaranteed_order, int n) {
    if (n < 0) throw std::invalid_argument("order must be nonnegative");
    double q = 1.0;
    for (int i = guaranteed_order + 1; i <= n; ++i)
        q *= std::min(c / static_cast<double>(i), 1.0);
    return q;
}

int cmf99_order(double tau_bar) {
    if (tau_bar < 0.0 || !std::isfinite(tau_bar))
        throw std::invalid_argument("tau_bar must be finite and >= 0");
    if (tau_bar == 0.0) return 0;

    // Sum Poisson mass relative to the modal term so the scan stays in
    // range for any rate.
    const int mode = static_cast<int>(std::floor(tau_bar));
    std::vector<double> below;  // k = mode-1 down to 0
    double r = 1.0;
    for (int k = mode; k >= 1; --k) {
        r *= static_cast<double>(k) / tau_bar;  // pmf(k-1)/pmf(mode)
        below.push_back(r);
        if (r < 1e-18) break;
    }
    double total = 1.0;
    for (double v : below) total += v;

    std::vector<double> above;  // k = mode+1 upwards
    r = 1.0;
    for (int k = mode + 1;; ++k) {
        r *= tau_bar / static_cast<double>(k);
        above.push_back(r);
        total += r;
        if (r < 1e-18 && k > mode + 4) break;
    }

    // Walk the CMF from k = 0 until it reaches 99% of the total mass.
    const double target = 0.99 * total;
    double cmf = 0.0;
    for (int k = static_cast<int>(below.size()) - 1; k >= 0; --k) {
        cmf += below[static_cast<std::size_t>(k)];
        const int order = mode - 1 - k;
        if (cmf >= target) return order;
    }
    cmf += 1.0;
    if (cmf >= target) return mode;
    for (std::size_t i = 0; i < above.size(); ++i) {
        cmf += above[i];
        if (cmf >= target) return mode + 1 + static_cast<int>(i);
    }
    return mode + 1 + static_cast<int>(above.size());
}

double cmf_sample_count_fit(double tau_bar) {
    if (tau_bar < 0.0)
        throw std::invalid_argument("tau_bar must be nonnegative");
    return std::cbrt((0.015 + tau_bar) * (0.65 + tau_bar) * (60.3 + tau_bar));
}

int cmf_expected_samples(double tau_bar) {
    return static_cast<int>(std::ceil(cmf_sample_count_fit(tau_bar)));
}

int tuple_size(double tau_bar) {
    static const double aggressive_expected = bk_expected_order(2.0, 0.9);
    const double n_cmf = cmf_expected_samples(tau_bar);
    const double m = std::floor(n_cmf / (aggressive_expected + 1.0) + 0.5);
    return std::max(1, static_cast<int>(m));
}

RouletteSpec pseries_cmf_roulette(double tau_bar) {
    return RouletteSpec{tau_bar, cmf99_order(tau_bar), 0.0};
}

}  // namespace murk
