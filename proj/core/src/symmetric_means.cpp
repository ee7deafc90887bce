// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/symmetric_means.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace murk {
namespace {

void check_order(std::size_t n, int order) {
    if (order < 0 || static_cast<std::size_t>(order) > n)
        throw std::invalid_argument("order must satisfy 0 <= Z <= N");
}

}  // namespace

SymmetricMeansAccumulator::SymmetricMeansAccumulator(int max_order) {
    if (max_order < 0)
        throw std::invalid_argument("max_order must be nonnegative");
    means_.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
    means_[0] = 1.0;
}

void SymmetricMeansAccumulator::push(double x) {
    ++count_;
    const int top = std::min(count_, max_order());
    const double inv_n = 1.0 / static_cast<double>(count_);
    for (int k = top; k >= 1; --k) {
        means_[k] += static_cast<double>(k) * inv_n *
                     (means_[k - 1] * x - means_[k]);
    }
}

std::vector<double> means_naive(std::span<const double> xs, int order) {
    const std::size_t n = xs.size();
    if (n > 20)
        throw std::invalid_argument(
            "means_naive enumerates 2^N subsets; N > 20 refused");
    check_order(n, order);

    std::vector<double> sums(static_cast<std::size_t>(order) + 1, 0.0);
    sums[0] = 1.0;
    const std::uint32_t subsets = 1u << n;
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
        const int k = __builtin_popcount(mask);
        if (k > order) continue;
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) prod *= xs[i];
        sums[static_cast<std::size_t>(k)] += prod;
    }
    std::vector<double> means(sums.size());
    for (int k = 0; k <= order; ++k)
        means[static_cast<std::size_t>(k)] =
            sums[static_cast<std::size_t>(k)] /
            binomial(static_cast<int>(n), k);
    return means;
}

std::vector<double> means_girard_newton(std::span<const double> xs,
                                        int order) {
    const std::size_t n = xs.size();
    check_order(n, order);

    // Power sums P_i = sum x^i, i = 1..Z.
    std::vector<double> power(static_cast<std::size_t>(order) + 1, 0.0);
    for (double x : xs) {
        double p = 1.0;
        for (int i = 1; i <= order; ++i) {
            p *= x;
            power[static_cast<std::size_t>(i)] += p;
        }
    }

    // e_k = (1/k) sum_{i=1}^{k} (-1)^{i-1} e_{k-i} P_i
    std::vector<double> elem(static_cast<std::size_t>(order) + 1, 0.0);
    elem[0] = 1.0;
    for (int k = 1; k <= order; ++k) {
        double acc = 0.0;
        double sign = 1.0;
        for (int i = 1; i <= k; ++i) {
            acc += sign * elem[static_cast<std::size_t>(k - i)] *
                   power[static_cast<std::size_t>(i)];
            sign = -sign;
        }
        elem[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
    }

    std::vector<double> means(elem.size());
    for (int k = 0; k <= order; ++k)
        means[static_cast<std::size_t>(k)] =
            elem[static_cast<std::size_t>(k)] /
            binomial(static_cast<int>(n), k);
    return means;
}

std::vector<double> means_incremental(std::span<const double> xs, int order) {
    check_order(xs.size(), order);
    SymmetricMeansAccumulator acc(order);
    for (double x : xs) acc.push(x);
    return acc.means();
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

}  // namespace murk
