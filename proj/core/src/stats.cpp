// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace murk {

void MomentAccumulator::push(double x) {
    const double n1 = n;
    n += 1.0;
    const double delta = x - mean;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean += delta_n;
    m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) +
          6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
    m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
    m2 += term1;
}

MomentAccumulator MomentAccumulator::combine(const MomentAccumulator& a,
                                             const MomentAccumulator& b) {
    if (a.n == 0.0) return b;
    if (b.n == 0.0) return a;
    MomentAccumulator r;
    const double na = a.n, nb = b.n;
    r.n = na + nb;
    const double delta = b.mean - a.mean;
    const double delta2 = delta * delta;
    r.mean = a.mean + delta * nb / r.n;
    r.m2 = a.m2 + b.m2 + delta2 * na * nb / r.n;
    r.m3 = a.m3 + b.m3 +
           delta * delta2 * na * nb * (na - nb) / (r.n * r.n) +
           3.0 * delta * (na * b.m2 - nb * a.m2) / r.n;
    r.m4 = a.m4 + b.m4 +
           delta2 * delta2 * na * nb * (na * na - na * nb + nb * nb) /
               (r.n * r.n * r.n) +
           6.0 * delta2 * (na * na * b.m2 + nb * nb * a.m2) / (r.n * r.n) +
           4.0 * delta * (na * b.m3 - nb * a.m3) / r.n;
    return r;
}

double MomentAccumulator::variance() const {
    return n > 1.0 ? m2 / (n - 1.0) : 0.0;
}

double MomentAccumulator::std_error() const {
    return n > 1.0 ? std::sqrt(variance() / n) : 0.0;
}

double MomentAccumulator::variance_std_error() const {
    if (n < 4.0) return 0.0;
    const double var = variance();
    const double central4 = m4 / n;
    const double var_of_var =
        (central4 - var * var * (n - 3.0) / (n - 1.0)) / n;
    return var_of_var > 0.0 ? std::sqrt(var_of_var) : 0.0;
}

TrialStats TrialStats::combine(const TrialStats& a, const TrialStats& b) {
    TrialStats r;
    r.value = MomentAccumulator::combine(a.value, b.value);
    r.cost = MomentAccumulator::combine(a.cost, b.cost);
    r.mse_sum = a.mse_sum + b.mse_sum;
    r.n = a.n + b.n;
    return r;
}

namespace {
constexpr std::uint64_t kChunk = 4096;
}

TrialStats run_trials(std::uint64_t begin, std::uint64_t end, int workers,
                      double reference, const TrialFn& trial,
                      TrialStats carry) {
    TrialStats total = carry;
    if (end <= begin) return total;
    // Chunks live on the absolute trial-index grid, so runs extended at
    // chunk-aligned boundaries reduce exactly like one big run.
    const std::uint64_t first_chunk = begin / kChunk;
    const std::uint64_t chunks = (end - 1) / kChunk - first_chunk + 1;

    auto reduce_chunk = [&](std::uint64_t chunk_index) {
        TrialStats stats;
        const std::uint64_t lo =
            std::max(begin, (first_chunk + chunk_index) * kChunk);
        const std::uint64_t hi =
            std::min(end, (first_chunk + chunk_index + 1) * kChunk);
        for (std::uint64_t t = lo; t < hi; ++t) {
            const auto [estimate, cost] = trial(t);
            stats.value.push(estimate);
            stats.cost.push(cost);
            const double err = estimate - reference;
            stats.mse_sum += err * err;
            ++stats.n;
        }
        return stats;
    };

    int thread_count = workers > 0
                           ? workers
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (thread_count < 1) thread_count = 1;
    thread_count = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(thread_count), chunks));

    std::vector<TrialStats> partial(chunks);
    if (thread_count == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) partial[c] = reduce_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= chunks) return;
                partial[c] = reduce_chunk(c);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& p : partial) total = TrialStats::combine(total, p);
    return total;
}

}  // namespace murk
