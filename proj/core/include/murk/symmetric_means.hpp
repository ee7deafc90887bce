// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace murk {

/// Streaming computation of elementary symmetric means m_0..m_Z.
///
/// Appending a sample x to a set of n reads, for k from min(n+1, Z) down
/// to 1,
///     m_k += (k / (n+1)) * (m_{k-1} * x - m_k),
/// which follows from e_k^{n+1} = e_k^n + e_{k-1}^n x and m_k = e_k / C(n,k).
/// The update never differences large same-sign partial sums, which keeps it
/// far better conditioned than the Girard-Newton route on offset-heavy data.
class SymmetricMeansAccumulator {
  public:
    explicit SymmetricMeansAccumulator(int max_order);

    void push(double x);

    /// m_0..m_Z; orders above count() are zero.
    const std::vector<double>& means() const { return means_; }
    int count() const { return count_; }
    int max_order() const { return static_cast<int>(means_.size()) - 1; }

  private:
    std::vector<double> means_;
    int count_ = 0;
};

/// Exhaustive 2^N oracle; refuses N > 20. Test/reference use.
std::vector<double> means_naive(std::span<const double> xs, int order);

/// Girard-Newton recurrence over power sums, O(N Z). Fast but can lose
/// precision to cancellation when samples share a large common offset.
std::vector<double> means_girard_newton(std::span<const double> xs, int order);

/// Batch form of SymmetricMeansAccumulator, O(N Z). Matches the streaming
/// accumulator bit for bit.
std::vector<double> means_incremental(std::span<const double> xs, int order);

/// C(n, k) as a double (exact for every value below 2^53).
double binomial(int n, int k);

}  // namespace murk
