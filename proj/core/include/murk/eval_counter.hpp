// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace murk {

/// Counts extinction-coefficient lookups. One counter per trial; never
/// shared between concurrent trials. Incremented exactly once per lookup,
/// which is the cost unit of every efficiency number in this library.
class EvalCounter {
  public:
    void tally() { ++count_; }
    std::uint64_t count() const { return count_; }

  private:
    std::uint64_t count_ = 0;
};

}  // namespace murk
