// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>
