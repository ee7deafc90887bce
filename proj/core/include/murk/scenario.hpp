// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "murk/density.hpp"
#include "murk/estimators.hpp"
#include "murk/stats.hpp"

namespace murk {

/// Parameter an estimator sweep varies across its value list.
enum class SweepParam {
    None,
    Pivot,             // control optical depth tau_c
    ExpansionC,        // roulette expansion parameter
    QuerySize,         // lookups per depth estimate
    MajorantScale,
    ControlThickness,  // ray-marching budget knob
    Average,           // independent evaluations averaged per estimate
};

struct Sweep {
    SweepParam param = SweepParam::None;
    std::vector<double> values;
};

enum class ReferenceKind {
    ExactTau,    // closed form where the profile has one
    Quadrature,  // force the adaptive quadrature path
};

struct EstimatorEntry {
    std::string label;
    EstimatorSpec spec;
    bool global_majorant = false;  // slab mode: share the scene-wide bound
};

/// Slab scenarios trace one ray per pixel through a fractal cross-section,
/// with density rising along the image vertical so the top row reaches
/// max_optical_depth.
struct SlabSpec {
    int width = 128;
    int height = 128;
    int octaves = 4;
    double lacunarity = 2.0;
    double gain_left = 0.45;   // fractal gain ramps across the image,
    double gain_right = 0.65;  // raising the fractal dimension left to right
    double base_frequency = 4.0;
    std::uint64_t noise_seed = 7;
    double max_optical_depth = 10.0;
};

struct ScenarioConfig {
    std::string name;
    DensityProfile field = ConstantProfile{1.0};
    Interval interval{0.0, 1.0};
    std::vector<EstimatorEntry> estimators;
    std::uint64_t trials = 1 << 16;
    std::uint64_t max_trials = 0;  // 0: 16x trials
    std::uint64_t seed = 1;
    Sweep sweep;
    ReferenceKind reference = ReferenceKind::ExactTau;
    std::optional<SlabSpec> slab;  // when set, `field` is ignored
};

struct SummaryRow {
    std::string scenario;
    std::string estimator;
    std::string sweep_param = "none";
    double sweep_value = 0.0;
    std::uint64_t trials = 0;
    double mean = 0.0;
    double variance = 0.0;
    double mse = 0.0;
    double std_error = 0.0;
    double mean_cost = 0.0;
    double efficiency = 0.0;
    double reference = 0.0;
    std::optional<double> oracle_variance;
    std::optional<double> oracle_cost;
    double variance_std_error = 0.0;  // gate bookkeeping; not serialized
};

struct GrayImage {
    std::string name;
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  // row-major, bottom row first
};

struct ScenarioResult {
    std::vector<SummaryRow> rows;
    std::vector<GrayImage> images;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runs every estimator x sweep point of one scenario. Trial t of row r
/// draws from the substream (seed, name, r, t); aggregation is chunked and
/// combined in trial order, so output is identical for any worker count.
ScenarioResult run_scenario(const ScenarioConfig& config, int workers = 0);

/// The named scenario set shipped with the tool (pivot sweeps, fluctuation
/// sweeps, convergence and endpoint-matching curves, the slab image).
std::vector<ScenarioConfig> builtin_scenarios();

/// Oracle gate: true when every row carrying an oracle value agrees with it
/// within `tolerance`, beyond what its own sampling noise (4 sigma) allows.
bool oracle_gate_passes(const std::vector<SummaryRow>& rows,
                        double tolerance = 0.05);

// --- serialization ------------------------------------------------------------

std::string csv_to_string(std::vector<SummaryRow> rows);
void emit_csv(std::vector<SummaryRow> rows, const std::string& path);
void write_pgm(const GrayImage& image, const std::string& path);

/// Parses a JSON scenario file (see README for the schema). Throws
/// ConfigError with position diagnostics on malformed input.
std::vector<ScenarioConfig> parse_config_file(const std::string& path);
std::vector<ScenarioConfig> parse_config_text(const std::string& text);

}  // namespace murk
