// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include "murk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "murk/analytics.hpp"
#include "murk/quadrature.hpp"

namespace murk {
namespace {

constexpr double kRelativeSeTarget = 1e-3;
constexpr double kOracleVarSeTarget = 0.0125;

void validate(const ScenarioConfig& config) {
    if (config.name.empty()) throw ConfigError("scenario needs a name");
    if (config.trials < 2)
        throw ConfigError("scenario '" + config.name + "': trials must be >= 2");
    if (config.estimators.empty())
        throw ConfigError("scenario '" + config.name + "': no estimators");
    if (config.sweep.param != SweepParam::None && config.sweep.values.empty())
        throw ConfigError("scenario '" + config.name + "': empty sweep list");
    std::set<std::string> labels;
    for (const auto& e : config.estimators)
        if (!labels.insert(e.label).second)
            throw ConfigError("scenario '" + config.name +
                              "': duplicate estimator label '" + e.label + "'");
}

const char* sweep_param_name(SweepParam param) {
    switch (param) {
        case SweepParam::None: return "none";
        case SweepParam::Pivot: return "pivot";
        case SweepParam::ExpansionC: return "c";
        case SweepParam::QuerySize: return "query_size";
        case SweepParam::MajorantScale: return "majorant_scale";
        case SweepParam::ControlThickness: return "control_thickness";
        case SweepParam::Average: return "average";
    }
    return "none";
}

EstimatorSpec apply_sweep(EstimatorSpec spec, SweepParam param, double value,
                          const Interval& interval) {
    switch (param) {
        case SweepParam::None:
            break;
        case SweepParam::Pivot:
            // Sweep values are control optical depths tau_c.
            spec.control = value / interval.length();
            break;
        case SweepParam::ExpansionC: {
            RouletteSpec rl = spec.roulette.value_or(RouletteSpec{});
            rl.c = value;
            rl.guaranteed_order = static_cast<int>(std::floor(value));
            spec.roulette = rl;
            break;
        }
        case SweepParam::QuerySize:
            spec.query_size = static_cast<int>(value);
            break;
        case SweepParam::MajorantScale:
            spec.majorant_scale = value;
            break;
        case SweepParam::ControlThickness:
            spec.control_thickness = value;
            break;
        case SweepParam::Average:
            spec.average = static_cast<int>(value);
            break;
    }
    return spec;
}

/// A warp with zero-mass cells can never place a sample inside them; if the
/// residual density is alive there, every estimate silently loses that mass.
/// Probe such cells up front and abort the scenario instead.
void validate_warp_support(const DensityField& field, const Interval& interval,
                           const DepthSamplerSpec& sampler) {
    if (!sampler.warp || sampler.warp->is_uniform()) return;
    const auto& masses = sampler.warp->cell_masses();
    const double n = static_cast<double>(masses.size());
    EvalCounter scratch;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (masses[i] > 0.0) continue;
        for (int probe = 0; probe < 8; ++probe) {
            const double t = (static_cast<double>(i) +
                              (static_cast<double>(probe) + 0.5) / 8.0) /
                             n;
            const double mu_r = field.eval(interval.lerp(t), scratch) -
                                sampler.control_density;
            if (std::abs(mu_r) > 1e-12)
                throw SamplingSupportError(
                    "warp assigns zero mass to a cell with nonzero residual "
                    "density");
        }
    }
}

void validate_support(const DensityField& field, const Interval& interval,
                      const ResolvedEstimator& est) {
    validate_warp_support(field, interval, est.series.sampler);
    DepthSamplerSpec rm;
    rm.warp = est.ray_march.warp;
    rm.control_density = 0.0;
    validate_warp_support(field, interval, rm);
}

double reference_transmittance(const DensityField& field,
                               const Interval& interval, ReferenceKind kind) {
    double tau;
    if (kind == ReferenceKind::Quadrature) {
        EvalCounter scratch;
        tau = integrate_adaptive(
                  [&](double x) { return field.eval(x, scratch); },
                  interval.a, interval.b)
                  .value;
    } else {
        tau = field.optical_depth(interval);
    }
    return std::exp(-tau);
}

/// Closed-form references where they exist: constant profiles against the
/// Appendix-style formulas. Returns nothing for estimators or fields the
/// formulas do not cover.
void attach_oracles(SummaryRow& row, const DensityField& field,
                    const Interval& interval, const ResolvedEstimator& est) {
    const bool uniform =
        std::holds_alternative<ConstantProfile>(field.profile());
    if (!uniform) return;
    const double tau = field.optical_depth(interval);
    const double len = interval.length();
    switch (est.kind) {
        case EstimatorKind::DeltaTracking:
            row.oracle_variance = var_delta_tracking(tau);
            row.oracle_cost = cost_delta_tracking(est.majorant * len, tau);
            break;
        case EstimatorKind::Johnson:
            row.oracle_variance = var_johnson(tau, est.johnson_rounds);
            row.oracle_cost =
                cost_johnson(est.majorant * len, est.johnson_rounds);
            break;
        case EstimatorKind::RatioTracking:
            row.oracle_variance = var_rrt(field, interval, est.majorant, 0.0);
            row.oracle_cost = cost_rrt(est.majorant * len);
            break;
        case EstimatorKind::ResidualRatioTracking:
            row.oracle_variance =
                var_rrt(field, interval, est.majorant, est.control);
            row.oracle_cost = cost_rrt((est.majorant - est.control) * len);
            break;
        case EstimatorKind::TruncatedSeries:
        case EstimatorKind::SymmetrizedSeries: {
            // On uniform media the symmetric means of identical estimates
            // collapse to plain products, so one formula covers both, as
            // long as the draws are exact (iid uniform sampler) and the
            // roulette is the plain scheme.
            const auto& rl = est.series.roulette;
            if (rl.p_zero == 0.0 && est.average == 1 &&
                rl.c <= rl.guaranteed_order + 1.0) {
                row.oracle_variance = var_series_uniform(
                    tau, est.series.control * len, rl.c, rl.guaranteed_order);
                row.oracle_cost =
                    expected_order(rl) * est.series.sampler.query_size;
            }
            break;
        }
        default:
            break;
    }
}

SummaryRow finalize_row(const std::string& scenario, const std::string& label,
                        SweepParam param, double sweep_value,
                        const TrialStats& stats, double reference) {
    SummaryRow row;
    row.scenario = scenario;
    row.estimator = label;
    row.sweep_param = sweep_param_name(param);
    row.sweep_value = sweep_value;
    row.trials = stats.n;
    row.mean = stats.value.mean;
    row.variance = stats.value.variance();
    row.mse = stats.mse();
    row.std_error = stats.value.std_error();
    row.mean_cost = stats.cost.mean;
    row.reference = reference;
    row.variance_std_error = stats.value.variance_std_error();
    row.efficiency = (row.variance > 0.0 && row.mean_cost > 0.0)
                         ? 1.0 / (row.variance * row.mean_cost)
                         : std::numeric_limits<double>::infinity();
    return row;
}

std::vector<SummaryRow> run_standard(const ScenarioConfig& config,
                                     int workers) {
    const DensityField field(config.field, config.interval);
    const double reference =
        reference_transmittance(field, config.interval, config.reference);
    const std::uint64_t scenario_key = hash_name(config.name);
    const std::uint64_t cap =
        config.max_trials ? config.max_trials : config.trials * 16;

    std::vector<double> sweep_values = config.sweep.values;
    if (config.sweep.param == SweepParam::None) sweep_values = {0.0};

    std::vector<SummaryRow> rows;
    std::uint64_t row_index = 0;
    for (const auto& entry : config.estimators) {
        for (double sweep_value : sweep_values) {
            const EstimatorSpec spec =
                apply_sweep(entry.spec, config.sweep.param, sweep_value,
                            config.interval);
            const ResolvedEstimator est =
                resolve(field, config.interval, spec);
            validate_support(field, config.interval, est);

            const TrialFn trial = [&](std::uint64_t t) {
                Rng rng = Rng::substream(config.seed, scenario_key, row_index, t);
                EvalCounter counter;
                const TrialOutcome outcome =
                    run_trial(field, config.interval, est, rng, counter);
                return std::pair<double, double>(
                    outcome.estimate, static_cast<double>(outcome.evals_used));
            };

            SummaryRow row = finalize_row(config.name, entry.label,
                                          config.sweep.param, sweep_value,
                                          TrialStats{}, reference);
            attach_oracles(row, field, config.interval, est);

            // Raise the trial count until the mean (and, when an oracle is
            // attached, the variance) is resolved tightly enough, or the cap
            // is hit. The growth schedule is deterministic.
            TrialStats stats;
            std::uint64_t done = 0;
            std::uint64_t target = std::min(config.trials, cap);
            for (;;) {
                stats = run_trials(done, target, workers, reference, trial,
                                   stats);
                done = target;
                const double mean_scale =
                    std::max(std::abs(stats.value.mean), 1e-30);
                bool resolved =
                    stats.value.std_error() < kRelativeSeTarget * mean_scale;
                if (resolved && row.oracle_variance && stats.value.variance() > 0.0)
                    resolved = stats.value.variance_std_error() <
                               kOracleVarSeTarget * stats.value.variance();
                if (resolved || done >= cap) break;
                target = std::min(cap, done * 2);
            }

            row = finalize_row(config.name, entry.label, config.sweep.param,
                               sweep_value, stats, reference);
            attach_oracles(row, field, config.interval, est);
            rows.push_back(std::move(row));
            ++row_index;
        }
    }
    return rows;
}

ScenarioResult run_slab(const ScenarioConfig& config, int workers) {
    const SlabSpec& slab = *config.slab;
    const Interval interval = config.interval;
    const double len = interval.length();
    const std::uint64_t scenario_key = hash_name(config.name);

    struct Pixel {
        DensityField field;
        double reference;
        double majorant;
    };

    // One field per pixel: the fractal gain rises left to right and the
    // amplitude rises bottom to top so the top row reaches the requested
    // optical thickness.
    std::vector<Pixel> pixels;
    pixels.reserve(static_cast<std::size_t>(slab.width * slab.height));
    for (int j = 0; j < slab.height; ++j) {
        const double v = (static_cast<double>(j) + 0.5) /
                         static_cast<double>(slab.height);
        for (int i = 0; i < slab.width; ++i) {
            const double u = (static_cast<double>(i) + 0.5) /
                             static_cast<double>(slab.width);
            FractalSliceProfile profile;
            profile.octaves = slab.octaves;
            profile.lacunarity = slab.lacunarity;
            profile.gain =
                slab.gain_left + (slab.gain_right - slab.gain_left) * u;
            profile.seed = slab.noise_seed;
            profile.slice_coord = u;
            profile.base_frequency = slab.base_frequency;
            profile.amplitude = 1.0;
            DensityField probe(profile, interval);
            const double unit_majorant = probe.stats(interval).majorant;
            profile.amplitude =
                slab.max_optical_depth * v / (unit_majorant * len);
            DensityField field(profile, interval);
            const double reference =
                std::exp(-field.optical_depth(interval));
            pixels.push_back(
                {std::move(field), reference, slab.max_optical_depth * v / len});
        }
    }
    const double global_majorant = slab.max_optical_depth / len;

    ScenarioResult result;
    const std::uint64_t per_pixel = config.trials;
    std::uint64_t row_index = 0;
    for (const auto& entry : config.estimators) {
        GrayImage image;
        image.name = config.name + "_" + entry.label;
        image.width = slab.width;
        image.height = slab.height;
        image.pixels.assign(pixels.size(), 0.0);

        TrialStats aggregate;
        double variance_sum = 0.0;
        double mse_sum = 0.0;
        double reference_sum = 0.0;

        for (std::size_t p = 0; p < pixels.size(); ++p) {
            const Pixel& pixel = pixels[p];
            EstimatorSpec spec = entry.spec;
            if (entry.global_majorant) {
                // Express the shared bound as a per-pixel scale.
                spec.majorant_scale = std::max(
                    1.0, global_majorant /
                             std::max(pixel.majorant, 1e-300));
                spec.control_thickness = global_majorant * len;
            }
            const ResolvedEstimator est = resolve(pixel.field, interval, spec);
            const TrialFn trial = [&](std::uint64_t t) {
                Rng rng = Rng::substream(config.seed, scenario_key, row_index,
                                         static_cast<std::uint64_t>(p) * per_pixel + t);
                EvalCounter counter;
                const TrialOutcome outcome =
                    run_trial(pixel.field, interval, est, rng, counter);
                return std::pair<double, double>(
                    outcome.estimate, static_cast<double>(outcome.evals_used));
            };
            const TrialStats stats =
                run_trials(0, per_pixel, workers, pixel.reference, trial);
            image.pixels[p] = stats.value.variance();
            variance_sum += stats.value.variance();
            mse_sum += stats.mse();
            reference_sum += pixel.reference;
            aggregate = TrialStats::combine(aggregate, stats);
        }

        SummaryRow row;
        row.scenario = config.name;
        row.estimator = entry.label;
        row.trials = aggregate.n;
        row.mean = aggregate.value.mean;
        // Within-pixel statistics averaged over the image.
        row.variance = variance_sum / static_cast<double>(pixels.size());
        row.mse = mse_sum / static_cast<double>(pixels.size());
        row.std_error = aggregate.value.std_error();
        row.mean_cost = aggregate.cost.mean;
        row.reference = reference_sum / static_cast<double>(pixels.size());
        row.efficiency = (row.variance > 0.0 && row.mean_cost > 0.0)
                             ? 1.0 / (row.variance * row.mean_cost)
                             : std::numeric_limits<double>::infinity();
        result.rows.push_back(std::move(row));
        result.images.push_back(std::move(image));
        ++row_index;
    }
    return result;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, int workers) {
    validate(config);
    if (config.slab) return run_slab(config, workers);
    ScenarioResult result;
    result.rows = run_standard(config, workers);
    return result;
}

bool oracle_gate_passes(const std::vector<SummaryRow>& rows, double tolerance) {
    for (const auto& row : rows) {
        if (row.oracle_variance && *row.oracle_variance > 0.0) {
            const double deviation = std::abs(row.variance - *row.oracle_variance);
            if (deviation > tolerance * *row.oracle_variance &&
                deviation > 4.0 * row.variance_std_error)
                return false;
        }
        if (row.oracle_cost && *row.oracle_cost > 0.0) {
            const double deviation = std::abs(row.mean_cost - *row.oracle_cost);
            const double cost_se = row.trials > 1
                                       ? std::sqrt(std::max(row.mean_cost, 1.0) /
                                                   static_cast<double>(row.trials))
                                       : 0.0;
            if (deviation > tolerance * *row.oracle_cost &&
                deviation > 4.0 * cost_se)
                return false;
        }
    }
    return true;
}

}  // namespace murk
