// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "murk/scenario.hpp"

namespace murk {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config error at " + where + ": " + what);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

DensityProfile parse_field(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "field must be an object");
    const std::string type = j.value("type", "");
    if (type == "constant") {
        return ConstantProfile{number(j.at("level"), where + ".level")};
    }
    if (type == "linear_ramp") {
        return LinearRampProfile{number(j.at("v0"), where + ".v0"),
                                 number(j.at("v1"), where + ".v1")};
    }
    if (type == "sine_sum") {
        SineSumProfile p;
        p.offset = number(j.at("offset"), where + ".offset");
        for (const auto& w : j.value("waves", json::array())) {
            if (!w.is_array() || w.size() != 3)
                fail(where + ".waves", "each wave is [amplitude, frequency, phase]");
            p.waves.push_back({w[0].get<double>(), w[1].get<double>(),
                               w[2].get<double>()});
        }
        return p;
    }
    if (type == "gaussian_mix") {
        GaussianMixProfile p;
        p.offset = j.value("offset", 0.0);
        for (const auto& b : j.value("bumps", json::array())) {
            if (!b.is_array() || b.size() != 3)
                fail(where + ".bumps", "each bump is [weight, center, width]");
            p.bumps.push_back({b[0].get<double>(), b[1].get<double>(),
                               b[2].get<double>()});
        }
        return p;
    }
    if (type == "grid") {
        GridProfile p;
        p.cell_width = number(j.at("cell_width"), where + ".cell_width");
        for (const auto& v : j.at("values")) p.values.push_back(v.get<double>());
        return p;
    }
    if (type == "fractal_slice") {
        FractalSliceProfile p;
        p.octaves = j.value("octaves", 4);
        p.lacunarity = j.value("lacunarity", 2.0);
        p.gain = j.value("gain", 0.5);
        p.seed = j.value("seed", 0ull);
        p.slice_coord = j.value("slice_coord", 0.0);
        p.amplitude = j.value("amplitude", 1.0);
        p.base_frequency = j.value("base_frequency", 4.0);
        return p;
    }
    fail(where + ".type", "unknown field type '" + type + "'");
}

EstimatorKind parse_kind(const std::string& kind, const std::string& where) {
    if (kind == "delta_tracking") return EstimatorKind::DeltaTracking;
    if (kind == "johnson") return EstimatorKind::Johnson;
    if (kind == "ratio_tracking") return EstimatorKind::RatioTracking;
    if (kind == "residual_ratio_tracking")
        return EstimatorKind::ResidualRatioTracking;
    if (kind == "single_term_poisson") return EstimatorKind::SingleTermPoisson;
    if (kind == "truncated_series") return EstimatorKind::TruncatedSeries;
    if (kind == "symmetrized_series") return EstimatorKind::SymmetrizedSeries;
    if (kind == "pseries_cmf") return EstimatorKind::PSeriesCmf;
    if (kind == "unbiased_ray_marching")
        return EstimatorKind::UnbiasedRayMarching;
    if (kind == "biased_ray_marching") return EstimatorKind::BiasedRayMarching;
    fail(where, "unknown estimator kind '" + kind + "'");
}

SamplePattern parse_pattern(const std::string& p, const std::string& where) {
    if (p == "iid") return SamplePattern::Iid;
    if (p == "comb") return SamplePattern::EquidistantComb;
    if (p == "golden") return SamplePattern::GoldenComb;
    if (p == "mirrored") return SamplePattern::MirroredComb;
    fail(where, "unknown sample pattern '" + p + "'");
}

EstimatorEntry parse_estimator(const json& j, const Interval& interval,
                               const std::string& where) {
    if (!j.is_object()) fail(where, "estimator must be an object");
    EstimatorEntry entry;
    const std::string kind = j.value("kind", "");
    entry.spec.kind = parse_kind(kind, where + ".kind");
    entry.label = j.value("label", kind);
    entry.spec.control = j.value("control", 0.0);
    entry.spec.majorant_scale = j.value("majorant_scale", 1.0);
    entry.spec.johnson_rounds = j.value("rounds", 1);
    entry.spec.average = j.value("average", 1);
    entry.spec.cost_match_bk = j.value("cost_match_bk", false);
    entry.global_majorant = j.value("global_majorant", false);
    if (j.contains("query_size"))
        entry.spec.query_size = j.at("query_size").get<int>();
    if (j.contains("control_thickness"))
        entry.spec.control_thickness = j.at("control_thickness").get<double>();
    if (j.contains("roulette")) {
        const auto& r = j.at("roulette");
        RouletteSpec rl;
        rl.c = r.value("c", 2.0);
        rl.guaranteed_order = r.value("K", static_cast<int>(rl.c));
        rl.p_zero = r.value("p_zero", 0.0);
        entry.spec.roulette = rl;
    }
    if (j.contains("sampler")) {
        const auto& s = j.at("sampler");
        DepthSamplerSpec& ds = entry.spec.depth_sampler;
        ds.query_size = s.value("query_size", 1);
        ds.pattern =
            parse_pattern(s.value("pattern", "iid"), where + ".sampler.pattern");
        ds.endpoint_matching = s.value("endpoint_matching", false);
        const std::string frame = s.value("epm_frame", "warped");
        if (frame == "warped") ds.epm_frame = EpmFrame::Warped;
        else if (frame == "world") ds.epm_frame = EpmFrame::WorldSpace;
        else fail(where + ".sampler.epm_frame", "expected 'warped' or 'world'");
        if (s.contains("warp_cells")) {
            std::vector<double> means;
            for (const auto& m : s.at("warp_cells")) means.push_back(m.get<double>());
            ds.warp = WarpMap::from_cell_means(means, interval);
        }
    }
    const std::string epm = j.value("epm", "auto");
    if (epm == "auto") entry.spec.epm_policy = EpmPolicy::Auto;
    else if (epm == "on") entry.spec.epm_policy = EpmPolicy::ForceOn;
    else if (epm == "off") entry.spec.epm_policy = EpmPolicy::ForceOff;
    else fail(where + ".epm", "expected 'auto', 'on' or 'off'");
    return entry;
}

SweepParam parse_sweep_param(const std::string& p, const std::string& where) {
    if (p == "pivot") return SweepParam::Pivot;
    if (p == "c") return SweepParam::ExpansionC;
    if (p == "query_size") return SweepParam::QuerySize;
    if (p == "majorant_scale") return SweepParam::MajorantScale;
    if (p == "control_thickness") return SweepParam::ControlThickness;
    if (p == "average") return SweepParam::Average;
    fail(where, "unknown sweep param '" + p + "'");
}

ScenarioConfig parse_scenario(const json& j, std::size_t index) {
    const std::string where = "scenarios[" + std::to_string(index) + "]";
    if (!j.is_object()) fail(where, "scenario must be an object");
    ScenarioConfig s;
    s.name = j.value("name", "");
    if (s.name.empty()) fail(where + ".name", "scenario needs a name");
    if (j.contains("interval")) {
        const auto& iv = j.at("interval");
        if (!iv.is_array() || iv.size() != 2)
            fail(where + ".interval", "expected [a, b]");
        try {
            s.interval = Interval(iv[0].get<double>(), iv[1].get<double>());
        } catch (const std::exception& e) {
            fail(where + ".interval", e.what());
        }
    }
    s.trials = j.value("trials", static_cast<std::uint64_t>(1 << 16));
    s.max_trials = j.value("max_trials", 0ull);
    s.seed = j.value("seed", 1ull);
    const std::string ref = j.value("reference", "exact");
    if (ref == "exact") s.reference = ReferenceKind::ExactTau;
    else if (ref == "quadrature") s.reference = ReferenceKind::Quadrature;
    else fail(where + ".reference", "expected 'exact' or 'quadrature'");

    if (j.contains("slab")) {
        const auto& sl = j.at("slab");
        SlabSpec slab;
        slab.width = sl.value("width", 128);
        slab.height = sl.value("height", 128);
        slab.octaves = sl.value("octaves", 4);
        slab.lacunarity = sl.value("lacunarity", 2.0);
        slab.gain_left = sl.value("gain_left", 0.45);
        slab.gain_right = sl.value("gain_right", 0.65);
        slab.base_frequency = sl.value("base_frequency", 4.0);
        slab.noise_seed = sl.value("noise_seed", 7ull);
        slab.max_optical_depth = sl.value("max_optical_depth", 10.0);
        s.slab = slab;
    } else {
        if (!j.contains("field")) fail(where, "missing field");
        s.field = parse_field(j.at("field"), where + ".field");
    }

    if (j.contains("sweep")) {
        const auto& sw = j.at("sweep");
        s.sweep.param = parse_sweep_param(sw.value("param", ""),
                                          where + ".sweep.param");
        for (const auto& v : sw.value("values", json::array()))
            s.sweep.values.push_back(v.get<double>());
        if (s.sweep.values.empty())
            fail(where + ".sweep.values", "sweep needs a nonempty value list");
    }

    if (!j.contains("estimators") || !j.at("estimators").is_array() ||
        j.at("estimators").empty())
        fail(where, "estimators must be a nonempty array");
    std::size_t k = 0;
    for (const auto& e : j.at("estimators"))
        s.estimators.push_back(parse_estimator(
            e, s.interval, where + ".estimators[" + std::to_string(k++) + "]"));
    return s;
}

}  // namespace

std::vector<ScenarioConfig> parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        if (!root.is_object() || !root.contains("scenarios") ||
            !root.at("scenarios").is_array())
            throw ConfigError("config must be {\"scenarios\": [...]}");
        std::vector<ScenarioConfig> out;
        std::size_t i = 0;
        for (const auto& s : root.at("scenarios"))
            out.push_back(parse_scenario(s, i++));
        if (out.empty()) throw ConfigError("config has no scenarios");
        return out;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
}

std::vector<ScenarioConfig> parse_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << file.rdbuf();
    return parse_config_text(text.str());
}

}  // namespace murk
