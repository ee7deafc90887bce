// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "murk/scenario.hpp"

namespace murk {
namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string csv_to_string(std::vector<SummaryRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const SummaryRow& a, const SummaryRow& b) {
                  if (a.scenario != b.scenario) return a.scenario < b.scenario;
                  if (a.estimator != b.estimator)
                      return a.estimator < b.estimator;
                  return a.sweep_value < b.sweep_value;
              });
    const bool with_oracles =
        std::any_of(rows.begin(), rows.end(), [](const SummaryRow& r) {
            return r.oracle_variance || r.oracle_cost;
        });

    std::ostringstream out;
    out << "scenario,estimator,sweep_param,sweep_value,trials,mean,variance,"
           "mse,std_error,mean_cost,efficiency,reference_T";
    if (with_oracles) out << ",oracle_variance,oracle_cost";
    out << '\n';
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.estimator << ',' << r.sweep_param << ','
            << format_double(r.sweep_value) << ',' << r.trials << ','
            << format_double(r.mean) << ',' << format_double(r.variance) << ','
            << format_double(r.mse) << ',' << format_double(r.std_error) << ','
            << format_double(r.mean_cost) << ','
            << format_double(r.efficiency) << ','
            << format_double(r.reference);
        if (with_oracles) {
            out << ',';
            if (r.oracle_variance) out << format_double(*r.oracle_variance);
            out << ',';
            if (r.oracle_cost) out << format_double(*r.oracle_cost);
        }
        out << '\n';
    }
    return out.str();
}

void emit_csv(std::vector<SummaryRow> rows, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file << csv_to_string(std::move(rows));
    if (!file) throw std::runtime_error("write failed: " + path);
}

void write_pgm(const GrayImage& image, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    double peak = 0.0;
    for (double v : image.pixels) peak = std::max(peak, v);
    file << "P2\n# " << image.name << " peak " << format_double(peak) << "\n"
         << image.width << ' ' << image.height << "\n255\n";
    // Rows are stored bottom-first; PGM wants the top row first.
    for (int j = image.height - 1; j >= 0; --j) {
        for (int i = 0; i < image.width; ++i) {
            const double v =
                image.pixels[static_cast<std::size_t>(j) *
                                 static_cast<std::size_t>(image.width) +
                             static_cast<std::size_t>(i)];
            const int gray =
                peak > 0.0
                    ? static_cast<int>(std::lround(255.0 * v / peak))
                    : 0;
            file << gray << (i + 1 == image.width ? '\n' : ' ');
        }
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace murk
