#pragma once

#include "acs/aggregate.hpp"
#include "acs/screen.hpp"
#include "acs/sim.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace acs {

/// Shortest decimal string that round-trips the exact double, locale
/// independent. All numeric output funnels through here so reruns are
/// byte-stable.
std::string format_double(double value);

/// FNV-1a 64-bit digest, printed as 16 lowercase hex digits.
std::uint64_t fnv1a(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);

/// Per-feature estimate table:
/// feature,estimate,method,m,degenerate,dropped_segments
std::string estimates_csv(const EstimateVector& est, const std::vector<std::string>& names);

/// Surviving features in ascending index order: feature,index,estimate
std::string retained_csv(const ScreenResult& res, const std::vector<std::string>& names);

/// One screening-study table row per (m, measure, method).
struct MetricsCsvRow {
    int m = 0;
    std::string measure;
    std::string method;
    MetricsReport metrics;
    double time_n = 0.0; // distributed seconds per repetition
    double time_N = 0.0; // centralized seconds per repetition
};

/// Header: m,measure,method,SSR,MS,Std(MS),PSR,FDR,Time^n,Time^N
std::string metrics_csv(const std::vector<MetricsCsvRow>& rows);

/// Header: measure,method,m,RMSE
std::string rmse_csv(const std::vector<RmseRow>& rows);

/// Reproducibility record written alongside every command's outputs.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> flags; // stable order
    std::uint64_t seed = 0;
    std::string version;
    std::string input_digest; // empty when the command reads no file
    std::vector<std::pair<std::string, double>> timings_seconds;
};

/// JSON with fixed key order; timings are the only run-dependent bytes.
std::string manifest_json(const RunManifest& manifest);

/// Whole-file helpers; writes are atomic enough for single-process use.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace acs
