#include "acs/io.hpp"

#include "acs/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace acs {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string fnv1a_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t hash = fnv1a(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return out;
}

std::string estimates_csv(const EstimateVector& est, const std::vector<std::string>& names) {
    if (names.size() != static_cast<std::size_t>(est.values.size()))
        throw DataError("feature name count does not match estimate count");
    std::string out = "feature,estimate,method,m,degenerate,dropped_segments\n";
    for (Eigen::Index j = 0; j < est.values.size(); ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        out += names[i];
        out += ',';
        out += format_double(est.values[j]);
        out += ',';
        out += est.method;
        out += ',';
        out += std::to_string(est.m);
        out += ',';
        out += est.degenerate[i] ? '1' : '0';
        out += ',';
        out += std::to_string(est.dropped_segments[i]);
        out += '\n';
    }
    return out;
}

std::string retained_csv(const ScreenResult& res, const std::vector<std::string>& names) {
    std::string out = "feature,index,estimate\n";
    for (Eigen::Index j : res.retained) {
        out += names[static_cast<std::size_t>(j)];
        out += ',';
        out += std::to_string(j);
        out += ',';
        out += format_double(res.estimates.values[j]);
        out += '\n';
    }
    return out;
}

std::string metrics_csv(const std::vector<MetricsCsvRow>& rows) {
    std::string out = "m,measure,method,SSR,MS,Std(MS),PSR,FDR,Time^n,Time^N\n";
    for (const MetricsCsvRow& row : rows) {
        out += std::to_string(row.m);
        out += ',';
        out += row.measure;
        out += ',';
        out += row.method;
        out += ',';
        out += format_double(row.metrics.ssr);
        out += ',';
        out += format_double(row.metrics.ms);
        out += ',';
        out += format_double(row.metrics.std_ms);
        out += ',';
        out += format_double(row.metrics.psr);
        out += ',';
        out += format_double(row.metrics.fdr);
        out += ',';
        out += format_double(row.time_n);
        out += ',';
        out += format_double(row.time_N);
        out += '\n';
    }
    return out;
}

std::string rmse_csv(const std::vector<RmseRow>& rows) {
    std::string out = "measure,method,m,RMSE\n";
    for (const RmseRow& row : rows) {
        out += row.measure;
        out += ',';
        out += row.method;
        out += ',';
        out += std::to_string(row.m);
        out += ',';
        out += format_double(row.rmse);
        out += '\n';
    }
    return out;
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["command"] = manifest.command;
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    for (const auto& [key, value] : manifest.flags) flags[key] = value;
    doc["flags"] = flags;
    doc["seed"] = manifest.seed;
    doc["version"] = manifest.version;
    if (!manifest.input_digest.empty()) doc["input_digest"] = manifest.input_digest;
    nlohmann::ordered_json timings = nlohmann::ordered_json::object();
    for (const auto& [key, value] : manifest.timings_seconds) timings[key] = value;
    doc["timings_seconds"] = timings;
    return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("short write to '" + path + "'");
}

} // namespace acs
