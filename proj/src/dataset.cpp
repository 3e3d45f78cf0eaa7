#include "acs/dataset.hpp"

#include "acs/errors.hpp"
#include "acs/rng.hpp"
#include "acs/stable_sum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace acs {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.emplace_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

/// Locale-independent double parse; the whole field must be consumed.
bool parse_double(std::string_view field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !field.empty();
}

} // namespace

void validate(const Dataset& ds) {
    if (ds.n_rows() < 1) throw DataError("dataset has no rows");
    if (ds.n_features() < 1) throw DataError("dataset has no feature columns");
    if (ds.response.size() != ds.n_rows())
        throw DataError("response length " + std::to_string(ds.response.size()) +
                        " does not match row count " + std::to_string(ds.n_rows()));
    if (!ds.features.allFinite() || !ds.response.allFinite())
        throw DataError("dataset contains NaN or infinite entries");
    if (!ds.feature_names.empty() && ds.feature_names.size() != static_cast<std::size_t>(ds.n_features()))
        throw DataError("feature name count does not match feature count");
}

Dataset load_csv(const std::string& path, const std::string& response_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty table: '" + path + "' has no header row");
    std::vector<std::string> header = split_fields(line);

    // Resolve the response column: exact header name first, then a
    // 0-based position for purely numeric selectors.
    std::size_t resp = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == response_column) { resp = c; break; }
    if (resp == header.size()) {
        int idx = -1;
        auto [ptr, ec] = std::from_chars(response_column.data(),
                                         response_column.data() + response_column.size(), idx);
        if (ec == std::errc{} && ptr == response_column.data() + response_column.size() &&
            idx >= 0 && static_cast<std::size_t>(idx) < header.size())
            resp = static_cast<std::size_t>(idx);
    }
    if (resp == header.size())
        throw DataError("response column not found: '" + response_column + "'");
    if (header.size() < 2)
        throw DataError("empty table: no feature columns besides the response");

    const std::size_t width = header.size();
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != width)
            throw DataError("line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(width));
        std::vector<double> vals(width);
        for (std::size_t c = 0; c < width; ++c) {
            double v;
            if (!parse_double(fields[c], v))
                throw DataError("non-numeric cell \"" + fields[c] + "\" at line " +
                                std::to_string(line_no) + ", column '" + header[c] + "'");
            if (!std::isfinite(v))
                throw DataError("non-finite value at line " + std::to_string(line_no) +
                                ", column '" + header[c] + "'");
            vals[c] = v;
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw DataError("empty table: '" + path + "' has no data rows");

    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index p = static_cast<Eigen::Index>(width - 1);
    Dataset ds;
    ds.features.resize(n, p);
    ds.response.resize(n);
    ds.feature_names.reserve(static_cast<std::size_t>(p));
    for (std::size_t c = 0; c < width; ++c)
        if (c != resp) ds.feature_names.push_back(header[c]);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index k = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (c == resp)
                ds.response(i) = rows[static_cast<std::size_t>(i)][c];
            else
                ds.features(i, k++) = rows[static_cast<std::size_t>(i)][c];
        }
    }
    validate(ds);
    return ds;
}

std::pair<Dataset, StandardizationMoments> standardize(const Dataset& ds, double eps) {
    validate(ds);
    const Eigen::Index n = ds.n_rows();
    const Eigen::Index p = ds.n_features();
    if (n < 2) throw DataError("standardize requires at least 2 rows");

    StandardizationMoments mom;
    mom.mean.resize(p);
    mom.variance.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        StableSum sum, sumsq;
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = ds.features(i, j);
            sum.add(v);
            sumsq.add(v * v);
        }
        double mean = sum.get() / static_cast<double>(n);
        double var = (sumsq.get() - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
        if (var < 0.0) var = 0.0; // round-off guard
        if (var <= eps) {
            std::string name = ds.feature_names.empty() ? ("#" + std::to_string(j))
                                                        : ds.feature_names[static_cast<std::size_t>(j)];
            throw DataError("near-constant feature '" + name + "' (variance " +
                            std::to_string(var) + ") cannot be standardized");
        }
        mom.mean(j) = mean;
        mom.variance(j) = var;
    }

    Dataset out = ds;
    for (Eigen::Index j = 0; j < p; ++j)
        out.features.col(j) = (ds.features.col(j).array() - mom.mean(j)) / std::sqrt(mom.variance(j));
    return {std::move(out), std::move(mom)};
}

Partition make_partition(Eigen::Index n_rows, int m, std::uint64_t seed, PartitionMode mode) {
    if (m < 1) throw DataError("segment count m must be at least 1");
    if (static_cast<Eigen::Index>(m) > n_rows)
        throw DataError("segment count m = " + std::to_string(m) + " exceeds row count " +
                        std::to_string(n_rows));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_rows));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    if (mode == PartitionMode::random_shuffle) {
        Rng rng(seed);
        rng.shuffle(order);
    }

    Partition part;
    part.m = m;
    part.seed = seed;
    part.mode = mode;
    part.segments.resize(static_cast<std::size_t>(m));
    const Eigen::Index base = n_rows / m;
    const Eigen::Index rem = n_rows % m;
    std::size_t pos = 0;
    for (int l = 0; l < m; ++l) {
        Eigen::Index size = base + (l < rem ? 1 : 0);
        auto& seg = part.segments[static_cast<std::size_t>(l)];
        seg.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                   order.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(size)));
        std::sort(seg.begin(), seg.end()); // canonical order within a segment
        pos += static_cast<std::size_t>(size);
    }
    return part;
}

Partition make_partition(const Dataset& ds, int m, std::uint64_t seed, PartitionMode mode) {
    return make_partition(ds.n_rows(), m, seed, mode);
}

} // namespace acs
