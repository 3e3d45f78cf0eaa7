#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace acs {

/// Complete numeric table: response vector plus feature matrix.
/// Immutable after load; concurrent readers are safe.
struct Dataset {
    Eigen::MatrixXd features;               // N x p
    Eigen::VectorXd response;               // length N
    std::vector<std::string> feature_names; // size p (may be synthesized)

    Eigen::Index n_rows() const { return features.rows(); }
    Eigen::Index n_features() const { return features.cols(); }
};

enum class PartitionMode { contiguous, random_shuffle };

/// Disjoint cover of row indices {0..N-1} by m segments whose sizes
/// differ by at most one (remainder rows go one each to the leading
/// segments). Reproducible from (N, m, seed, mode).
struct Partition {
    int m = 0;
    std::vector<std::vector<Eigen::Index>> segments;
    std::uint64_t seed = 0;
    PartitionMode mode = PartitionMode::contiguous;
};

/// Per-feature sample mean and variance (divisor N-1), captured when a
/// dataset is standardized so the same affine map can be reused.
struct StandardizationMoments {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
};

/// Throws DataError unless the dataset satisfies its invariants:
/// at least one row and one feature, matching response length, all
/// entries finite.
void validate(const Dataset& ds);

/// Parse a comma-delimited numeric table with a header row. The response
/// column is selected by header name, or by 0-based file position when
/// the selector does not match any name and parses as an integer.
/// Remaining columns become features in file order.
Dataset load_csv(const std::string& path, const std::string& response_column);

/// Center and scale every feature to sample mean 0, sample variance 1
/// (divisor N-1). The response is untouched. Features with variance
/// below eps are refused by name. Idempotent within round-off.
std::pair<Dataset, StandardizationMoments> standardize(const Dataset& ds, double eps = 1e-12);

/// Split row indices {0..n_rows-1} into m segments. Contiguous mode keeps
/// file order; random_shuffle permutes rows with the seeded generator
/// first. Requires 1 <= m <= n_rows.
Partition make_partition(Eigen::Index n_rows, int m, std::uint64_t seed, PartitionMode mode);
Partition make_partition(const Dataset& ds, int m, std::uint64_t seed, PartitionMode mode);

} // namespace acs
