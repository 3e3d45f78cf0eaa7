#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace acs {

/// O(n log n) concordance U-statistic, exactly equal to the naive
/// pair enumeration with the symmetrized concordance kernel. Ties in
/// either coordinate are excluded (strict inequalities).
double u_kendall_fast(std::span<const double> xs, std::span<const double> ys);

/// O(n log n) triple product U-statistic (x_i1 * x_i2 over pairs below
/// each response anchor), exactly equal to the naive enumeration.
double u_sirs_fast(std::span<const double> xs, std::span<const double> ys);

/// Response-only precomputation for the distance-covariance components:
/// everything that does not involve the feature column, so one context
/// serves every feature within a segment.
struct DcResponseContext {
    std::vector<double> ys;       // copy of the segment response
    std::vector<double> rowsum_y; // per-anchor sum of |y_i - y_c|
    std::vector<double> sqy;      // per-anchor sum of |y_i - y_c|^2
    double t2 = 0.0;              // mean |y - y'| over pairs
    double t5 = 0.0;              // mean |y - y'|^2 over pairs
    double t6 = 0.0;              // triple (y, y) component
};

DcResponseContext make_dc_response_context(std::span<const double> ys);

/// All eight distance-covariance component U-statistics in O(n^2),
/// exactly equal to naive pair/triple enumeration. Order matches the
/// built-in measure's kernel list.
std::array<double, 8> u_dc_components_fast(std::span<const double> xs,
                                           const DcResponseContext& ctx);
std::array<double, 8> u_dc_components_fast(std::span<const double> xs,
                                           std::span<const double> ys);

} // namespace acs
