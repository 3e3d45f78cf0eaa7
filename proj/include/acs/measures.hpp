#pragma once

#include "acs/kernels.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace acs {

/// A correlation measure: ordered component kernels plus the map g that
/// combines the component means into one nonnegative strength value.
/// Immutable and shareable; g is pure.
struct MeasureSpec {
    std::string name;
    std::vector<ComponentKernel> kernels;
    std::function<double(std::span<const double>)> aggregate_g;
    bool requires_standardized_features = false;
    double eps = 1e-12;

    int s() const { return static_cast<int>(kernels.size()); }
    int max_degree() const {
        int d = 0;
        for (const auto& k : kernels) d = std::max(d, k.degree);
        return d;
    }
};

/// |(t1 - t2*t3) / sqrt((t4 - t2^2)(t5 - t3^2))| with t = (E XY, E X,
/// E Y, E X^2, E Y^2). Throws DegenerateDenominator when a variance
/// term is not positive.
double g_pearson(double t1, double t2, double t3, double t4, double t5, double eps = 1e-12);

/// |t1 - 1/4| where t1 is the concordance probability estimate.
double g_kendall(double t1);

/// Identity clamped below at 0; the population value is nonnegative but
/// the aggregated sample value may dip slightly negative.
double g_sirs(double t1);

/// (t1 + t2*t3 - 2*t4) / sqrt((t5 + t2^2 - 2*t6)(t7 + t3^2 - 2*t8)),
/// numerator clamped below at 0. Throws DegenerateDenominator when a
/// denominator factor is not positive.
double g_dc(double t1, double t2, double t3, double t4, double t5, double t6, double t7,
            double t8, double eps = 1e-12);

/// One of: pearson (s=5, all degree 1), kendall (s=1, degree 2),
/// sirs (s=1, degree 3, standardized features), dc (s=8, degrees
/// 2,2,2,3,2,3,2,3). Throws DataError for other names.
MeasureSpec builtin_measure(const std::string& name);

/// Names accepted by builtin_measure, in canonical order.
const std::vector<std::string>& builtin_measure_names();

} // namespace acs
