#pragma once

#include "acs/dataset.hpp"
#include "acs/kernels.hpp"
#include "acs/measures.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace acs {

/// Per-feature correlation strength estimates under one strategy.
/// Degenerate features carry a 0.0 sentinel, a flag, and a line in
/// `issues` rather than aborting the whole run.
struct EstimateVector {
    std::string method;  // acs | sas | racs | centralized
    std::string measure;
    int m = 1;
    int R = 1;
    std::uint64_t seed = 0;
    Eigen::VectorXd values;                // length p, finite, >= 0
    std::vector<std::uint8_t> degenerate;  // length p
    std::vector<int> dropped_segments;     // length p; nonzero only for sas
    std::vector<std::string> issues;       // human-readable error ledger
};

struct AggregateOptions {
    bool naive = false;              // force subset enumeration (verification)
    int threads = 0;                 // 0 = ACS_THREADS env var, then hardware
    bool assume_standardized = false;
};

/// Component table exactly as the estimators consume it: fast paths
/// unless naive is forced, feature standardization applied when the
/// measure requires it. Exposed for debugging output.
ComponentTable measure_component_table(const Dataset& ds, const Partition& part,
                                       const MeasureSpec& spec,
                                       const AggregateOptions& opts = {});

/// Aggregate first, then apply g: values[j] = g of the across-segment
/// component means. The workhorse estimator.
EstimateVector acs_estimate(const Dataset& ds, const Partition& part, const MeasureSpec& spec,
                            const AggregateOptions& opts = {});

/// Average the measure's classic single-machine estimate over the
/// segments: each segment computes the estimate it would produce in
/// isolation, and the resulting strengths are averaged. Baseline for
/// comparison; degenerate segments are dropped per feature. For the
/// product-moment and concordance measures the classic local estimate
/// equals g applied to the segment's component U-statistics; the
/// ranking and distance measures use their all-pairs plug-in forms,
/// which are noticeably biased upward on small segments (and quadratic
/// in segment size for the distance measure).
EstimateVector sas_estimate(const Dataset& ds, const Partition& part, const MeasureSpec& spec,
                            const AggregateOptions& opts = {});

/// Average component means over R independent seeded random partitions,
/// then apply g once. R=1 reduces to acs_estimate on one random partition.
EstimateVector racs_estimate(const Dataset& ds, const MeasureSpec& spec, int m, int R,
                             std::uint64_t seed, const AggregateOptions& opts = {});

/// Single-segment estimate on the full sample.
EstimateVector centralized_estimate(const Dataset& ds, const MeasureSpec& spec,
                                    const AggregateOptions& opts = {});

} // namespace acs
