#pragma once

#include "acs/aggregate.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace acs {

/// Outcome of one screening pass: which features survive and the
/// threshold that defined survival. Degenerate (flagged) features are
/// never retained under either rule.
struct ScreenResult {
    std::vector<Eigen::Index> retained; // sorted ascending
    double gamma = 0.0;
    std::string rule;                   // "threshold" | "top-k"
    EstimateVector estimates;           // the vector that was screened
};

/// Screening quality over repetitions. Medians use the lower-middle
/// order statistic so integer inputs stay integers.
struct MetricsReport {
    double ssr = 0.0;    // fraction of repetitions retaining every true feature
    double ms = 0.0;     // median retained-set size
    double std_ms = 0.0; // sample standard deviation of the sizes
    double psr = 0.0;    // median |true ∩ retained| / |true|
    double fdr = 0.0;    // median |retained \ true| / |retained|, 0 when empty
    std::vector<std::vector<Eigen::Index>> retained_sets; // raw per-repetition sets
};

/// Keep features whose estimate is >= gamma (gamma must be positive).
ScreenResult threshold_screen(const EstimateVector& est, double gamma);

/// Keep the k largest estimates, ties broken toward the lower index;
/// records the smallest retained value as gamma. k must not exceed the
/// number of non-degenerate features.
ScreenResult top_k_screen(const EstimateVector& est, Eigen::Index k);

/// gamma = rho * (smallest centralized estimate among the true active
/// features); evaluation-only device for simulations. Throws
/// DegeneracyError when an active feature is itself degenerate.
double oracle_threshold(const EstimateVector& centralized,
                        const std::vector<Eigen::Index>& true_active, double rho);

/// Aggregate SSR / MS / Std(MS) / PSR / FDR over repetitions.
MetricsReport evaluate_repetitions(const std::vector<ScreenResult>& results,
                                   const std::vector<Eigen::Index>& true_active);

/// Root-mean-squared deviation from a known truth.
double rmse(const std::vector<double>& estimates_over_reps, double truth);

/// Lower-middle order statistic (deterministic median for even sizes).
double lower_median(std::vector<double> v);

} // namespace acs
