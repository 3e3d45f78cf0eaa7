#include "acs/screen.hpp"

#include "acs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace acs {

double lower_median(std::vector<double> v) {
    if (v.empty()) throw DataError("median of empty list");
    std::size_t k = (v.size() - 1) / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

ScreenResult threshold_screen(const EstimateVector& est, double gamma) {
    if (!(gamma > 0.0)) throw DataError("screening threshold must be positive");
    ScreenResult res;
    res.gamma = gamma;
    res.rule = "threshold";
    for (Eigen::Index j = 0; j < est.values.size(); ++j)
        if (!est.degenerate[static_cast<std::size_t>(j)] && est.values(j) >= gamma)
            res.retained.push_back(j);
    res.estimates = est;
    return res;
}

ScreenResult top_k_screen(const EstimateVector& est, Eigen::Index k) {
    const Eigen::Index p = est.values.size();
    if (k < 1 || k > p) throw DataError("top-k count out of range");
    std::vector<Eigen::Index> usable;
    for (Eigen::Index j = 0; j < p; ++j)
        if (!est.degenerate[static_cast<std::size_t>(j)]) usable.push_back(j);
    if (k > static_cast<Eigen::Index>(usable.size()))
        throw DataError("top-k count " + std::to_string(k) + " exceeds the " +
                        std::to_string(usable.size()) + " non-degenerate features");
    std::stable_sort(usable.begin(), usable.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (est.values(a) != est.values(b)) return est.values(a) > est.values(b);
        return a < b; // deterministic tie-break toward the lower index
    });
    ScreenResult res;
    res.rule = "top-k";
    res.retained.assign(usable.begin(), usable.begin() + k);
    res.gamma = est.values(res.retained.back());
    std::sort(res.retained.begin(), res.retained.end());
    res.estimates = est;
    return res;
}

double oracle_threshold(const EstimateVector& centralized,
                        const std::vector<Eigen::Index>& true_active, double rho) {
    if (true_active.empty()) throw DataError("oracle threshold needs a nonempty active set");
    if (!(rho > 0.0) || rho > 1.0) throw DataError("rho must lie in (0, 1]");
    double min_active = std::numeric_limits<double>::infinity();
    for (Eigen::Index j : true_active) {
        if (j < 0 || j >= centralized.values.size())
            throw DataError("active feature index " + std::to_string(j) + " out of range");
        if (centralized.degenerate[static_cast<std::size_t>(j)])
            throw DegeneracyError("active feature " + std::to_string(j) +
                                  " has a degenerate centralized estimate");
        min_active = std::min(min_active, centralized.values(j));
    }
    return rho * min_active;
}

MetricsReport evaluate_repetitions(const std::vector<ScreenResult>& results,
                                   const std::vector<Eigen::Index>& true_active) {
    if (results.empty()) throw DataError("no repetitions to evaluate");
    const double t_count = static_cast<double>(results.size());
    std::unordered_set<Eigen::Index> truth(true_active.begin(), true_active.end());

    MetricsReport rep;
    std::vector<double> sizes, psrs, fdrs;
    double successes = 0.0;
    for (const ScreenResult& r : results) {
        rep.retained_sets.push_back(r.retained);
        double hit = 0.0, miss = 0.0;
        for (Eigen::Index j : r.retained)
            (truth.count(j) ? hit : miss) += 1.0;
        double size = static_cast<double>(r.retained.size());
        sizes.push_back(size);
        psrs.push_back(truth.empty() ? 0.0 : hit / static_cast<double>(truth.size()));
        fdrs.push_back(r.retained.empty() ? 0.0 : miss / size);
        if (hit == static_cast<double>(truth.size())) successes += 1.0;
    }
    rep.ssr = successes / t_count;
    rep.ms = lower_median(sizes);
    rep.psr = lower_median(psrs);
    rep.fdr = lower_median(fdrs);

    double mean = std::accumulate(sizes.begin(), sizes.end(), 0.0) / t_count;
    double var = 0.0;
    for (double s : sizes) var += (s - mean) * (s - mean);
    rep.std_ms = results.size() > 1 ? std::sqrt(var / (t_count - 1.0)) : 0.0;
    return rep;
}

double rmse(const std::vector<double>& estimates_over_reps, double truth) {
    if (estimates_over_reps.empty()) throw DataError("RMSE of empty list");
    double sq = 0.0;
    for (double v : estimates_over_reps) sq += (v - truth) * (v - truth);
    return std::sqrt(sq / static_cast<double>(estimates_over_reps.size()));
}

} // namespace acs
