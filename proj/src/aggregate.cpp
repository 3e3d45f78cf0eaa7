#include "acs/aggregate.hpp"

#include "acs/errors.hpp"
#include "acs/fast.hpp"
#include "acs/parallel.hpp"
#include "acs/rng.hpp"
#include "acs/stable_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace acs {

namespace {

/// Standardization + upfront exclusions. Near-constant features are
/// skipped (flagged later) instead of aborting a p-wide run; the
/// dataset is only copied when columns actually change.
struct Prepared {
    const Dataset* ds = nullptr;
    Dataset storage;
    std::vector<std::uint8_t> skip;
    std::vector<std::string> issues;
};

Prepared prepare(const Dataset& ds, const MeasureSpec& spec, const AggregateOptions& opts) {
    validate(ds);
    Prepared prep;
    prep.skip.assign(static_cast<std::size_t>(ds.n_features()), 0);
    if (!spec.requires_standardized_features || opts.assume_standardized) {
        prep.ds = &ds;
        return prep;
    }
    const Eigen::Index n = ds.n_rows(), p = ds.n_features();
    if (n < 2) throw DataError("standardize requires at least 2 rows");
    prep.storage = ds;
    for (Eigen::Index j = 0; j < p; ++j) {
        StableSum sum, sumsq;
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = ds.features(i, j);
            sum.add(v);
            sumsq.add(v * v);
        }
        double mean = sum.get() / static_cast<double>(n);
        double var = (sumsq.get() - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
        if (var <= spec.eps) {
            prep.skip[static_cast<std::size_t>(j)] = 1;
            prep.issues.push_back("feature " + std::to_string(j) +
                                  ": near-constant, excluded from standardized measure");
            continue;
        }
        prep.storage.features.col(j) = (ds.features.col(j).array() - mean) / std::sqrt(var);
    }
    prep.ds = &prep.storage;
    return prep;
}

bool has_fast_path(const std::string& name) {
    return name == "pearson" || name == "kendall" || name == "sirs" || name == "dc";
}

/// Fill values[j][h][l] with the fast per-cell estimators. Cells are
/// independent writes; means are reduced afterwards in index order.
ComponentTable fast_table(const Dataset& ds, const Partition& part, const MeasureSpec& spec,
                          const AggregateOptions& opts, const std::vector<std::uint8_t>& skip) {
    const Eigen::Index p = ds.n_features();
    const int s = spec.s();
    const int m = part.m;

    ComponentTable table;
    table.n_features = p;
    table.n_components = s;
    table.n_segments = m;
    table.values.assign(static_cast<std::size_t>(p) * static_cast<std::size_t>(s) *
                            static_cast<std::size_t>(m),
                        0.0);

    std::vector<std::vector<double>> seg_y(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
        const auto& seg = part.segments[static_cast<std::size_t>(l)];
        auto& y = seg_y[static_cast<std::size_t>(l)];
        y.resize(seg.size());
        for (std::size_t i = 0; i < seg.size(); ++i) y[i] = ds.response(seg[i]);
    }

    std::vector<DcResponseContext> dc_ctx;
    if (spec.name == "dc") {
        dc_ctx.resize(static_cast<std::size_t>(m));
        parallel_for(static_cast<std::size_t>(m), opts.threads, [&](std::size_t l) {
            dc_ctx[l] = make_dc_response_context(seg_y[l]);
        });
    }

    parallel_for(static_cast<std::size_t>(p) * static_cast<std::size_t>(m), opts.threads,
                 [&](std::size_t cell) {
        const Eigen::Index j = static_cast<Eigen::Index>(cell / static_cast<std::size_t>(m));
        const std::size_t l = cell % static_cast<std::size_t>(m);
        if (skip[static_cast<std::size_t>(j)]) return;
        const auto& seg = part.segments[l];
        std::vector<double> x(seg.size());
        for (std::size_t i = 0; i < seg.size(); ++i) x[i] = ds.features(seg[i], j);
        const auto& y = seg_y[l];

        if (spec.name == "pearson") {
            StableSum sxy, sx, sy, sxx, syy;
            for (std::size_t i = 0; i < x.size(); ++i) {
                sxy.add(x[i] * y[i]);
                sx.add(x[i]);
                sy.add(y[i]);
                sxx.add(x[i] * x[i]);
                syy.add(y[i] * y[i]);
            }
            double dn = static_cast<double>(x.size());
            table.value(j, 0, static_cast<int>(l)) = sxy.get() / dn;
            table.value(j, 1, static_cast<int>(l)) = sx.get() / dn;
            table.value(j, 2, static_cast<int>(l)) = sy.get() / dn;
            table.value(j, 3, static_cast<int>(l)) = sxx.get() / dn;
            table.value(j, 4, static_cast<int>(l)) = syy.get() / dn;
        } else if (spec.name == "kendall") {
            table.value(j, 0, static_cast<int>(l)) = u_kendall_fast(x, y);
        } else if (spec.name == "sirs") {
            table.value(j, 0, static_cast<int>(l)) = u_sirs_fast(x, y);
        } else { // dc
            auto t = u_dc_components_fast(x, dc_ctx[l]);
            for (int h = 0; h < 8; ++h) table.value(j, h, static_cast<int>(l)) = t[static_cast<std::size_t>(h)];
        }
    });

    table.means.resize(p, s);
    for (Eigen::Index j = 0; j < p; ++j)
        for (int h = 0; h < s; ++h) {
            StableSum acc;
            for (int l = 0; l < m; ++l) acc.add(table.value(j, h, l));
            table.means(j, h) = acc.get() / static_cast<double>(m);
        }
    return table;
}

ComponentTable compute_table(const Dataset& ds, const Partition& part, const MeasureSpec& spec,
                             const AggregateOptions& opts, const std::vector<std::uint8_t>& skip) {
    std::size_t max_deg = static_cast<std::size_t>(spec.max_degree());
    for (const auto& seg : part.segments)
        if (seg.size() < max_deg) throw DataError("segment smaller than kernel degree");

    if (!opts.naive && has_fast_path(spec.name)) return fast_table(ds, part, spec, opts, skip);

    std::vector<Eigen::Index> all(static_cast<std::size_t>(ds.n_features()));
    std::iota(all.begin(), all.end(), Eigen::Index{0});
    return component_table(ds, part, spec.kernels, all, opts.threads);
}

EstimateVector init_output(const std::string& method, const MeasureSpec& spec, int m, int R,
                           std::uint64_t seed, Eigen::Index p, const Prepared& prep) {
    EstimateVector out;
    out.method = method;
    out.measure = spec.name;
    out.m = m;
    out.R = R;
    out.seed = seed;
    out.values.setZero(p);
    out.degenerate.assign(static_cast<std::size_t>(p), 0);
    out.dropped_segments.assign(static_cast<std::size_t>(p), 0);
    out.issues = prep.issues;
    for (Eigen::Index j = 0; j < p; ++j)
        if (prep.skip[static_cast<std::size_t>(j)]) out.degenerate[static_cast<std::size_t>(j)] = 1;
    return out;
}

/// Classic single-machine estimate of the ranking measure on one
/// segment: (1/n^3) sum_k [sum_i x_i 1(y_i < y_k)]^2, the all-pairs
/// plug-in form. Sort-based unless `naive` forces the literal sums.
double plugin_sirs(const std::vector<double>& x, const std::vector<double>& y, bool naive) {
    const std::size_t n = x.size();
    const double dn = static_cast<double>(n);
    StableSum acc;
    if (naive) {
        for (std::size_t k = 0; k < n; ++k) {
            StableSum inner;
            for (std::size_t i = 0; i < n; ++i)
                if (y[i] < y[k]) inner.add(x[i]);
            const double v = inner.get();
            acc.add(v * v);
        }
        return acc.get() / (dn * dn * dn);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
    StableSum prefix; // sum of x over rows with strictly smaller response
    std::size_t g0 = 0;
    while (g0 < n) {
        std::size_t g1 = g0;
        while (g1 < n && y[order[g1]] == y[order[g0]]) ++g1;
        const double below = prefix.get();
        for (std::size_t k = g0; k < g1; ++k) acc.add(below * below);
        for (std::size_t k = g0; k < g1; ++k) prefix.add(x[order[k]]);
        g0 = g1;
    }
    return acc.get() / (dn * dn * dn);
}

/// Classic single-machine estimate of the distance measure on one
/// segment: the all-pairs plug-in form, quadratic in the segment size
/// (cubic when `naive` forces the literal triple sums). Degeneracy is
/// reported exactly like the componentwise map: a marginal distance
/// variance at or below eps throws.
double plugin_dc(const std::vector<double>& x, const std::vector<double>& y, double eps,
                 bool naive) {
    const std::size_t n = x.size();
    const double dn = static_cast<double>(n);
    const double n2 = dn * dn, n3 = dn * dn * dn;
    double s1, s2, s3, f1, f2;
    if (naive) {
        StableSum ab, a_all, b_all, abk, aa, aak, bb, bbk;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double a = std::abs(x[i] - x[j]);
                const double b = std::abs(y[i] - y[j]);
                ab.add(a * b);
                a_all.add(a);
                b_all.add(b);
                aa.add(a * a);
                bb.add(b * b);
                for (std::size_t k = 0; k < n; ++k) {
                    const double a2 = std::abs(x[i] - x[k]);
                    const double b2 = std::abs(y[i] - y[k]);
                    abk.add(a * b2);
                    aak.add(a * a2);
                    bbk.add(b * b2);
                }
            }
        s1 = ab.get() / n2;
        s2 = (a_all.get() / n2) * (b_all.get() / n2);
        s3 = abk.get() / n3;
        f1 = aa.get() / n2 + (a_all.get() / n2) * (a_all.get() / n2) - 2.0 * aak.get() / n3;
        f2 = bb.get() / n2 + (b_all.get() / n2) * (b_all.get() / n2) - 2.0 * bbk.get() / n3;
    } else {
        std::vector<double> arow(n, 0.0), brow(n, 0.0);
        StableSum ab, aa, bb;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double a = std::abs(x[i] - x[j]);
                const double b = std::abs(y[i] - y[j]);
                arow[i] += a;
                arow[j] += a;
                brow[i] += b;
                brow[j] += b;
                ab.add(2.0 * a * b);
                aa.add(2.0 * a * a);
                bb.add(2.0 * b * b);
            }
        StableSum a_all, b_all, cross, across, bcross;
        for (std::size_t i = 0; i < n; ++i) {
            a_all.add(arow[i]);
            b_all.add(brow[i]);
            cross.add(arow[i] * brow[i]);
            across.add(arow[i] * arow[i]);
            bcross.add(brow[i] * brow[i]);
        }
        s1 = ab.get() / n2;
        s2 = (a_all.get() / n2) * (b_all.get() / n2);
        s3 = cross.get() / n3;
        f1 = aa.get() / n2 + (a_all.get() / n2) * (a_all.get() / n2) - 2.0 * across.get() / n3;
        f2 = bb.get() / n2 + (b_all.get() / n2) * (b_all.get() / n2) - 2.0 * bcross.get() / n3;
    }
    if (f1 <= eps) throw DegenerateDenominator("f1", f1);
    if (f2 <= eps) throw DegenerateDenominator("f2", f2);
    double num = s1 + s2 - 2.0 * s3;
    if (num < 0.0) num = 0.0;
    return num / std::sqrt(f1 * f2);
}

/// Apply g to one row of component means; degenerate rows become
/// flagged sentinels instead of aborting.
void apply_g_rows(EstimateVector& out, const ComponentTable& table, const MeasureSpec& spec,
                  const Prepared& prep) {
    const int s = table.n_components;
    std::vector<double> t(static_cast<std::size_t>(s));
    for (Eigen::Index j = 0; j < table.n_features; ++j) {
        if (prep.skip[static_cast<std::size_t>(j)]) continue;
        for (int h = 0; h < s; ++h) t[static_cast<std::size_t>(h)] = table.means(j, h);
        try {
            out.values(j) = spec.aggregate_g(t);
        } catch (const DegenerateDenominator& e) {
            out.values(j) = 0.0;
            out.degenerate[static_cast<std::size_t>(j)] = 1;
            out.issues.push_back("feature " + std::to_string(j) + ": " + e.what());
        }
    }
}

} // namespace

ComponentTable measure_component_table(const Dataset& ds, const Partition& part,
                                       const MeasureSpec& spec, const AggregateOptions& opts) {
    Prepared prep = prepare(ds, spec, opts);
    return compute_table(*prep.ds, part, spec, opts, prep.skip);
}

EstimateVector acs_estimate(const Dataset& ds, const Partition& part, const MeasureSpec& spec,
                            const AggregateOptions& opts) {
    Prepared prep = prepare(ds, spec, opts);
    ComponentTable table = compute_table(*prep.ds, part, spec, opts, prep.skip);
    EstimateVector out = init_output("acs", spec, part.m, 1, part.seed, ds.n_features(), prep);
    apply_g_rows(out, table, spec, prep);
    return out;
}

EstimateVector sas_estimate(const Dataset& ds, const Partition& part, const MeasureSpec& spec,
                            const AggregateOptions& opts) {
    Prepared prep = prepare(ds, spec, opts);
    EstimateVector out = init_output("sas", spec, part.m, 1, part.seed, ds.n_features(), prep);
    const int m = part.m;

    // Product-moment and concordance measures: the classic local
    // estimate coincides with g of the segment's own component
    // U-statistics, so the component table is reused directly.
    if (spec.name != "sirs" && spec.name != "dc") {
        ComponentTable table = compute_table(*prep.ds, part, spec, opts, prep.skip);
        const int s = table.n_components;
        std::vector<double> t(static_cast<std::size_t>(s));
        for (Eigen::Index j = 0; j < table.n_features; ++j) {
            if (prep.skip[static_cast<std::size_t>(j)]) continue;
            StableSum acc;
            int used = 0;
            for (int l = 0; l < m; ++l) {
                for (int h = 0; h < s; ++h) t[static_cast<std::size_t>(h)] = table.value(j, h, l);
                try {
                    acc.add(spec.aggregate_g(t));
                    ++used;
                } catch (const DegenerateDenominator& e) {
                    out.issues.push_back("feature " + std::to_string(j) + ", segment " +
                                         std::to_string(l) + ": " + e.what());
                }
            }
            out.dropped_segments[static_cast<std::size_t>(j)] = m - used;
            if (used == 0) {
                out.values(j) = 0.0;
                out.degenerate[static_cast<std::size_t>(j)] = 1;
            } else {
                out.values(j) = acc.get() / static_cast<double>(used);
            }
        }
        return out;
    }

    // Ranking and distance measures: each segment runs the measure's
    // classic all-pairs plug-in estimator, exactly what an isolated
    // machine would compute on its shard.
    const std::size_t max_deg = static_cast<std::size_t>(spec.max_degree());
    for (const auto& seg : part.segments)
        if (seg.size() < max_deg) throw DataError("segment smaller than kernel degree");

    const Dataset& data = *prep.ds;
    const Eigen::Index p = data.n_features();
    std::vector<std::vector<double>> seg_y(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
        const auto& seg = part.segments[static_cast<std::size_t>(l)];
        auto& y = seg_y[static_cast<std::size_t>(l)];
        y.resize(seg.size());
        for (std::size_t i = 0; i < seg.size(); ++i) y[i] = data.response(seg[i]);
    }
    const std::size_t cells = static_cast<std::size_t>(p) * static_cast<std::size_t>(m);
    std::vector<double> cell(cells, 0.0);
    std::vector<std::uint8_t> bad(cells, 0);
    std::vector<std::string> why(cells);
    parallel_for(cells, opts.threads, [&](std::size_t c) {
        const Eigen::Index j = static_cast<Eigen::Index>(c / static_cast<std::size_t>(m));
        const std::size_t l = c % static_cast<std::size_t>(m);
        if (prep.skip[static_cast<std::size_t>(j)]) return;
        const auto& seg = part.segments[l];
        std::vector<double> x(seg.size());
        for (std::size_t i = 0; i < seg.size(); ++i) x[i] = data.features(seg[i], j);
        try {
            cell[c] = spec.name == "sirs" ? plugin_sirs(x, seg_y[l], opts.naive)
                                          : plugin_dc(x, seg_y[l], spec.eps, opts.naive);
        } catch (const DegenerateDenominator& e) {
            bad[c] = 1;
            why[c] = e.what();
        }
    });
    for (Eigen::Index j = 0; j < p; ++j) {
        if (prep.skip[static_cast<std::size_t>(j)]) continue;
        StableSum acc;
        int used = 0;
        for (int l = 0; l < m; ++l) {
            const std::size_t c =
                static_cast<std::size_t>(j) * static_cast<std::size_t>(m) + static_cast<std::size_t>(l);
            if (bad[c]) {
                out.issues.push_back("feature " + std::to_string(j) + ", segment " +
                                     std::to_string(l) + ": " + why[c]);
            } else {
                acc.add(cell[c]);
                ++used;
            }
        }
        out.dropped_segments[static_cast<std::size_t>(j)] = m - used;
        if (used == 0) {
            out.values(j) = 0.0;
            out.degenerate[static_cast<std::size_t>(j)] = 1;
        } else {
            out.values(j) = acc.get() / static_cast<double>(used);
        }
    }
    return out;
}

EstimateVector racs_estimate(const Dataset& ds, const MeasureSpec& spec, int m, int R,
                             std::uint64_t seed, const AggregateOptions& opts) {
    if (R < 1) throw DataError("partition repeat count R must be at least 1");
    Prepared prep = prepare(ds, spec, opts);
    const Eigen::Index p = ds.n_features();

    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(p, spec.s());
    for (int r = 0; r < R; ++r) {
        Partition part = make_partition(ds.n_rows(), m, derive_seed(seed, static_cast<std::uint64_t>(r)),
                                        PartitionMode::random_shuffle);
        ComponentTable table = compute_table(*prep.ds, part, spec, opts, prep.skip);
        total += table.means;
    }
    total /= static_cast<double>(R);

    ComponentTable combined;
    combined.n_features = p;
    combined.n_components = spec.s();
    combined.n_segments = m;
    combined.means = std::move(total);

    EstimateVector out = init_output("racs", spec, m, R, seed, p, prep);
    apply_g_rows(out, combined, spec, prep);
    return out;
}

EstimateVector centralized_estimate(const Dataset& ds, const MeasureSpec& spec,
                                    const AggregateOptions& opts) {
    Partition whole = make_partition(ds.n_rows(), 1, 0, PartitionMode::contiguous);
    EstimateVector out = acs_estimate(ds, whole, spec, opts);
    out.method = "centralized";
    return out;
}

} // namespace acs
