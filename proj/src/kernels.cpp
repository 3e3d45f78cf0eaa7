#include "acs/kernels.hpp"

#include "acs/errors.hpp"
#include "acs/parallel.hpp"
#include "acs/stable_sum.hpp"

namespace acs {

double u_statistic_naive(std::span<const double> xs, std::span<const double> ys,
                         const ComponentKernel& kernel) {
    const std::size_t n = xs.size();
    if (ys.size() != n) throw DataError("x/y length mismatch in U-statistic");
    const int deg = kernel.degree;
    if (deg < 1 || deg > 3) throw DataError("kernel degree must be 1, 2, or 3");
    if (n < static_cast<std::size_t>(deg)) throw DataError("segment smaller than kernel degree");

    StableSum sum;
    double bx[3], by[3];
    double count = 0.0;
    const double dn = static_cast<double>(n);
    switch (deg) {
        case 1:
            for (std::size_t i = 0; i < n; ++i) {
                bx[0] = xs[i];
                by[0] = ys[i];
                sum.add(kernel.evaluate({bx, 1}, {by, 1}));
            }
            count = dn;
            break;
        case 2:
            for (std::size_t i = 0; i + 1 < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    bx[0] = xs[i]; bx[1] = xs[j];
                    by[0] = ys[i]; by[1] = ys[j];
                    sum.add(kernel.evaluate({bx, 2}, {by, 2}));
                }
            count = dn * (dn - 1.0) / 2.0;
            break;
        case 3:
            for (std::size_t i = 0; i + 2 < n; ++i)
                for (std::size_t j = i + 1; j + 1 < n; ++j)
                    for (std::size_t l = j + 1; l < n; ++l) {
                        bx[0] = xs[i]; bx[1] = xs[j]; bx[2] = xs[l];
                        by[0] = ys[i]; by[1] = ys[j]; by[2] = ys[l];
                        sum.add(kernel.evaluate({bx, 3}, {by, 3}));
                    }
            count = dn * (dn - 1.0) * (dn - 2.0) / 6.0;
            break;
    }
    return sum.get() / count;
}

ComponentTable component_table(const Dataset& ds, const Partition& part,
                               const std::vector<ComponentKernel>& kernels,
                               const std::vector<Eigen::Index>& feature_set, int threads) {
    if (kernels.empty()) throw DataError("no component kernels given");
    std::size_t max_deg = 0;
    for (const auto& k : kernels) {
        if (k.degree < 1 || k.degree > 3) throw DataError("kernel degree must be 1, 2, or 3");
        max_deg = std::max(max_deg, static_cast<std::size_t>(k.degree));
    }
    for (const auto& seg : part.segments)
        if (seg.size() < max_deg) throw DataError("segment smaller than kernel degree");
    for (Eigen::Index j : feature_set)
        if (j < 0 || j >= ds.n_features())
            throw DataError("feature index " + std::to_string(j) + " out of range");

    const std::size_t p = feature_set.size();
    const int s = static_cast<int>(kernels.size());
    const int m = part.m;

    ComponentTable table;
    table.n_features = static_cast<Eigen::Index>(p);
    table.n_components = s;
    table.n_segments = m;
    table.values.assign(p * static_cast<std::size_t>(s) * static_cast<std::size_t>(m), 0.0);

    // Gather the response per segment once; features are gathered per cell.
    std::vector<std::vector<double>> seg_y(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
        const auto& seg = part.segments[static_cast<std::size_t>(l)];
        auto& y = seg_y[static_cast<std::size_t>(l)];
        y.resize(seg.size());
        for (std::size_t i = 0; i < seg.size(); ++i) y[i] = ds.response(seg[i]);
    }

    parallel_for(p * static_cast<std::size_t>(m), threads, [&](std::size_t cell) {
        const std::size_t jj = cell / static_cast<std::size_t>(m);
        const int l = static_cast<int>(cell % static_cast<std::size_t>(m));
        const Eigen::Index col = feature_set[jj];
        const auto& seg = part.segments[static_cast<std::size_t>(l)];
        std::vector<double> x(seg.size());
        for (std::size_t i = 0; i < seg.size(); ++i) x[i] = ds.features(seg[i], col);
        for (int h = 0; h < s; ++h)
            table.value(static_cast<Eigen::Index>(jj), h, l) =
                u_statistic_naive(x, seg_y[static_cast<std::size_t>(l)],
                                  kernels[static_cast<std::size_t>(h)]);
    });

    table.means.resize(static_cast<Eigen::Index>(p), s);
    for (std::size_t jj = 0; jj < p; ++jj)
        for (int h = 0; h < s; ++h) {
            StableSum acc;
            for (int l = 0; l < m; ++l) acc.add(table.value(static_cast<Eigen::Index>(jj), h, l));
            table.means(static_cast<Eigen::Index>(jj), h) = acc.get() / static_cast<double>(m);
        }
    return table;
}

} // namespace acs
