#include "acs/fast.hpp"

#include "acs/errors.hpp"
#include "acs/stable_sum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace acs {

namespace {

/// Strict inversions (a[i] > a[j] for i < j) via merge sort.
std::uint64_t count_inversions(std::vector<double>& a) {
    const std::size_t n = a.size();
    std::vector<double> buf(n);
    std::uint64_t inv = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            std::size_t mid = lo + width;
            std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (a[i] <= a[j]) {
                    buf[k++] = a[i++];
                } else {
                    inv += mid - i; // every remaining left element exceeds a[j]
                    buf[k++] = a[j++];
                }
            }
            while (i < mid) buf[k++] = a[i++];
            while (j < hi) buf[k++] = a[j++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      a.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inv;
}

std::uint64_t pairs_of(std::uint64_t g) { return g * (g - 1) / 2; }

} // namespace

double u_kendall_fast(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    if (ys.size() != n) throw DataError("x/y length mismatch in U-statistic");
    if (n < 2) throw DataError("segment smaller than kernel degree");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (xs[a] != xs[b]) return xs[a] < xs[b];
        return ys[a] < ys[b];
    });

    // Pairs concordant in both coordinates = all pairs, minus pairs tied
    // in x, minus (among x-increasing pairs) those with y decreasing or
    // tied. After sorting by (x, y), y is ascending inside every x-tie
    // group, so global y-inversions all cross group boundaries.
    std::vector<double> ysorted(n);
    for (std::size_t i = 0; i < n; ++i) ysorted[i] = ys[order[i]];

    std::uint64_t x_tie_pairs = 0, eq_within_x_ties = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && xs[order[j]] == xs[order[i]]) ++j;
        x_tie_pairs += pairs_of(j - i);
        for (std::size_t a = i; a < j;) {
            std::size_t b = a;
            while (b < j && ysorted[b] == ysorted[a]) ++b;
            eq_within_x_ties += pairs_of(b - a);
            a = b;
        }
        i = j;
    }

    std::uint64_t eq_y_total = 0;
    {
        std::vector<double> ycopy(ys.begin(), ys.end());
        std::sort(ycopy.begin(), ycopy.end());
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && ycopy[j] == ycopy[i]) ++j;
            eq_y_total += pairs_of(j - i);
            i = j;
        }
    }

    std::uint64_t inversions = count_inversions(ysorted);
    std::uint64_t concordant = pairs_of(n) - x_tie_pairs - inversions -
                               (eq_y_total - eq_within_x_ties);
    // Each concordant unordered pair contributes 1/2 under the
    // symmetrized kernel: U = (concordant/2) / C(n,2).
    return static_cast<double>(concordant) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

double u_sirs_fast(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    if (ys.size() != n) throw DataError("x/y length mismatch in U-statistic");
    if (n < 3) throw DataError("segment smaller than kernel degree");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ys[a] != ys[b]) return ys[a] < ys[b];
        return a < b;
    });

    // For each anchor, sum x_i1 * x_i2 over ordered pairs with strictly
    // smaller y: S^2 - Q from prefix sums flushed per tie group.
    StableSum total, s_sum, q_sum;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && ys[order[j]] == ys[order[i]]) ++j;
        double s = s_sum.get(), q = q_sum.get();
        for (std::size_t t = i; t < j; ++t) total.add(s * s - q);
        for (std::size_t t = i; t < j; ++t) {
            double x = xs[order[t]];
            s_sum.add(x);
            q_sum.add(x * x);
        }
        i = j;
    }
    double dn = static_cast<double>(n);
    return total.get() / (dn * (dn - 1.0) * (dn - 2.0));
}

DcResponseContext make_dc_response_context(std::span<const double> ys) {
    const std::size_t n = ys.size();
    if (n < 3) throw DataError("segment smaller than kernel degree");

    DcResponseContext ctx;
    ctx.ys.assign(ys.begin(), ys.end());
    ctx.rowsum_y.assign(n, 0.0);
    ctx.sqy.assign(n, 0.0);
    StableSum t2_sum, t5_sum;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double ady = std::abs(ys[i] - ys[j]);
            t2_sum.add(ady);
            t5_sum.add(ady * ady);
            ctx.rowsum_y[i] += ady;
            ctx.rowsum_y[j] += ady;
            ctx.sqy[i] += ady * ady;
            ctx.sqy[j] += ady * ady;
        }
    double dn = static_cast<double>(n);
    double pair_count = dn * (dn - 1.0) / 2.0;
    double triple_count = dn * (dn - 1.0) * (dn - 2.0);
    ctx.t2 = t2_sum.get() / pair_count;
    ctx.t5 = t5_sum.get() / pair_count;
    StableSum t6_sum;
    for (std::size_t c = 0; c < n; ++c)
        t6_sum.add(ctx.rowsum_y[c] * ctx.rowsum_y[c] - ctx.sqy[c]);
    ctx.t6 = t6_sum.get() / triple_count;
    return ctx;
}

std::array<double, 8> u_dc_components_fast(std::span<const double> xs,
                                           const DcResponseContext& ctx) {
    const std::size_t n = xs.size();
    if (ctx.ys.size() != n) throw DataError("x/y length mismatch in U-statistic");

    std::vector<double> rowsum_x(n, 0.0), sqx(n, 0.0), cross(n, 0.0);
    StableSum t1_sum, t3_sum, t7_sum;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double adx = std::abs(xs[i] - xs[j]);
            double ady = std::abs(ctx.ys[i] - ctx.ys[j]);
            double prod = ady * adx;
            t1_sum.add(prod);
            t3_sum.add(adx);
            t7_sum.add(adx * adx);
            rowsum_x[i] += adx;
            rowsum_x[j] += adx;
            sqx[i] += adx * adx;
            sqx[j] += adx * adx;
            cross[i] += prod;
            cross[j] += prod;
        }

    double dn = static_cast<double>(n);
    double pair_count = dn * (dn - 1.0) / 2.0;
    double triple_count = dn * (dn - 1.0) * (dn - 2.0);

    StableSum t4_sum, t8_sum;
    for (std::size_t c = 0; c < n; ++c) {
        t4_sum.add(ctx.rowsum_y[c] * rowsum_x[c] - cross[c]);
        t8_sum.add(rowsum_x[c] * rowsum_x[c] - sqx[c]);
    }

    return {t1_sum.get() / pair_count, ctx.t2,
            t3_sum.get() / pair_count, t4_sum.get() / triple_count,
            ctx.t5,                    ctx.t6,
            t7_sum.get() / pair_count, t8_sum.get() / triple_count};
}

std::array<double, 8> u_dc_components_fast(std::span<const double> xs,
                                           std::span<const double> ys) {
    return u_dc_components_fast(xs, make_dc_response_context(ys));
}

} // namespace acs
