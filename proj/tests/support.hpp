#pragma once

// Shared helpers for the test suites. The U-statistic oracle here is an
// independent re-implementation: it averages a RAW (unsymmetrized)
// kernel over ALL ordered tuples of distinct indices with plain
// accumulation, whereas the library enumerates unordered subsets of a
// symmetrized kernel with compensated summation. Agreement between the
// two is therefore a genuine cross-check, not a tautology.

#include "acs/rng.hpp"

#include <functional>
#include <vector>

namespace testsupport {

/// Average f over all ordered tuples of k distinct indices (k = 1..3).
inline double oracle_u_ordered(const std::vector<double>& xs, const std::vector<double>& ys,
                               int k, const std::function<double(const int*)>& f) {
    const int n = static_cast<int>(xs.size());
    double sum = 0.0;
    double count = 0.0;
    int idx[3];
    if (k == 1) {
        for (int a = 0; a < n; ++a) {
            idx[0] = a;
            sum += f(idx);
            count += 1.0;
        }
    } else if (k == 2) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (b == a) continue;
                idx[0] = a;
                idx[1] = b;
                sum += f(idx);
                count += 1.0;
            }
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (b == a) continue;
                for (int c = 0; c < n; ++c) {
                    if (c == a || c == b) continue;
                    idx[0] = a;
                    idx[1] = b;
                    idx[2] = c;
                    sum += f(idx);
                    count += 1.0;
                }
            }
    }
    return sum / count;
}

/// Raw ordered-tuple kernels matching the built-in measures.
inline double raw_kendall(const std::vector<double>& x, const std::vector<double>& y, const int* i) {
    return (x[i[0]] < x[i[1]] && y[i[0]] < y[i[1]]) ? 1.0 : 0.0;
}
inline double raw_sirs(const std::vector<double>& x, const std::vector<double>& y, const int* i) {
    return (y[i[0]] < y[i[2]] && y[i[1]] < y[i[2]]) ? x[i[0]] * x[i[1]] : 0.0;
}
inline double raw_dc_cross(const std::vector<double>& u, const std::vector<double>& v, const int* i) {
    double a = u[i[0]] - u[i[2]];
    double b = v[i[1]] - v[i[2]];
    return (a < 0 ? -a : a) * (b < 0 ? -b : b);
}

inline std::vector<double> random_vector(acs::Rng& rng, int n, bool heavy_ties = false) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v)
        x = heavy_ties ? static_cast<double>(rng.bounded(4)) : rng.normal();
    return v;
}

} // namespace testsupport
