#include "acs/measures.hpp"

#include "acs/errors.hpp"

#include <cmath>

namespace acs {

namespace {

constexpr int kPerm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

ComponentKernel rowwise(std::string id, std::function<double(double, double)> f) {
    ComponentKernel k;
    k.id = std::move(id);
    k.degree = 1;
    k.evaluate = [f = std::move(f)](std::span<const double> xs, std::span<const double> ys) {
        return f(xs[0], ys[0]);
    };
    return k;
}

ComponentKernel kendall_kernel() {
    ComponentKernel k;
    k.id = "concordance";
    k.degree = 2;
    k.evaluate = [](std::span<const double> x, std::span<const double> y) {
        double fwd = (x[0] < x[1] && y[0] < y[1]) ? 1.0 : 0.0;
        double rev = (x[1] < x[0] && y[1] < y[0]) ? 1.0 : 0.0;
        return 0.5 * (fwd + rev);
    };
    return k;
}

ComponentKernel sirs_kernel() {
    ComponentKernel k;
    k.id = "sirs";
    k.degree = 3;
    k.evaluate = [](std::span<const double> x, std::span<const double> y) {
        // (1/3) sum over anchors c of x_a*x_b*I(y_a<y_c)*I(y_b<y_c);
        // each anchor stands for the two permutations sharing it.
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) {
            int a = (c + 1) % 3, b = (c + 2) % 3;
            if (y[a] < y[c] && y[b] < y[c]) sum += x[a] * x[b];
        }
        return sum / 3.0;
    };
    return k;
}

/// Symmetrized |u_{i1} - u_{i3}| * |v_{i2} - v_{i3}| over all 6
/// permutations; u/v select the x or y coordinate.
ComponentKernel dc_triple_kernel(std::string id, bool u_is_x, bool v_is_x) {
    ComponentKernel k;
    k.id = std::move(id);
    k.degree = 3;
    k.evaluate = [u_is_x, v_is_x](std::span<const double> x, std::span<const double> y) {
        std::span<const double> u = u_is_x ? x : y;
        std::span<const double> v = v_is_x ? x : y;
        double sum = 0.0;
        for (const auto& p : kPerm3)
            sum += std::abs(u[p[0]] - u[p[2]]) * std::abs(v[p[1]] - v[p[2]]);
        return sum / 6.0;
    };
    return k;
}

ComponentKernel dc_pair_kernel(std::string id, std::function<double(double, double, double, double)> f) {
    ComponentKernel k;
    k.id = std::move(id);
    k.degree = 2;
    k.evaluate = [f = std::move(f)](std::span<const double> x, std::span<const double> y) {
        return f(x[0], x[1], y[0], y[1]);
    };
    return k;
}

} // namespace

double g_pearson(double t1, double t2, double t3, double t4, double t5, double eps) {
    double var_x = t4 - t2 * t2;
    double var_y = t5 - t3 * t3;
    if (var_x <= eps) throw DegenerateDenominator("var_x", var_x);
    if (var_y <= eps) throw DegenerateDenominator("var_y", var_y);
    return std::abs((t1 - t2 * t3) / std::sqrt(var_x * var_y));
}

double g_kendall(double t1) { return std::abs(t1 - 0.25); }

double g_sirs(double t1) { return t1 > 0.0 ? t1 : 0.0; }

double g_dc(double t1, double t2, double t3, double t4, double t5, double t6, double t7,
            double t8, double eps) {
    double f1 = t5 + t2 * t2 - 2.0 * t6;
    double f2 = t7 + t3 * t3 - 2.0 * t8;
    if (f1 <= eps) throw DegenerateDenominator("f1", f1);
    if (f2 <= eps) throw DegenerateDenominator("f2", f2);
    double num = t1 + t2 * t3 - 2.0 * t4;
    if (num < 0.0) num = 0.0;
    return num / std::sqrt(f1 * f2);
}

MeasureSpec builtin_measure(const std::string& name) {
    MeasureSpec spec;
    spec.name = name;
    if (name == "pearson") {
        spec.kernels = {
            rowwise("xy", [](double x, double y) { return x * y; }),
            rowwise("x", [](double x, double) { return x; }),
            rowwise("y", [](double, double y) { return y; }),
            rowwise("xx", [](double x, double) { return x * x; }),
            rowwise("yy", [](double, double y) { return y * y; }),
        };
        spec.aggregate_g = [eps = spec.eps](std::span<const double> t) {
            return g_pearson(t[0], t[1], t[2], t[3], t[4], eps);
        };
    } else if (name == "kendall") {
        spec.kernels = {kendall_kernel()};
        spec.aggregate_g = [](std::span<const double> t) { return g_kendall(t[0]); };
    } else if (name == "sirs") {
        spec.kernels = {sirs_kernel()};
        spec.aggregate_g = [](std::span<const double> t) { return g_sirs(t[0]); };
        spec.requires_standardized_features = true;
    } else if (name == "dc") {
        spec.kernels = {
            dc_pair_kernel("|dy||dx|", [](double x0, double x1, double y0, double y1) {
                return std::abs(y0 - y1) * std::abs(x0 - x1);
            }),
            dc_pair_kernel("|dy|", [](double, double, double y0, double y1) {
                return std::abs(y0 - y1);
            }),
            dc_pair_kernel("|dx|", [](double x0, double x1, double, double) {
                return std::abs(x0 - x1);
            }),
            dc_triple_kernel("|dy||dx| cross", /*u_is_x=*/false, /*v_is_x=*/true),
            dc_pair_kernel("|dy|^2", [](double, double, double y0, double y1) {
                double d = y0 - y1;
                return d * d;
            }),
            dc_triple_kernel("|dy||dy| cross", /*u_is_x=*/false, /*v_is_x=*/false),
            dc_pair_kernel("|dx|^2", [](double x0, double x1, double, double) {
                double d = x0 - x1;
                return d * d;
            }),
            dc_triple_kernel("|dx||dx| cross", /*u_is_x=*/true, /*v_is_x=*/true),
        };
        spec.aggregate_g = [eps = spec.eps](std::span<const double> t) {
            return g_dc(t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], eps);
        };
    } else {
        throw DataError("unknown measure '" + name + "'");
    }
    return spec;
}

const std::vector<std::string>& builtin_measure_names() {
    static const std::vector<std::string> names = {"pearson", "kendall", "sirs", "dc"};
    return names;
}

} // namespace acs
