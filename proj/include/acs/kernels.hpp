#pragma once

#include "acs/dataset.hpp"

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace acs {

/// Symmetric kernel of a fixed small arity. evaluate receives `degree`
/// (x, y) observation pairs and must be invariant under permuting them;
/// built-in kernels are pre-symmetrized so unordered subsets suffice.
struct ComponentKernel {
    std::string id;
    int degree = 1; // 1..3
    std::function<double(std::span<const double> xs, std::span<const double> ys)> evaluate;
};

/// Per-(feature, component, segment) U-statistic values plus their
/// across-segment means.
struct ComponentTable {
    Eigen::Index n_features = 0;
    int n_components = 0;
    int n_segments = 0;
    std::vector<double> values; // [j][h][l] flattened
    Eigen::MatrixXd means;      // n_features x n_components

    double value(Eigen::Index j, int h, int l) const {
        return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_components * n_segments) +
                      static_cast<std::size_t>(h) * static_cast<std::size_t>(n_segments) +
                      static_cast<std::size_t>(l)];
    }
    double& value(Eigen::Index j, int h, int l) {
        return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_components * n_segments) +
                      static_cast<std::size_t>(h) * static_cast<std::size_t>(n_segments) +
                      static_cast<std::size_t>(l)];
    }
};

/// Exact U-statistic: the kernel averaged over all unordered
/// degree-sized subsets of the sample, enumerated in lexicographic
/// index order. Reference implementation for the fast paths.
double u_statistic_naive(std::span<const double> xs, std::span<const double> ys,
                         const ComponentKernel& kernel);

/// Evaluate every kernel on every requested feature within every
/// segment. Cells are independent, so they may be computed in parallel;
/// the result does not depend on the thread count.
ComponentTable component_table(const Dataset& ds, const Partition& part,
                               const std::vector<ComponentKernel>& kernels,
                               const std::vector<Eigen::Index>& feature_set, int threads = 0);

} // namespace acs
