#pragma once

#include "latlearn/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace latlearn {

/// Root-mean-square pointwise Euclidean distance between equal-length paths.
double path_distance(const SampledPath& p1, const SampledPath& p2);

struct ClusterModel {
    std::vector<SampledPath> means;
    std::vector<std::size_t> assignments;
    double inertia = 0.0;
    /// Inertia after each Lloyd iteration (non-increasing).
    std::vector<double> inertia_history;
    std::size_t iterations = 0;

    std::vector<std::size_t> members(std::size_t cluster) const;
};

/// Lloyd's K-means over paths with pointwise means and k-means++ seeding.
/// Paths are processed in a canonical (lexicographic) order so the partition
/// does not depend on input order.
ClusterModel kmeans_paths(const std::vector<SampledPath>& paths, std::size_t k, std::size_t max_iter,
                          std::uint64_t seed);

}  // namespace latlearn
