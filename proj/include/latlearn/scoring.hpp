#pragma once

#include "latlearn/geometry.hpp"
#include "latlearn/lattice.hpp"

#include <cstddef>

namespace latlearn {

/// Max pointwise distance over the first K = |pd| points, comparing points at
/// equal arc-length index. Asymmetric: points of `pl` past K-1 are ignored.
double score_paths(const SampledPath& pd, const SampledPath& pl);

struct ScoreContext {
    const SampledPath* dataset_path = nullptr;
    double delta = 0.0;

    explicit ScoreContext(const SampledPath& pd);
    std::size_t K() const { return dataset_path->size(); }
};

/// Score of action `c` placed at `start` against pd(k1..k2), skipping
/// comparisons past the end of pd.
double score_subpath(const ScoreContext& ctx, const ControlAction& c, const Pose2D& start, std::size_t k1,
                     std::size_t k2);

/// Same as score_subpath with the start given as a lattice position; the
/// hot path used by the closest-path search.
double score_action_at(const SampledPath& pd, const ControlAction& c, Vec2 origin, std::size_t k1);

}  // namespace latlearn
