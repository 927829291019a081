#include "latlearn/scoring.hpp"

#include "latlearn/error.hpp"

#include <algorithm>
#include <string>

namespace latlearn {

double score_paths(const SampledPath& pd, const SampledPath& pl) {
    const std::size_t K = pd.size();
    if (pl.size() < K) {
        throw Error(ErrorCode::TooShort, "lattice path has " + std::to_string(pl.size()) + " points, need " +
                                             std::to_string(K));
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < K; ++k) worst = std::max(worst, distance(pd.points[k], pl.points[k]));
    return worst;
}

ScoreContext::ScoreContext(const SampledPath& pd) : dataset_path(&pd), delta(pd.delta) {
    if (pd.size() < 2) throw Error(ErrorCode::DegeneratePath, "dataset path needs at least two points");
}

double score_action_at(const SampledPath& pd, const ControlAction& c, Vec2 origin, std::size_t k1) {
    const std::size_t K = pd.size();
    if (k1 >= K) throw Error(ErrorCode::IndexError, "k1 is past the end of the dataset path");
    const std::size_t last = std::min(c.n_segments, K - 1 - k1);
    double worst = 0.0;
    for (std::size_t m = 0; m <= last; ++m) {
        worst = std::max(worst, distance(pd.points[k1 + m], place(c, origin, m)));
    }
    return worst;
}

double score_subpath(const ScoreContext& ctx, const ControlAction& c, const Pose2D& start, std::size_t k1,
                     std::size_t k2) {
    if (k2 != k1 + c.n_segments) {
        throw Error(ErrorCode::InvalidArgument, "k2 must equal k1 + n_segments");
    }
    return score_action_at(*ctx.dataset_path, c, start.position(), k1);
}

}  // namespace latlearn
