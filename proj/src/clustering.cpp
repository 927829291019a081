#include "latlearn/clustering.hpp"

#include "latlearn/error.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace latlearn {

namespace {

double squared_path_distance(const SampledPath& p1, const SampledPath& p2) {
    if (p1.size() != p2.size() || p1.empty()) {
        throw Error(ErrorCode::LengthMismatch, "paths must have the same nonzero number of points");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        const double dx = p1.points[i].x - p2.points[i].x;
        const double dy = p1.points[i].y - p2.points[i].y;
        acc += dx * dx + dy * dy;
    }
    return acc / static_cast<double>(p1.size());
}

bool lexicographic_less(const SampledPath& a, const SampledPath& b) {
    return std::lexicographical_compare(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
                                        [](Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
}

struct Lloyd {
    const std::vector<const SampledPath*>& paths;
    std::size_t k;
    std::vector<SampledPath> means;
    std::vector<std::size_t> assign;

    std::size_t nearest(const SampledPath& p) const {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < means.size(); ++c) {
            const double d = squared_path_distance(p, means[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        return best;
    }

    bool reassign() {
        bool changed = false;
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const std::size_t c = nearest(*paths[i]);
            if (c != assign[i]) {
                assign[i] = c;
                changed = true;
            }
        }
        return changed;
    }

    void update() {
        const std::size_t n_pts = paths.front()->size();
        std::vector<std::size_t> counts(k, 0);
        std::vector<std::vector<Vec2>> sums(k, std::vector<Vec2>(n_pts));
        for (std::size_t i = 0; i < paths.size(); ++i) {
            ++counts[assign[i]];
            auto& acc = sums[assign[i]];
            for (std::size_t m = 0; m < n_pts; ++m) acc[m] = acc[m] + paths[i]->points[m];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            const double inv = 1.0 / static_cast<double>(counts[c]);
            for (std::size_t m = 0; m < n_pts; ++m) means[c].points[m] = inv * sums[c][m];
            means[c].update_headings();
        }
        // Empty clusters take the path farthest from its mean, from clusters
        // that can spare a member.
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            std::size_t far = paths.size();
            double far_d = -1.0;
            for (std::size_t i = 0; i < paths.size(); ++i) {
                if (counts[assign[i]] < 2) continue;
                const double d = squared_path_distance(*paths[i], means[assign[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far == paths.size()) continue;
            --counts[assign[far]];
            assign[far] = c;
            counts[c] = 1;
            means[c] = *paths[far];
        }
    }

    double inertia() const {
        double total = 0.0;
        for (std::size_t i = 0; i < paths.size(); ++i) total += squared_path_distance(*paths[i], means[assign[i]]);
        return total;
    }
};

}  // namespace

double path_distance(const SampledPath& p1, const SampledPath& p2) {
    return std::sqrt(squared_path_distance(p1, p2));
}

std::vector<std::size_t> ClusterModel::members(std::size_t cluster) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == cluster) out.push_back(i);
    }
    return out;
}

ClusterModel kmeans_paths(const std::vector<SampledPath>& paths, std::size_t k, std::size_t max_iter,
                          std::uint64_t seed) {
    if (paths.empty() || k == 0 || k > paths.size()) {
        throw Error(ErrorCode::InvalidArgument, "k must be in [1, number of paths]");
    }
    for (const auto& p : paths) {
        if (p.size() != paths.front().size()) {
            throw Error(ErrorCode::LengthMismatch, "all paths must have the same number of points");
        }
    }

    std::vector<std::size_t> canon(paths.size());
    std::iota(canon.begin(), canon.end(), 0);
    std::stable_sort(canon.begin(), canon.end(),
                     [&](std::size_t a, std::size_t b) { return lexicographic_less(paths[a], paths[b]); });
    std::vector<const SampledPath*> ordered;
    ordered.reserve(paths.size());
    for (std::size_t i : canon) ordered.push_back(&paths[i]);

    // k-means++ seeding.
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> chosen;
    std::vector<double> d2(ordered.size(), std::numeric_limits<double>::infinity());
    chosen.push_back(std::uniform_int_distribution<std::size_t>(0, ordered.size() - 1)(rng));
    while (chosen.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            d2[i] = std::min(d2[i], squared_path_distance(*ordered[i], *ordered[chosen.back()]));
            total += d2[i];
        }
        std::size_t pick = ordered.size();
        if (total > 0.0) {
            const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
            double acc = 0.0;
            for (std::size_t i = 0; i < ordered.size(); ++i) {
                if (d2[i] <= 0.0) continue;
                acc += d2[i];
                pick = i;
                if (acc >= u) break;
            }
        } else {
            for (std::size_t i = 0; i < ordered.size(); ++i) {
                if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
                    pick = i;
                    break;
                }
            }
        }
        chosen.push_back(pick);
    }

    Lloyd lloyd{ordered, k, {}, std::vector<std::size_t>(ordered.size(), 0)};
    for (std::size_t c : chosen) lloyd.means.push_back(*ordered[c]);
    lloyd.reassign();

    ClusterModel model;
    bool changed = true;
    for (std::size_t it = 0; it < std::max<std::size_t>(max_iter, 1); ++it) {
        lloyd.update();
        model.inertia_history.push_back(lloyd.inertia());
        ++model.iterations;
        changed = lloyd.reassign();
        if (!changed) break;
    }
    if (changed) {
        lloyd.update();
        model.inertia_history.push_back(lloyd.inertia());
    }

    model.means = std::move(lloyd.means);
    model.assignments.assign(paths.size(), 0);
    for (std::size_t i = 0; i < canon.size(); ++i) model.assignments[canon[i]] = lloyd.assign[i];
    model.inertia = model.inertia_history.back();
    return model;
}

}  // namespace latlearn
