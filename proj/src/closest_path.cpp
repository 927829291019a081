#include "latlearn/closest_path.hpp"

#include "latlearn/error.hpp"
#include "latlearn/scoring.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

namespace latlearn {

LatticeVertex start_vertex(const SampledPath& pd, const LatticeConfig& cfg) {
    const double heading = pd.headings.empty() ? 0.0 : pd.headings.front();
    return snap_to_lattice(Pose2D(pd.points.front().x, pd.points.front().y, heading), cfg);
}

double greedy_bound(const SampledPath& pd, const ControlSet& cs) {
    const std::size_t K = pd.size();
    if (K < 2) throw Error(ErrorCode::DegeneratePath, "dataset path needs at least two points");
    const LatticeConfig& cfg = cs.lattice();
    LatticeVertex u = start_vertex(pd, cfg);
    std::size_t k = 0;
    double running = 0.0;
    while (k < K - 1) {
        const Vec2 origin = vertex_position(u, cfg);
        const ControlAction* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t idx : cs.for_heading(u.itheta)) {
            const ControlAction& c = cs.all()[idx];
            const double d = score_action_at(pd, c, origin, k);
            if (d < best_d) {
                best_d = d;
                best = &c;
            }
        }
        if (best == nullptr) throw Error(ErrorCode::Stuck, "no control action applies at heading " +
                                                               std::to_string(u.itheta));
        running = std::max(running, best_d);
        std::tie(u, k) = apply_control_action(u, *best, k);
    }
    return running;
}

namespace {

struct Entry {
    double cost = std::numeric_limits<double>::infinity();
    LatticeVertex pred_vertex;
    std::size_t pred_k = 0;
    std::size_t action = 0;  // index into cs.all()
    bool has_pred = false;
};

using Layer = std::unordered_map<LatticeVertex, Entry, LatticeVertexHash>;

}  // namespace

ClosestPathResult closest_path(const SampledPath& pd, const ControlSet& cs, double bound,
                               const ClosestPathOptions& opts) {
    const std::size_t K = pd.size();
    if (K < 2) throw Error(ErrorCode::DegeneratePath, "dataset path needs at least two points");
    const LatticeConfig& cfg = cs.lattice();

    std::size_t max_segments = 1;
    for (const auto& a : cs.all()) max_segments = std::max(max_segments, a.n_segments);
    std::vector<Layer> layers(K + max_segments);

    ClosestPathResult result;
    const LatticeVertex origin = start_vertex(pd, cfg);
    layers[0][origin].cost = 0.0;

    std::optional<SearchState> best_end;
    double best_cost = std::numeric_limits<double>::infinity();
    double B = bound;

    std::vector<LatticeVertex> order;
    for (std::size_t i = 0; i + 1 < K; ++i) {
        order.clear();
        order.reserve(layers[i].size());
        for (const auto& [v, e] : layers[i]) order.push_back(v);
        std::sort(order.begin(), order.end());

        for (const LatticeVertex& u : order) {
            const double cost_u = layers[i].at(u).cost;
            if (cost_u > B) continue;
            ++result.states_expanded;
            if (opts.record_trace) result.trace.push_back({i, u, cost_u});
            const Vec2 pos_u = vertex_position(u, cfg);
            for (std::size_t idx : cs.for_heading(u.itheta)) {
                const ControlAction& c = cs.all()[idx];
                ++result.edges_evaluated;
                const auto [v, j] = apply_control_action(u, c, i);
                const double d = score_action_at(pd, c, pos_u, i);
                if (d > B) continue;
                Entry& slot = layers[j][v];
                const double candidate = std::max(cost_u, d);
                if (candidate < slot.cost) {
                    slot.cost = candidate;
                    slot.pred_vertex = u;
                    slot.pred_k = i;
                    slot.action = idx;
                    slot.has_pred = true;
                }
                if (j >= K - 1 && slot.cost < best_cost) {
                    best_cost = slot.cost;
                    best_end = SearchState{v, j};
                    B = std::min(B, best_cost);
                }
            }
        }
    }

    result.layer_sizes.resize(K);
    for (std::size_t k = 0; k < K; ++k) result.layer_sizes[k] = layers[k].size();

    if (!best_end) throw Error(ErrorCode::NoPath, "no lattice path covers the dataset path within the bound");

    std::vector<std::size_t> reversed;
    SearchState s = *best_end;
    while (s.k != 0 || s.vertex != origin) {
        const Entry& e = layers[s.k].at(s.vertex);
        if (!e.has_pred) break;
        reversed.push_back(e.action);
        s = SearchState{e.pred_vertex, e.pred_k};
    }
    std::vector<const ControlAction*> actions;
    for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
        actions.push_back(&cs.all()[*it]);
        result.action_ids.push_back(cs.all()[*it].id);
    }
    result.lattice_path = concatenate(actions, origin, cfg);
    result.dp_cost = best_cost;
    result.score = score_paths(pd, result.lattice_path);
    return result;
}

ClosestPathResult closest_path_greedy(const SampledPath& pd, const ControlSet& cs) {
    return closest_path(pd, cs, greedy_bound(pd, cs));
}

namespace {

struct BruteForce {
    const SampledPath& pd;
    const ControlSet& cs;
    std::size_t max_depth;
    std::size_t budget;
    std::size_t nodes = 0;
    LatticeVertex origin;
    double best = std::numeric_limits<double>::infinity();
    std::vector<const ControlAction*> stack;

    void visit(const LatticeVertex& u, std::size_t k) {
        if (++nodes > budget) throw Error(ErrorCode::Explosion, "brute-force enumeration exceeded its node budget");
        if (k >= pd.size() - 1) {
            best = std::min(best, score_paths(pd, concatenate(stack, origin, cs.lattice())));
            return;
        }
        if (stack.size() >= max_depth) return;
        for (std::size_t idx : cs.for_heading(u.itheta)) {
            const ControlAction& c = cs.all()[idx];
            stack.push_back(&c);
            visit(LatticeVertex{u.ix + c.delta_ix, u.iy + c.delta_iy, c.end_heading}, k + c.n_segments);
            stack.pop_back();
        }
    }
};

}  // namespace

double brute_force_closest(const SampledPath& pd, const ControlSet& cs, std::size_t max_depth,
                           std::size_t node_budget) {
    if (pd.size() < 2) throw Error(ErrorCode::DegeneratePath, "dataset path needs at least two points");
    BruteForce bf{pd, cs, max_depth, node_budget, 0, start_vertex(pd, cs.lattice()), std::numeric_limits<double>::infinity(), {}};
    bf.visit(bf.origin, 0);
    if (!std::isfinite(bf.best)) throw Error(ErrorCode::NoPath, "no action sequence covers the dataset path");
    return bf.best;
}

}  // namespace latlearn
