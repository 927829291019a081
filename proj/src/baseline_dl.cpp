#include "latlearn/baseline_dl.hpp"

#include "latlearn/error.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace latlearn {

std::optional<double> shortest_composite_length(const ControlSet& cs, int start_heading, std::int64_t dix,
                                                std::int64_t diy, int end_heading, double cutoff) {
    const LatticeConfig& cfg = cs.lattice();
    const LatticeVertex target{dix, diy, end_heading};
    const Vec2 goal = vertex_position(target, cfg);
    auto h = [&](const LatticeVertex& v) { return distance(vertex_position(v, cfg), goal); };

    struct Item {
        double f;
        double g;
        LatticeVertex v;
        bool operator>(const Item& o) const {
            if (f != o.f) return f > o.f;
            return o.v < v;
        }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    std::unordered_map<LatticeVertex, double, LatticeVertexHash> g_best;
    const LatticeVertex start{0, 0, start_heading};
    g_best[start] = 0.0;
    open.push({h(start), 0.0, start});
    while (!open.empty()) {
        const Item it = open.top();
        open.pop();
        if (it.g > g_best.at(it.v)) continue;
        if (it.v == target) return it.g;
        for (std::size_t idx : cs.for_heading(it.v.itheta)) {
            const ControlAction& c = cs.all()[idx];
            const LatticeVertex nv{it.v.ix + c.delta_ix, it.v.iy + c.delta_iy, c.end_heading};
            const double ng = it.g + c.arc_length;
            if (ng + h(nv) > cutoff) continue;
            auto found = g_best.find(nv);
            if (found != g_best.end() && found->second <= ng) continue;
            g_best[nv] = ng;
            open.push({ng + h(nv), ng, nv});
        }
    }
    return std::nullopt;
}

ControlSet reduce_control_set_dl(const ControlSet& dense, double factor) {
    if (factor < 1.0) throw Error(ErrorCode::InvalidArgument, "DL factor must be >= 1");
    const LatticeConfig& cfg = dense.lattice();

    std::vector<std::size_t> always;
    for (int h = 0; h < cfg.num_headings(); ++h) {
        const ControlAction* best = nullptr;
        for (std::size_t idx : dense.for_heading(h)) {
            const ControlAction& a = dense.all()[idx];
            if (a.is_straight() && (best == nullptr || a.arc_length < best->arc_length)) best = &a;
        }
        if (best != nullptr) always.push_back(best->id);
    }

    std::vector<const ControlAction*> order;
    for (const auto& a : dense.all()) order.push_back(&a);
    std::stable_sort(order.begin(), order.end(), [](const ControlAction* a, const ControlAction* b) {
        if (a->arc_length != b->arc_length) return a->arc_length < b->arc_length;
        return a->id < b->id;
    });

    std::vector<ControlAction> kept_actions;
    ControlSet kept(cfg, dense.delta(), {});
    for (const ControlAction* a : order) {
        const bool forced = std::find(always.begin(), always.end(), a->id) != always.end();
        if (!forced) {
            // Relative slack absorbs rounding when summing lattice-multiple lengths.
            const double cutoff = factor * a->arc_length * (1.0 + 1e-9);
            if (shortest_composite_length(kept, a->start_heading, a->delta_ix, a->delta_iy, a->end_heading, cutoff)) {
                continue;
            }
        }
        kept_actions.push_back(*a);
        kept = ControlSet(cfg, dense.delta(), kept_actions);
    }
    return kept;
}

std::set<LatticeVertex> reachable_in_window(const ControlSet& cs, int start_heading, std::int64_t window) {
    const std::int64_t side = 2 * window + 1;
    const int H = cs.lattice().num_headings();
    const auto slot = [&](const LatticeVertex& v) {
        return static_cast<std::size_t>(((v.ix + window) * side + (v.iy + window)) * H + v.itheta);
    };
    std::vector<char> seen(static_cast<std::size_t>(side * side * H), 0);
    std::vector<LatticeVertex> frontier{LatticeVertex{0, 0, start_heading}};
    seen[slot(frontier.front())] = 1;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const LatticeVertex u = frontier[head];
        for (std::size_t idx : cs.for_heading(u.itheta)) {
            const ControlAction& c = cs.all()[idx];
            const LatticeVertex v{u.ix + c.delta_ix, u.iy + c.delta_iy, c.end_heading};
            if (std::abs(v.ix) > window || std::abs(v.iy) > window) continue;
            char& s = seen[slot(v)];
            if (s == 0) {
                s = 1;
                frontier.push_back(v);
            }
        }
    }
    return {frontier.begin(), frontier.end()};
}

}  // namespace latlearn
