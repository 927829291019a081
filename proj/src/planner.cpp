#include "latlearn/planner.hpp"

#include "latlearn/error.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <random>
#include <set>

namespace latlearn {

OccupancyGrid::OccupancyGrid(Pose2D origin_, double resolution_, int width_, int height_, bool fill)
    : origin(origin_), resolution(resolution_), width(width_), height(height_),
      occupied(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), fill ? 1 : 0) {
    if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid resolution must be positive");
}

bool VehicleFootprint::contains(const Pose2D& pose, Vec2 p) const {
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    const Vec2 center{pose.x + rear_axle_to_center * c, pose.y + rear_axle_to_center * s};
    const Vec2 d = p - center;
    const double lon = c * d.x + s * d.y;
    const double lat = -s * d.x + c * d.y;
    return std::abs(lon) <= 0.5 * length && std::abs(lat) <= 0.5 * width;
}

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::LaneFollow: return "lane_follow";
        case ScenarioKind::LaneChange: return "lane_change";
        case ScenarioKind::DoubleSwerve: return "double_swerve";
    }
    return "lane_follow";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "lane_follow") return ScenarioKind::LaneFollow;
    if (s == "lane_change") return ScenarioKind::LaneChange;
    if (s == "double_swerve") return ScenarioKind::DoubleSwerve;
    throw Error(ErrorCode::Parse, "unknown scenario kind '" + s + "'");
}

namespace {

void rasterize_pose(const Pose2D& pose, const VehicleFootprint& fp, double res, std::vector<CellOffset>& out) {
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    const double hx = 0.5 * fp.length;
    const double hy = 0.5 * fp.width;
    const Vec2 center{pose.x + fp.rear_axle_to_center * c, pose.y + fp.rear_axle_to_center * s};
    const double ex = std::abs(c) * hx + std::abs(s) * hy;
    const double ey = std::abs(s) * hx + std::abs(c) * hy;
    const auto i0 = static_cast<std::int64_t>(std::floor((center.x - ex) / res - 0.5));
    const auto i1 = static_cast<std::int64_t>(std::ceil((center.x + ex) / res - 0.5));
    const auto j0 = static_cast<std::int64_t>(std::floor((center.y - ey) / res - 0.5));
    const auto j1 = static_cast<std::int64_t>(std::ceil((center.y + ey) / res - 0.5));
    for (std::int64_t i = i0; i <= i1; ++i) {
        for (std::int64_t j = j0; j <= j1; ++j) {
            const Vec2 cell{(static_cast<double>(i) + 0.5) * res, (static_cast<double>(j) + 0.5) * res};
            if (fp.contains(pose, cell)) out.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
        }
    }
}

void sort_unique(std::vector<CellOffset>& cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

}  // namespace

std::vector<CellOffset> footprint_cells(const Pose2D& pose, const VehicleFootprint& fp, double resolution) {
    std::vector<CellOffset> cells;
    rasterize_pose(pose, fp, resolution, cells);
    sort_unique(cells);
    return cells;
}

std::vector<CellOffset> swath_cells(const ControlAction& c, const VehicleFootprint& fp, double resolution) {
    std::vector<CellOffset> cells;
    const auto& pts = c.path.points;
    if (pts.size() == 1) {
        const double h = c.path.headings.empty() ? 0.0 : c.path.headings.front();
        rasterize_pose(Pose2D(pts[0].x, pts[0].y, h), fp, resolution, cells);
    }
    for (std::size_t m = 0; m + 1 < pts.size(); ++m) {
        const double seg = distance(pts[m], pts[m + 1]);
        const double h = c.path.headings[m];
        const int steps = std::max(1, static_cast<int>(std::ceil(seg / (0.5 * resolution))));
        for (int t = 0; t <= steps; ++t) {
            const Vec2 p = pts[m] + (static_cast<double>(t) / steps) * (pts[m + 1] - pts[m]);
            rasterize_pose(Pose2D(p.x, p.y, h), fp, resolution, cells);
        }
    }
    sort_unique(cells);
    return cells;
}

SwathTable::SwathTable(const ControlSet& cs, const VehicleFootprint& fp, double resolution)
    : resolution_(resolution) {
    for (const auto& a : cs.all()) swaths_.emplace(a.id, swath_cells(a, fp, resolution));
}

bool collision_free(const LatticeVertex& u, const std::vector<CellOffset>& swath, const OccupancyGrid& grid,
                    const LatticeConfig& cfg) {
    const Vec2 p = vertex_position(u, cfg);
    const std::int64_t bx = std::llround((p.x - grid.origin.x) / grid.resolution);
    const std::int64_t by = std::llround((p.y - grid.origin.y) / grid.resolution);
    for (const CellOffset& c : swath) {
        if (grid.blocked(bx + c.dx, by + c.dy)) return false;
    }
    return true;
}

std::vector<GoalCandidate> select_goal_vertices(const Pose2D& goal, const LatticeConfig& cfg, double radius,
                                                double w_pos, double w_heading) {
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "goal radius must be positive");
    std::vector<GoalCandidate> out;
    const auto ix0 = static_cast<std::int64_t>(std::floor((goal.x - radius) / cfg.dx));
    const auto ix1 = static_cast<std::int64_t>(std::ceil((goal.x + radius) / cfg.dx));
    const auto iy0 = static_cast<std::int64_t>(std::floor((goal.y - radius) / cfg.dy));
    const auto iy1 = static_cast<std::int64_t>(std::ceil((goal.y + radius) / cfg.dy));
    for (std::int64_t ix = ix0; ix <= ix1; ++ix) {
        for (std::int64_t iy = iy0; iy <= iy1; ++iy) {
            const Vec2 p{static_cast<double>(ix) * cfg.dx, static_cast<double>(iy) * cfg.dy};
            const double d = distance(p, goal.position());
            if (d > radius) continue;
            for (int h = 0; h < cfg.num_headings(); ++h) {
                const double dh = angle_diff(cfg.headings[static_cast<std::size_t>(h)], goal.theta);
                out.push_back({LatticeVertex{ix, iy, h}, w_pos * d + w_heading * dh});
            }
        }
    }
    if (out.empty()) throw Error(ErrorCode::EmptyGoal, "no lattice vertex within the goal radius");
    std::stable_sort(out.begin(), out.end(), [](const GoalCandidate& a, const GoalCandidate& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.vertex < b.vertex;
    });
    return out;
}

namespace {

struct NodeInfo {
    double g = std::numeric_limits<double>::infinity();
    LatticeVertex pred;
    std::size_t action = 0;
    bool has_pred = false;
    bool closed = false;
};

struct OpenItem {
    double f;
    double h;
    double g;
    LatticeVertex v;

    bool operator>(const OpenItem& o) const {
        if (f != o.f) return f > o.f;
        if (h != o.h) return h > o.h;
        return o.v < v;
    }
};

}  // namespace

PlanResult plan(const Scenario& s, const ControlSet& cs, const SwathTable& swaths, const PlannerOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const LatticeConfig& cfg = cs.lattice();
    PlanResult result;
    result.start = snap_to_lattice(s.start, cfg);
    const std::vector<GoalCandidate> goals =
        select_goal_vertices(s.goal, cfg, opts.goal_radius, 1.0, opts.w_heading);
    const LatticeVertex target = goals.front().vertex;
    const Vec2 target_pos = vertex_position(target, cfg);
    auto heuristic = [&](const LatticeVertex& v) { return distance(vertex_position(v, cfg), target_pos); };

    std::unordered_map<LatticeVertex, NodeInfo, LatticeVertexHash> nodes;
    std::priority_queue<OpenItem, std::vector<OpenItem>, std::greater<>> open;
    nodes[result.start].g = 0.0;
    open.push({heuristic(result.start), heuristic(result.start), 0.0, result.start});

    bool reached = false;
    while (!open.empty()) {
        const OpenItem it = open.top();
        open.pop();
        NodeInfo& info = nodes[it.v];
        if (info.closed || it.g > info.g) continue;
        info.closed = true;
        ++result.states_expanded;
        if (opts.record_expansions) result.expanded.push_back({it.v, it.g, it.h});
        if (it.v == target) {
            reached = true;
            break;
        }
        for (std::size_t idx : cs.for_heading(it.v.itheta)) {
            const ControlAction& c = cs.all()[idx];
            ++result.expansions;
            const LatticeVertex v{it.v.ix + c.delta_ix, it.v.iy + c.delta_iy, c.end_heading};
            const double ng = it.g + c.arc_length;
            auto found = nodes.find(v);
            if (found != nodes.end() && (found->second.closed || found->second.g <= ng)) continue;
            if (!collision_free(it.v, swaths.at(c.id), s.grid, cfg)) continue;
            NodeInfo& next = nodes[v];
            next.g = ng;
            next.pred = it.v;
            next.action = idx;
            next.has_pred = true;
            const double h = heuristic(v);
            open.push({ng + h, h, ng, v});
        }
    }

    LatticeVertex goal = target;
    if (!reached) {
        // The search exhausted every reachable state, so closed g-values are
        // final; take the best-ranked goal among them.
        bool found = false;
        for (const GoalCandidate& g : goals) {
            auto it = nodes.find(g.vertex);
            if (it != nodes.end() && it->second.closed) {
                goal = g.vertex;
                found = true;
                break;
            }
        }
        if (!found) throw Error(ErrorCode::NoPlan, "no goal vertex is reachable");
    }
    result.goal = goal;
    result.cost = nodes.at(goal).g;

    std::vector<std::size_t> reversed;
    for (LatticeVertex v = goal; nodes.at(v).has_pred; v = nodes.at(v).pred) reversed.push_back(nodes.at(v).action);
    std::vector<const ControlAction*> actions;
    for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
        actions.push_back(&cs.all()[*it]);
        result.action_ids.push_back(cs.all()[*it].id);
    }
    if (actions.empty()) {
        result.path = make_sampled({vertex_position(result.start, cfg)}, cs.delta());
    } else {
        result.path = concatenate(actions, result.start, cfg);
    }
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

PlanResult plan(const Scenario& s, const ControlSet& cs, const PlannerOptions& opts) {
    const SwathTable swaths(cs, opts.footprint, s.grid.resolution);
    return plan(s, cs, swaths, opts);
}

double signed_lateral_offset(Vec2 p, const std::vector<Vec2>& line) {
    double best = std::numeric_limits<double>::infinity();
    double signed_best = 0.0;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const Vec2 a = line[i];
        const Vec2 d = line[i + 1] - a;
        const double len2 = dot(d, d);
        const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
        const Vec2 proj = a + t * d;
        const double dist = distance(p, proj);
        if (dist < best) {
            best = dist;
            signed_best = cross(d, p - proj) >= 0.0 ? dist : -dist;
        }
    }
    return signed_best;
}

namespace {

std::vector<Vec2> extended_centerline(const SampledPath& ref, double extension) {
    std::vector<Vec2> line;
    line.reserve(ref.size() + 2);
    const double h0 = ref.headings.front();
    const double h1 = ref.headings.back();
    line.push_back(ref.points.front() - extension * Vec2{std::cos(h0), std::sin(h0)});
    line.insert(line.end(), ref.points.begin(), ref.points.end());
    line.push_back(ref.points.back() + extension * Vec2{std::cos(h1), std::sin(h1)});
    return line;
}

Scenario build_corridor(const SampledPath& ref_in, double lane_width, ScenarioKind kind, int side,
                        const ScenarioOptions& opts) {
    if (ref_in.size() < 2 || ref_in.arc_length() < 2.0 - 1e-9) {
        throw Error(ErrorCode::DegeneratePath, "reference path must be at least 2 m long");
    }
    Scenario sc;
    sc.kind = kind;
    sc.reference_path = normalize_to_origin(ref_in);
    const SampledPath& ref = sc.reference_path;
    const std::vector<Vec2> line = extended_centerline(ref, opts.end_extension);

    const double reach = (side != 0 ? 1.5 : 0.5) * lane_width + opts.margin;
    double minx = line.front().x;
    double maxx = minx;
    double miny = line.front().y;
    double maxy = miny;
    for (const Vec2& p : line) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    const double ox = std::floor((minx - reach) / opts.lattice_step) * opts.lattice_step;
    const double oy = std::floor((miny - reach) / opts.lattice_step) * opts.lattice_step;
    const int width = static_cast<int>(std::ceil((maxx + reach - ox) / opts.resolution));
    const int height = static_cast<int>(std::ceil((maxy + reach - oy) / opts.resolution));
    sc.grid = OccupancyGrid(Pose2D(ox, oy, 0.0), opts.resolution, width, height, true);

    const double half = 0.5 * lane_width;
    for (int cy = 0; cy < height; ++cy) {
        for (int cx = 0; cx < width; ++cx) {
            const Vec2 c = sc.grid.cell_center(cx, cy);
            const double lat = signed_lateral_offset(c, line);
            const bool own_lane = std::abs(lat) <= half;
            const bool second_lane = side != 0 && side * lat > half && side * lat <= 3.0 * half;
            if (own_lane || second_lane) sc.grid.set(cx, cy, false);
        }
    }

    sc.start = Pose2D(0.0, 0.0, 0.0);
    const double h1 = ref.headings.back();
    Vec2 end = ref.points.back();
    if (kind == ScenarioKind::LaneChange) end = end + (side * lane_width) * Vec2{-std::sin(h1), std::cos(h1)};
    sc.goal = Pose2D(end.x, end.y, h1);
    return sc;
}

}  // namespace

Scenario scenario_from_path(const SampledPath& ref, double lane_width, ScenarioKind kind, std::uint64_t seed,
                            const ScenarioOptions& opts) {
    int side = 0;
    if (kind == ScenarioKind::LaneChange) side = (seed % 2 == 0) ? 1 : -1;
    if (kind == ScenarioKind::DoubleSwerve) side = 1;
    return build_corridor(ref, lane_width, kind, side, opts);
}

SampledPath synth_centerline(std::uint64_t seed, const SynthOptions& opts) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> seg_len(opts.segment_min, opts.segment_max);
    std::uniform_real_distribution<double> curv(-opts.curvature_max, opts.curvature_max);
    constexpr double step = 0.01;
    std::vector<Vec2> pts{{0.0, 0.0}};
    Vec2 p{0.0, 0.0};
    double heading = 0.0;
    for (int seg = 0; seg < opts.segments; ++seg) {
        const double len = seg_len(rng);
        const bool clothoid = seg % 2 == 1;
        const double k_end = clothoid ? curv(rng) : 0.0;
        const int n = static_cast<int>(std::ceil(len / step));
        const double ds = len / n;
        for (int i = 0; i < n; ++i) {
            const double s_mid = (i + 0.5) * ds;
            const double h_mid = heading + (clothoid ? 0.5 * k_end * (s_mid * s_mid) / len : 0.0);
            p = p + ds * Vec2{std::cos(h_mid), std::sin(h_mid)};
            pts.push_back(p);
        }
        if (clothoid) heading += 0.5 * k_end * len;
    }
    return resample_by_arclength(Polyline(std::move(pts)), opts.delta);
}

std::vector<Scenario> synth_worlds(std::size_t n, std::uint64_t seed, const SynthOptions& opts) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "need at least one world");
    std::vector<Scenario> worlds;
    std::mt19937_64 master(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t world_seed = master();
        const SampledPath center = synth_centerline(world_seed, opts);
        Scenario sc = build_corridor(center, opts.lane_width, ScenarioKind::DoubleSwerve, 1, opts.scenario);

        std::mt19937_64 rng(world_seed ^ 0x5DEECE66DULL);
        const double frac = std::uniform_real_distribution<double>(0.3, 0.6)(rng);
        const auto k = static_cast<std::size_t>(std::llround(frac * static_cast<double>(sc.reference_path.size() - 1)));
        const Vec2 at = sc.reference_path.points[k];
        const double h = sc.reference_path.headings[k];
        VehicleFootprint box = opts.obstacle;
        box.rear_axle_to_center = 0.0;
        const Pose2D obstacle_pose(at.x, at.y, h);
        for (int cy = 0; cy < sc.grid.height; ++cy) {
            for (int cx = 0; cx < sc.grid.width; ++cx) {
                if (box.contains(obstacle_pose, sc.grid.cell_center(cx, cy))) sc.grid.set(cx, cy, true);
            }
        }
        sc.id = "synth_" + std::to_string(seed) + "_" + std::to_string(i);
        worlds.push_back(std::move(sc));
    }
    return worlds;
}

}  // namespace latlearn
