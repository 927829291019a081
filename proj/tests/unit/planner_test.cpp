#include "latlearn/baseline_dl.hpp"
#include "latlearn/error.hpp"
#include "latlearn/planner.hpp"

#include "support.hpp"

#include <doctest.h>

#include <map>
#include <queue>
#include <random>

using namespace latlearn;

namespace {

VehicleFootprint small_footprint() {
    VehicleFootprint fp;
    fp.length = 0.4;
    fp.width = 0.3;
    fp.rear_axle_to_center = 0.0;
    return fp;
}

ControlSet family_set() {
    const LatticeConfig cfg = testkit::four_heading_lattice(0.5);
    return ControlSet(cfg, 0.25, testkit::four_heading_family(cfg, 0.25));
}

Scenario open_field(double w, double h, Pose2D origin, double res, Pose2D start, Pose2D goal) {
    Scenario s;
    s.id = "field";
    s.grid = OccupancyGrid(origin, res, static_cast<int>(std::lround(w / res)), static_cast<int>(std::lround(h / res)),
                           false);
    s.start = start;
    s.goal = goal;
    return s;
}

/// Collision by dense pose sampling: every occupied or out-of-bounds cell
/// whose center the footprint covers at some sampled pose.
bool oracle_collides(const ControlAction& c, Vec2 at, const OccupancyGrid& grid, const VehicleFootprint& fp,
                     double step) {
    const auto& pts = c.path.points;
    const double reach = fp.length + fp.width + std::abs(fp.rear_axle_to_center);
    for (std::size_t m = 0; m + 1 < pts.size(); ++m) {
        const double seg = distance(pts[m], pts[m + 1]);
        const double h = std::atan2(pts[m + 1].y - pts[m].y, pts[m + 1].x - pts[m].x);
        const int n = std::max(1, static_cast<int>(std::ceil(seg / step)));
        for (int t = 0; t <= n; ++t) {
            const Vec2 p = at + pts[m] + (static_cast<double>(t) / n) * (pts[m + 1] - pts[m]);
            const Pose2D pose(p.x, p.y, h);
            const std::int64_t cx0 = grid.cell_x(p.x - reach), cx1 = grid.cell_x(p.x + reach);
            const std::int64_t cy0 = grid.cell_y(p.y - reach), cy1 = grid.cell_y(p.y + reach);
            for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
                for (std::int64_t cy = cy0; cy <= cy1; ++cy) {
                    if (fp.contains(pose, grid.cell_center(cx, cy)) && grid.blocked(cx, cy)) return true;
                }
            }
        }
    }
    return false;
}

/// Plain Dijkstra over collision-free action applications.
std::optional<double> dijkstra(const Scenario& s, const ControlSet& cs, const SwathTable& sw, LatticeVertex from,
                               LatticeVertex to) {
    const LatticeConfig& cfg = cs.lattice();
    std::map<LatticeVertex, double> dist{{from, 0.0}};
    using Item = std::pair<double, LatticeVertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, from});
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist.at(u)) continue;
        if (u == to) return d;
        for (std::size_t idx : cs.for_heading(u.itheta)) {
            const ControlAction& c = cs.all()[idx];
            if (!collision_free(u, sw.at(c.id), s.grid, cfg)) continue;
            const LatticeVertex v{u.ix + c.delta_ix, u.iy + c.delta_iy, c.end_heading};
            const double nd = d + c.arc_length;
            auto it = dist.find(v);
            if (it == dist.end() || nd < it->second) {
                dist[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return std::nullopt;
}

std::set<std::pair<std::int64_t, std::int64_t>> as_set(const std::vector<CellOffset>& cells) {
    std::set<std::pair<std::int64_t, std::int64_t>> out;
    for (const auto& c : cells) out.insert({c.dx, c.dy});
    return out;
}

}  // namespace

TEST_CASE("footprint containment") {
    const VehicleFootprint fp;
    const Pose2D pose(0, 0, 0);
    CHECK(fp.contains(pose, {1.35, 0.0}));
    CHECK(fp.contains(pose, {3.6, 0.85}));
    CHECK(fp.contains(pose, {-0.9, -0.85}));
    CHECK_FALSE(fp.contains(pose, {3.61, 0.0}));
    CHECK_FALSE(fp.contains(pose, {0.0, 0.86}));
    CHECK(fp.contains(Pose2D(0, 0, std::numbers::pi / 2), {0.0, 3.5}));
}

TEST_CASE("straight swath covers the swept rectangle") {
    const LatticeConfig cfg = LatticeConfig::standard(0.4);
    const ControlAction c = testkit::straight(0, 0, 5, 0, cfg, 0.1);
    const VehicleFootprint fp;
    const double res = 0.2;
    const auto cells = swath_cells(c, fp, res);
    const double area = (2.0 + fp.length) * fp.width;
    const double expected = area / (res * res);
    CHECK(std::abs(static_cast<double>(cells.size()) - expected) <= 0.1 * expected);
    for (const auto& cell : cells) {
        const Vec2 center{(cell.dx + 0.5) * res, (cell.dy + 0.5) * res};
        CHECK(center.x >= -0.9 - 1e-9);
        CHECK(center.x <= 2.0 + 3.6 + 1e-9);
        CHECK(std::abs(center.y) <= 0.85 + 1e-9);
    }
}

TEST_CASE("zero-length action swath is the footprint") {
    ControlAction c;
    c.path = make_sampled({{0.0, 0.0}}, 0.1);
    c.path.headings = {0.0};
    const VehicleFootprint fp;
    CHECK(swath_cells(c, fp, 0.2) == footprint_cells(Pose2D(0, 0, 0), fp, 0.2));
}

TEST_CASE("rotated action swath is the rotated swath") {
    const LatticeConfig cfg = testkit::four_heading_lattice(0.4);
    const VehicleFootprint fp;
    const double res = 0.2;
    for (const auto& make : {+[](const LatticeConfig& l, int q) { return testkit::turn(0, q, (q + 1) % 4, 5, true, q, l, 0.1); },
                             +[](const LatticeConfig& l, int q) { return testkit::lane_change(0, q, 8, 2, q, l, 0.1); }}) {
        const auto base = swath_cells(make(cfg, 0), fp, res);
        const auto rot = as_set(swath_cells(make(cfg, 1), fp, res));
        std::set<std::pair<std::int64_t, std::int64_t>> expected;
        for (const auto& c : base) expected.insert({-c.dy - 1, c.dx});
        const auto hausdorff_ok = [](const auto& a, const auto& b) {
            for (const auto& p : a) {
                bool near = false;
                for (int dx = -1; dx <= 1 && !near; ++dx) {
                    for (int dy = -1; dy <= 1 && !near; ++dy) near = b.count({p.first + dx, p.second + dy}) > 0;
                }
                if (!near) return false;
            }
            return true;
        };
        CHECK(hausdorff_ok(expected, rot));
        CHECK(hausdorff_ok(rot, expected));
    }
}

TEST_CASE("collision checks") {
    const LatticeConfig cfg = LatticeConfig::standard(0.4);
    const ControlAction c = testkit::straight(0, 0, 5, 0, cfg, 0.1);
    const VehicleFootprint fp;
    const auto sw = swath_cells(c, fp, 0.2);
    OccupancyGrid grid(Pose2D(-4, -4, 0), 0.2, 60, 40, false);
    CHECK(collision_free({0, 0, 0}, sw, grid, cfg));
    for (int cy = 0; cy < grid.height; ++cy) grid.set(grid.cell_x(4.0), cy, true);
    CHECK_FALSE(collision_free({0, 0, 0}, sw, grid, cfg));
    CHECK(collision_free({-5, 0, 0}, sw, grid, cfg));
    CHECK_FALSE(collision_free({-12, 0, 0}, sw, grid, cfg));
}

TEST_CASE("collision checks agree with fine pose sampling") {
    const ControlSet& dense = testkit::standard_dense();
    const LatticeConfig& cfg = dense.lattice();
    const VehicleFootprint fp;
    const double res = 0.2;
    const SwathTable table(dense, fp, res);
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<std::size_t> pick(0, dense.size() - 1);
    std::uniform_int_distribution<int> cell(0, 99);
    int collisions = 0;
    for (int trial = 0; trial < 100; ++trial) {
        OccupancyGrid grid(Pose2D(-10, -10, 0), res, 100, 100, false);
        const ControlAction& c = dense.all()[pick(rng)];
        const auto& pts = c.path.points;
        for (int n = 0; n < 2; ++n) {
            const Vec2 p = pts[rng() % pts.size()];
            std::normal_distribution<double> N(0.0, 1.5);
            grid.set(grid.cell_x(p.x + N(rng)), grid.cell_y(p.y + N(rng)), true);
        }
        for (int n = 0; n < 3; ++n) grid.set(cell(rng), cell(rng), true);
        const LatticeVertex u{0, 0, c.start_heading};
        const bool oracle = oracle_collides(c, vertex_position(u, cfg), grid, fp, res / 8);
        CHECK(collision_free(u, table.at(c.id), grid, cfg) == !oracle);
        collisions += oracle ? 1 : 0;
    }
    CHECK(collisions > 10);
    CHECK(collisions < 90);
}

TEST_CASE("goal vertex selection") {
    const LatticeConfig cfg = LatticeConfig::standard(0.4);
    const auto on = select_goal_vertices(Pose2D(0.8, 0.4, std::atan(0.5)), cfg, 2.0);
    CHECK(on.front().vertex == LatticeVertex{2, 1, 1});
    CHECK(on.front().score == doctest::Approx(0.0).scale(1.0));

    const auto off = select_goal_vertices(Pose2D(1.13, -0.57, std::numbers::pi / 2), cfg, 1.5);
    CHECK(off.front().vertex.itheta == 4);

    const Pose2D goal(3.3, 1.7, 0.9);
    const auto all = select_goal_vertices(goal, cfg, 1.2, 1.0, 2.0);
    std::vector<std::pair<double, LatticeVertex>> oracle;
    for (std::int64_t ix = -20; ix <= 30; ++ix) {
        for (std::int64_t iy = -20; iy <= 30; ++iy) {
            const double d = std::hypot(ix * 0.4 - 3.3, iy * 0.4 - 1.7);
            if (d > 1.2) continue;
            for (int h = 0; h < 16; ++h) oracle.push_back({d + 2.0 * angle_diff(cfg.headings[h], 0.9), {ix, iy, h}});
        }
    }
    std::sort(oracle.begin(), oracle.end());
    REQUIRE(all.size() == oracle.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i].vertex == oracle[i].second);
        CHECK(all[i].score == doctest::Approx(oracle[i].first).epsilon(1e-12));
    }

    try {
        select_goal_vertices(Pose2D(0.2, 0.2, 0), cfg, 0.1);
        FAIL("expected EmptyGoal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyGoal);
    }
    try {
        select_goal_vertices(Pose2D(0.0, 0.0, 0), cfg, 0.0);
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("planning in an open field") {
    const ControlSet cs = family_set();
    PlannerOptions opts;
    opts.footprint = small_footprint();
    opts.goal_radius = 1.0;
    const Scenario s = open_field(10, 6, Pose2D(-1, -3, 0), 0.25, Pose2D(0, 0, 0), Pose2D(5, 0, 0));
    const PlanResult r = plan(s, cs, opts);
    CHECK(r.goal == LatticeVertex{10, 0, 0});
    CHECK(r.cost == doctest::Approx(5.0));
    CHECK(r.path.points.back() == Vec2{5.0, 0.0});
    CHECK(r.states_expanded >= 1);
    CHECK(r.expansions >= r.states_expanded);

    Scenario wall = s;
    for (int cy = 0; cy < wall.grid.height; ++cy) wall.grid.set(wall.grid.cell_x(2.1), cy, true);
    try {
        plan(wall, cs, opts);
        FAIL("expected NoPlan");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoPlan);
    }
}

TEST_CASE("planner matches Dijkstra and is deterministic") {
    const ControlSet cs = family_set();
    PlannerOptions opts;
    opts.footprint = small_footprint();
    opts.goal_radius = 0.6;
    opts.record_expansions = true;
    std::mt19937_64 rng(52);
    std::bernoulli_distribution occ(0.04);
    int solved = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Scenario s = open_field(10, 6, Pose2D(-1, -3, 0), 0.25, Pose2D(0, 0, 0), Pose2D(6, 0.5, 0));
        for (int cy = 0; cy < s.grid.height; ++cy) {
            for (int cx = 0; cx < s.grid.width; ++cx) s.grid.set(cx, cy, occ(rng));
        }
        for (int cx = 2; cx <= 6; ++cx) {
            for (int cy = 10; cy <= 13; ++cy) s.grid.set(cx, cy, false);
        }
        const SwathTable sw(cs, opts.footprint, s.grid.resolution);
        const auto goals = select_goal_vertices(s.goal, cs.lattice(), opts.goal_radius, 1.0, opts.w_heading);
        const auto truth = dijkstra(s, cs, sw, {0, 0, 0}, goals.front().vertex);
        if (!truth) continue;
        ++solved;
        const PlanResult r = plan(s, cs, sw, opts);
        CHECK(r.goal == goals.front().vertex);
        CHECK(r.cost == doctest::Approx(*truth).epsilon(1e-12));

        for (std::size_t i = 1; i < r.expanded.size(); ++i) {
            CHECK(r.expanded[i].g + r.expanded[i].h >= r.expanded[i - 1].g + r.expanded[i - 1].h - 1e-9);
        }
        for (const auto& e : r.expanded) {
            const auto rest = dijkstra(s, cs, sw, e.vertex, r.goal);
            if (rest) CHECK(e.h <= *rest + 1e-9);
        }
        LatticeVertex v = r.start;
        for (std::size_t id : r.action_ids) {
            const ControlAction& c = *cs.find_id(id);
            CHECK(collision_free(v, sw.at(id), s.grid, cs.lattice()));
            v = apply_control_action(v, c, 0).first;
        }
        CHECK(v == r.goal);

        const PlanResult again = plan(s, cs, sw, opts);
        CHECK(again.action_ids == r.action_ids);
        CHECK(again.expansions == r.expansions);
    }
    CHECK(solved >= 10);
}

TEST_CASE("lane corridor scenarios") {
    std::vector<Vec2> pts;
    for (int k = 0; k <= 200; ++k) pts.push_back({0.1 * k, 0.0});
    const SampledPath straight = make_sampled(pts, 0.1);
    const double w = 3.7;
    const auto lat_oracle = [](Vec2 c) {
        if (c.x < -6.0) return std::copysign(std::hypot(c.x + 6.0, c.y), c.y);
        if (c.x > 26.0) return std::copysign(std::hypot(c.x - 26.0, c.y), c.y);
        return c.y;
    };

    const Pose2D frame(12.0, -3.0, 0.5);
    const Scenario moved = scenario_from_path(transform(straight, frame), w, ScenarioKind::LaneFollow, 0);
    const Scenario s = scenario_from_path(straight, w, ScenarioKind::LaneFollow, 0);
    CHECK(moved.grid.occupied == s.grid.occupied);
    CHECK(s.start.x == 0.0);
    CHECK(s.start.theta == 0.0);
    CHECK(s.goal.x == doctest::Approx(20.0));
    CHECK(std::abs(s.grid.origin.x / 0.4 - std::round(s.grid.origin.x / 0.4)) < 1e-9);
    for (int cy = 0; cy < s.grid.height; ++cy) {
        for (int cx = 0; cx < s.grid.width; ++cx) {
            const double lat = lat_oracle(s.grid.cell_center(cx, cy));
            if (std::abs(std::abs(lat) - w / 2) < 1e-9) continue;
            CHECK(s.grid.blocked(cx, cy) == (std::abs(lat) > w / 2));
        }
    }

    for (std::uint64_t seed : {4u, 7u}) {
        const Scenario lc = scenario_from_path(straight, w, ScenarioKind::LaneChange, seed);
        const double side = seed % 2 == 0 ? 1.0 : -1.0;
        CHECK(lc.goal.y == doctest::Approx(side * w));
        CHECK(lc.goal.x == doctest::Approx(20.0));
        for (int cy = 0; cy < lc.grid.height; ++cy) {
            for (int cx = 0; cx < lc.grid.width; ++cx) {
                const double lat = lat_oracle(lc.grid.cell_center(cx, cy));
                if (std::abs(std::abs(lat) - w / 2) < 1e-9 || std::abs(std::abs(lat) - 1.5 * w) < 1e-9) continue;
                const bool free = std::abs(lat) <= w / 2 || (side * lat > w / 2 && side * lat <= 1.5 * w);
                CHECK(lc.grid.blocked(cx, cy) == !free);
            }
        }
    }

    std::vector<Vec2> tiny{{0, 0}, {1, 0}};
    CHECK_THROWS_AS(scenario_from_path(make_sampled(tiny, 1.0), w, ScenarioKind::LaneFollow, 0), Error);
}

TEST_CASE("synthetic worlds") {
    SynthOptions opts;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SampledPath c = synth_centerline(seed, opts);
        for (double k : curvature_profile(c)) CHECK(std::abs(k) <= 0.1 + 1e-3);
        CHECK(c.arc_length() >= 25.0 - 0.1);
        CHECK(c.arc_length() <= 75.0 + 0.1);
    }

    const auto a = synth_worlds(3, 17, opts);
    const auto b = synth_worlds(3, 17, opts);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a[i].id == "synth_17_" + std::to_string(i));
        CHECK(a[i].grid.occupied == b[i].grid.occupied);
        CHECK(a[i].reference_path.points == b[i].reference_path.points);
        CHECK(a[i].kind == ScenarioKind::DoubleSwerve);
        CHECK(distance(a[i].goal.position(), a[i].reference_path.points.back()) < 1e-12);
    }
    CHECK(a[0].grid.occupied != a[1].grid.occupied);
    CHECK_THROWS_AS(synth_worlds(0, 1, opts), Error);
}

TEST_CASE("obstacle blocks the first lane") {
    const ControlSet dl = reduce_control_set_dl(testkit::standard_dense(), 1.1);
    SynthOptions opts;
    const Scenario world = synth_worlds(1, 5, opts).front();
    const std::vector<Vec2>& line = world.reference_path.points;

    const PlanResult ok = plan(world, dl);
    CHECK(ok.cost > 0.0);
    double max_lat = 0.0;
    for (const Vec2& p : ok.path.points) max_lat = std::max(max_lat, signed_lateral_offset(p, line));
    CHECK(max_lat > 1.0);

    Scenario one_lane = world;
    for (int cy = 0; cy < one_lane.grid.height; ++cy) {
        for (int cx = 0; cx < one_lane.grid.width; ++cx) {
            if (signed_lateral_offset(one_lane.grid.cell_center(cx, cy), line) > opts.lane_width / 2) {
                one_lane.grid.set(cx, cy, true);
            }
        }
    }
    try {
        plan(one_lane, dl);
        FAIL("expected NoPlan");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoPlan);
    }
}
