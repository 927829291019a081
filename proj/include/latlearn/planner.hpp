#pragma once

#include "latlearn/geometry.hpp"
#include "latlearn/lattice.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace latlearn {

/// Axis-aligned occupancy grid; `origin` is the lower-left corner of cell (0, 0).
struct OccupancyGrid {
    Pose2D origin;
    double resolution = 0.2;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> occupied;

    OccupancyGrid() = default;
    OccupancyGrid(Pose2D origin_, double resolution_, int width_, int height_, bool fill);

    bool in_bounds(std::int64_t cx, std::int64_t cy) const {
        return cx >= 0 && cy >= 0 && cx < width && cy < height;
    }
    /// Out-of-bounds cells count as occupied.
    bool blocked(std::int64_t cx, std::int64_t cy) const {
        return !in_bounds(cx, cy) || occupied[static_cast<std::size_t>(cy) * width + cx] != 0;
    }
    void set(std::int64_t cx, std::int64_t cy, bool value) {
        if (in_bounds(cx, cy)) occupied[static_cast<std::size_t>(cy) * width + cx] = value ? 1 : 0;
    }
    Vec2 cell_center(std::int64_t cx, std::int64_t cy) const {
        return {origin.x + (static_cast<double>(cx) + 0.5) * resolution,
                origin.y + (static_cast<double>(cy) + 0.5) * resolution};
    }
    std::int64_t cell_x(double x) const { return static_cast<std::int64_t>(std::floor((x - origin.x) / resolution)); }
    std::int64_t cell_y(double y) const { return static_cast<std::int64_t>(std::floor((y - origin.y) / resolution)); }
    bool blocked_at(Vec2 p) const { return blocked(cell_x(p.x), cell_y(p.y)); }
};

/// Rectangle measured from the rear axle: its center sits
/// `rear_axle_to_center` ahead of the reference point along the heading.
struct VehicleFootprint {
    double length = 4.5;
    double width = 1.7;
    double rear_axle_to_center = 1.35;

    /// Whether `p` is inside the footprint placed at `pose`.
    bool contains(const Pose2D& pose, Vec2 p) const;
};

enum class ScenarioKind { LaneFollow, LaneChange, DoubleSwerve };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct Scenario {
    std::string id;
    OccupancyGrid grid;
    Pose2D start;
    Pose2D goal;
    SampledPath reference_path;
    ScenarioKind kind = ScenarioKind::LaneFollow;
};

struct CellOffset {
    std::int32_t dx = 0;
    std::int32_t dy = 0;

    friend auto operator<=>(const CellOffset&, const CellOffset&) = default;
};

/// Cells, relative to the start vertex's cell corner, whose centers fall inside
/// the footprint at some pose along the action's path.
std::vector<CellOffset> swath_cells(const ControlAction& c, const VehicleFootprint& fp, double resolution);

/// Footprint cells for a single pose expressed relative to the origin.
std::vector<CellOffset> footprint_cells(const Pose2D& pose, const VehicleFootprint& fp, double resolution);

/// Swaths for every action of a set, keyed by action id.
class SwathTable {
public:
    SwathTable(const ControlSet& cs, const VehicleFootprint& fp, double resolution);

    const std::vector<CellOffset>& at(std::size_t action_id) const { return swaths_.at(action_id); }
    double resolution() const { return resolution_; }

private:
    double resolution_;
    std::unordered_map<std::size_t, std::vector<CellOffset>> swaths_;
};

/// True iff no swath cell, translated to vertex u, is occupied or out of bounds.
bool collision_free(const LatticeVertex& u, const std::vector<CellOffset>& swath, const OccupancyGrid& grid,
                    const LatticeConfig& cfg);

struct GoalCandidate {
    LatticeVertex vertex;
    double score = 0.0;
};

/// Lattice vertices within `radius` of the goal position, sorted by
/// w_pos * distance + w_heading * |heading difference| (ties by vertex order).
std::vector<GoalCandidate> select_goal_vertices(const Pose2D& goal, const LatticeConfig& cfg, double radius,
                                                double w_pos = 1.0, double w_heading = 2.0);

struct PlannerOptions {
    VehicleFootprint footprint;
    double goal_radius = 2.0;
    double w_heading = 2.0;
    /// Optional record of (h, cost-to-come) at each expansion for admissibility checks.
    bool record_expansions = false;
};

struct PlanResult {
    SampledPath path;
    std::vector<std::size_t> action_ids;
    LatticeVertex start;
    LatticeVertex goal;
    double cost = 0.0;
    /// Successor (edge) evaluations, each a swath collision check.
    std::size_t expansions = 0;
    /// States popped from the open list.
    std::size_t states_expanded = 0;
    double wall_time = 0.0;
    /// For each expanded state: (vertex, g, h), when requested.
    struct Expanded {
        LatticeVertex vertex;
        double g;
        double h;
    };
    std::vector<Expanded> expanded;
};

/// A* from the snapped start over collision-free action applications with
/// edge cost = arc length and a straight-line heuristic to the best goal
/// vertex. If that goal is unreachable, the remaining goal list is tried in
/// order against the exhausted search. Throws NoPlan if none is reachable.
PlanResult plan(const Scenario& s, const ControlSet& cs, const SwathTable& swaths, const PlannerOptions& opts = {});
PlanResult plan(const Scenario& s, const ControlSet& cs, const PlannerOptions& opts = {});

struct ScenarioOptions {
    double resolution = 0.2;
    /// Lattice spacing the grid origin is aligned to.
    double lattice_step = 0.4;
    /// Straight extension of the lanes past both ends of the reference path.
    double end_extension = 6.0;
    double margin = 2.0;
};

/// Signed lateral offset of `p` from a polyline (positive to the left).
double signed_lateral_offset(Vec2 p, const std::vector<Vec2>& line);

/// Lane corridor(s) about `ref` (normalized to the origin first). For a lane
/// change the second lane is on the left for even seeds and the right for
/// odd seeds, and the goal moves to its end.
Scenario scenario_from_path(const SampledPath& ref, double lane_width, ScenarioKind kind, std::uint64_t seed,
                            const ScenarioOptions& opts = {});

struct SynthOptions {
    double lane_width = 3.7;
    double segment_min = 5.0;
    double segment_max = 15.0;
    double curvature_max = 0.1;
    int segments = 5;
    double delta = 0.1;
    VehicleFootprint obstacle;
    ScenarioOptions scenario;
};

/// Centerline of alternating straights and clothoids; exposed for tests.
SampledPath synth_centerline(std::uint64_t seed, const SynthOptions& opts = {});

/// Double-swerve worlds: two lanes (second on the left), a vehicle-sized
/// obstacle on lane 1 between 30% and 60% of the length, goal at lane-1 end.
std::vector<Scenario> synth_worlds(std::size_t n, std::uint64_t seed, const SynthOptions& opts = {});

}  // namespace latlearn
