#pragma once

#include "latlearn/geometry.hpp"

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace latlearn {

struct LatticeConfig {
    double dx = 0.4;
    double dy = 0.4;
    std::vector<double> headings;

    /// 16 headings: multiples of pi/2 plus atan(1/2), pi/4 and atan(2) in
    /// every quadrant. Index 0 is heading 0; index + 4 is a quarter turn.
    static LatticeConfig standard(double resolution = 0.4);

    int num_headings() const { return static_cast<int>(headings.size()); }

    /// Index of the heading equal to `angle` within `tol`, if any.
    std::optional<int> heading_index(double angle, double tol = 1e-9) const;

    /// Index shift that rotates every heading by +pi/2, or nullopt if the
    /// heading set (or the resolution) is not quarter-turn symmetric.
    std::optional<int> quarter_turn_shift() const;

    void validate() const;
};

struct LatticeVertex {
    std::int64_t ix = 0;
    std::int64_t iy = 0;
    int itheta = 0;

    friend auto operator<=>(const LatticeVertex&, const LatticeVertex&) = default;
};

struct LatticeVertexHash {
    std::size_t operator()(const LatticeVertex& v) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(v.ix) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(v.iy) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::uint64_t>(v.itheta) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

/// One motion primitive. `path` lives in the start-vertex frame: it is
/// translated so it starts at the origin but keeps the world orientation of
/// its start heading, so placing it at a vertex is a pure translation.
struct ControlAction {
    std::size_t id = 0;
    int start_heading = 0;
    int end_heading = 0;
    std::int64_t delta_ix = 0;
    std::int64_t delta_iy = 0;
    SampledPath path;
    double arc_length = 0.0;
    std::size_t n_segments = 0;
    /// Cubic curvature polynomial in the start-heading-aligned frame.
    std::array<double, 4> coeffs{};

    bool is_straight() const { return start_heading == end_heading && coeffs == std::array<double, 4>{}; }
};

class ControlSet {
public:
    ControlSet() = default;
    /// Actions are ordered by id; by-heading lists follow that order.
    ControlSet(LatticeConfig lattice, double delta, std::vector<ControlAction> actions);

    const LatticeConfig& lattice() const { return lattice_; }
    double delta() const { return delta_; }
    const std::vector<ControlAction>& all() const { return actions_; }
    std::size_t size() const { return actions_.size(); }
    bool empty() const { return actions_.empty(); }

    /// Actions applicable at heading index `h` (C_theta), as indices into all().
    std::span<const std::size_t> for_heading(int h) const;

    bool contains_id(std::size_t id) const;
    const ControlAction* find_id(std::size_t id) const;

    ControlSet with(const ControlAction& extra) const;
    ControlSet subset(std::span<const std::size_t> ids) const;
    std::vector<std::size_t> ids() const;

private:
    LatticeConfig lattice_;
    double delta_ = 0.0;
    std::vector<ControlAction> actions_;
    std::vector<std::vector<std::size_t>> by_heading_;
};

LatticeVertex snap_to_lattice(const Pose2D& p, const LatticeConfig& cfg);
Pose2D vertex_pose(const LatticeVertex& u, const LatticeConfig& cfg);
Vec2 vertex_position(const LatticeVertex& u, const LatticeConfig& cfg);

/// Successor vertex and path-point index after applying `c` at (u, i).
std::pair<LatticeVertex, std::size_t> apply_control_action(const LatticeVertex& u,
                                                           const ControlAction& c, std::size_t i);

/// Point m of action `c` placed at vertex position `origin`.
inline Vec2 place(const ControlAction& c, Vec2 origin, std::size_t m) {
    return {origin.x + c.path.points[m].x, origin.y + c.path.points[m].y};
}

/// World path of an action sequence applied from `start`; shared vertices
/// are emitted once, so size() == 1 + sum of n_segments.
SampledPath concatenate(std::span<const ControlAction* const> actions, const LatticeVertex& start,
                        const LatticeConfig& cfg);

}  // namespace latlearn
