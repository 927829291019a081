#pragma once

#include "latlearn/lattice.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <set>

namespace latlearn {

/// Approximate reachability-preserving reduction: actions are visited by
/// increasing arc length, and an action is dropped when already-kept actions
/// reach its exact endpoint vertex within factor * its arc length. The
/// shortest straight action of each heading is always kept.
///
/// This is a comparison baseline, not a faithful port of the incremental
/// D*-like bookkeeping of the original method.
ControlSet reduce_control_set_dl(const ControlSet& dense, double factor = 1.1);

/// Length of the shortest sequence of actions in `cs` that starts at
/// (0, 0, start_heading) and ends at (dix, diy, end_heading), if one exists
/// with length <= cutoff. Uses A* with the straight-line heuristic.
std::optional<double> shortest_composite_length(const ControlSet& cs, int start_heading, std::int64_t dix,
                                                std::int64_t diy, int end_heading,
                                                double cutoff = std::numeric_limits<double>::infinity());

/// Vertices reachable from (0, 0, start_heading) with every visited vertex
/// inside |ix|, |iy| <= window.
std::set<LatticeVertex> reachable_in_window(const ControlSet& cs, int start_heading, std::int64_t window);

}  // namespace latlearn
