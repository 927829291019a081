#pragma once

#include "latlearn/geometry.hpp"
#include "latlearn/lattice.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace latlearn {

/// A lattice vertex augmented with the number of path points used to reach it.
struct SearchState {
    LatticeVertex vertex;
    std::size_t k = 0;

    friend auto operator<=>(const SearchState&, const SearchState&) = default;
};

struct ExpansionRecord {
    std::size_t k = 0;
    LatticeVertex vertex;
    double cost = 0.0;
};

struct ClosestPathResult {
    /// score_paths(pd, lattice_path) of the recovered path.
    double score = 0.0;
    /// Minimax cost carried by the dynamic program (equal to `score` up to
    /// rounding at action junctions).
    double dp_cost = 0.0;
    std::vector<std::size_t> action_ids;
    SampledPath lattice_path;
    std::size_t states_expanded = 0;
    std::size_t edges_evaluated = 0;
    /// |V_k| for k = 0..K-1 (states admitted into each layer).
    std::vector<std::size_t> layer_sizes;
    std::vector<ExpansionRecord> trace;
};

struct ClosestPathOptions {
    bool record_trace = false;
};

/// Upper bound on the optimal score from greedily taking, at each step, the
/// action that best matches the next section of pd. Throws Stuck if some
/// visited heading has no actions.
double greedy_bound(const SampledPath& pd, const ControlSet& cs);

/// Layered dynamic program over (vertex, k) states in increasing k, pruning
/// edges whose section score exceeds the running bound. The bound tightens to
/// the best terminal cost found; stored states above the tightened bound are
/// skipped when their layer is processed. Throws NoPath if nothing reaches
/// k >= K-1 within the bound.
ClosestPathResult closest_path(const SampledPath& pd, const ControlSet& cs,
                               double bound = std::numeric_limits<double>::infinity(),
                               const ClosestPathOptions& opts = {});

/// Convenience: closest_path with bound = greedy_bound.
ClosestPathResult closest_path_greedy(const SampledPath& pd, const ControlSet& cs);

/// Exhaustive enumeration of action sequences from the start vertex until
/// k >= K-1, scoring each full concatenation with score_paths. Test oracle.
double brute_force_closest(const SampledPath& pd, const ControlSet& cs, std::size_t max_depth,
                           std::size_t node_budget = 5'000'000);

/// Start vertex for a dataset path: its first point and heading snapped.
LatticeVertex start_vertex(const SampledPath& pd, const LatticeConfig& cfg);

}  // namespace latlearn
