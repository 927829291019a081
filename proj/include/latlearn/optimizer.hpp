#pragma once

#include "latlearn/clustering.hpp"
#include "latlearn/geometry.hpp"
#include "latlearn/lattice.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace latlearn {

struct ObjectiveParams {
    double lambda = 0.311;
    /// |C| of the dense set the learned set is drawn from.
    std::size_t dense_size = 1;
};

struct ObjectiveValue {
    double matching = 0.0;  // mean closest-path score, meters
    double penalty = 0.0;   // lambda * |chat| / |C|
    double total() const { return matching + penalty; }
};

/// Mean closest-path score of `paths` under `chat` plus the sparsity penalty.
ObjectiveValue objective(const ControlSet& chat, const std::vector<SampledPath>& paths,
                         const ObjectiveParams& params, unsigned jobs = 1);

/// Mean closest-path score only.
double matching_term(const ControlSet& chat, const std::vector<SampledPath>& paths, unsigned jobs = 1);

/// Shortest straight action of every heading. Throws MissingStraight if some
/// heading has none.
ControlSet init_control_set(const LatticeConfig& cfg, const ControlSet& dense);

struct LearnerConfig {
    std::size_t paths_per_round = 8;
    std::size_t candidates_per_round = 32;
    std::size_t no_improve_rounds = 3;
    std::size_t max_rounds = 100000;
    std::uint64_t seed = 1;
    double initial_weight = 5.0;
    double weight_alpha = 0.5;
    unsigned jobs = 1;

    void validate() const;
};

struct LearnerRound {
    std::size_t iteration = 0;
    double objective = 0.0;  // sampled objective after the round
    std::size_t set_size = 0;
    std::size_t cluster = 0;
    bool improved = false;
};

struct LearnerState {
    ControlSet learned;
    std::vector<double> weights;
    std::vector<LearnerRound> history;
    /// Objective of the final set over the full training set.
    ObjectiveValue final_objective;
};

/// Cluster-weighted greedy selection. Each round samples a cluster by weight,
/// then paths from it and candidate actions from dense minus the learned set,
/// permanently adds the candidate with the largest strict decrease of the
/// sampled objective, and moves the cluster's weight toward its current mean
/// closest-path score. Stops after `no_improve_rounds` consecutive rounds
/// without an improving candidate.
LearnerState learn_control_set(const std::vector<SampledPath>& paths, const ClusterModel& clusters,
                               const ControlSet& dense, const ObjectiveParams& params, const LearnerConfig& cfg);

}  // namespace latlearn
