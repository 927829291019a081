#include "latlearn/optimizer.hpp"

#include "latlearn/closest_path.hpp"
#include "latlearn/error.hpp"
#include "latlearn/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace latlearn {

double matching_term(const ControlSet& chat, const std::vector<SampledPath>& paths, unsigned jobs) {
    if (paths.empty()) return 0.0;
    std::vector<double> scores(paths.size(), 0.0);
    parallel_for(paths.size(), jobs, [&](std::size_t i) { scores[i] = closest_path_greedy(paths[i], chat).score; });
    return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(paths.size());
}

ObjectiveValue objective(const ControlSet& chat, const std::vector<SampledPath>& paths, const ObjectiveParams& params,
                         unsigned jobs) {
    if (params.lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be non-negative");
    if (params.dense_size == 0) throw Error(ErrorCode::InvalidArgument, "dense set size must be positive");
    ObjectiveValue v;
    v.matching = matching_term(chat, paths, jobs);
    v.penalty = params.lambda * static_cast<double>(chat.size()) / static_cast<double>(params.dense_size);
    return v;
}

ControlSet init_control_set(const LatticeConfig& cfg, const ControlSet& dense) {
    std::vector<std::size_t> ids;
    for (int h = 0; h < cfg.num_headings(); ++h) {
        const ControlAction* best = nullptr;
        for (std::size_t idx : dense.for_heading(h)) {
            const ControlAction& a = dense.all()[idx];
            if (!a.is_straight()) continue;
            if (best == nullptr || a.arc_length < best->arc_length) best = &a;
        }
        if (best == nullptr) {
            throw Error(ErrorCode::MissingStraight, "heading " + std::to_string(h) + " has no straight action");
        }
        ids.push_back(best->id);
    }
    return dense.subset(ids);
}

void LearnerConfig::validate() const {
    if (paths_per_round == 0 || candidates_per_round == 0 || no_improve_rounds == 0 || max_rounds == 0) {
        throw Error(ErrorCode::InvalidArgument, "learner counts must be at least 1");
    }
    if (!(initial_weight > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial cluster weight must be positive");
    if (weight_alpha < 0.0 || weight_alpha > 1.0) throw Error(ErrorCode::InvalidArgument, "weight_alpha must be in [0,1]");
}

namespace {

template <class Rng>
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t count, Rng& rng) {
    count = std::min(count, pool.size());
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(i, pool.size() - 1)(rng);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

template <class Rng>
std::size_t sample_weighted(const std::vector<double>& weights, Rng& rng) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

}  // namespace

LearnerState learn_control_set(const std::vector<SampledPath>& paths, const ClusterModel& clusters,
                               const ControlSet& dense, const ObjectiveParams& params, const LearnerConfig& cfg) {
    cfg.validate();
    if (clusters.assignments.size() != paths.size()) {
        throw Error(ErrorCode::LengthMismatch, "cluster assignments do not match the path list");
    }
    const std::size_t n_clusters = clusters.means.size();
    std::vector<std::vector<std::size_t>> members(n_clusters);
    for (std::size_t i = 0; i < paths.size(); ++i) members.at(clusters.assignments[i]).push_back(i);

    LearnerState state;
    state.learned = init_control_set(dense.lattice(), dense);
    state.weights.assign(n_clusters, cfg.initial_weight);
    for (std::size_t c = 0; c < n_clusters; ++c) {
        if (members[c].empty()) state.weights[c] = 0.0;
    }

    std::mt19937_64 rng(cfg.seed);
    std::size_t stale = 0;
    for (std::size_t round = 0; round < cfg.max_rounds && stale < cfg.no_improve_rounds; ++round) {
        std::vector<std::size_t> pool;
        for (const auto& a : dense.all()) {
            if (!state.learned.contains_id(a.id)) pool.push_back(a.id);
        }
        if (pool.empty()) break;

        const std::size_t cluster = sample_weighted(state.weights, rng);
        const std::vector<std::size_t> picked = sample_without_replacement(members[cluster], cfg.paths_per_round, rng);
        const std::vector<std::size_t> candidates = sample_without_replacement(pool, cfg.candidates_per_round, rng);

        std::vector<SampledPath> sample;
        sample.reserve(picked.size());
        for (std::size_t i : picked) sample.push_back(paths[i]);

        const ObjectiveValue base = objective(state.learned, sample, params, cfg.jobs);
        std::vector<ObjectiveValue> values(candidates.size());
        parallel_for(candidates.size(), cfg.jobs, [&](std::size_t i) {
            values[i] = objective(state.learned.with(*dense.find_id(candidates[i])), sample, params, 1);
        });

        std::size_t best = candidates.size();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (best == candidates.size() || values[i].total() < values[best].total()) best = i;
        }

        LearnerRound rec;
        rec.iteration = round;
        rec.cluster = cluster;
        double round_score = base.matching;
        if (best < candidates.size() && values[best].total() < base.total()) {
            state.learned = state.learned.with(*dense.find_id(candidates[best]));
            rec.improved = true;
            rec.objective = values[best].total();
            round_score = values[best].matching;
            stale = 0;
        } else {
            rec.objective = base.total();
            ++stale;
        }
        double& w = state.weights[cluster];
        w = std::max((1.0 - cfg.weight_alpha) * w + cfg.weight_alpha * round_score, 1e-9);
        rec.set_size = state.learned.size();
        state.history.push_back(rec);
    }

    state.final_objective = objective(state.learned, paths, params, cfg.jobs);
    return state;
}

}  // namespace latlearn
