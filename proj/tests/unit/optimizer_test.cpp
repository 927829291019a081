#include "latlearn/closest_path.hpp"
#include "latlearn/error.hpp"
#include "latlearn/optimizer.hpp"
#include "latlearn/spiral.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace latlearn;

namespace {

ControlSet family_set() {
    const LatticeConfig cfg = testkit::four_heading_lattice(0.5);
    return ControlSet(cfg, 0.25, testkit::four_heading_family(cfg, 0.25));
}

std::vector<SampledPath> walks(const ControlSet& cs, std::size_t n, std::uint64_t seed, double noise) {
    std::mt19937_64 rng(seed);
    std::vector<SampledPath> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(testkit::random_action_walk(rng, cs, 21, noise));
    return out;
}

}  // namespace

TEST_CASE("objective on paths the set reproduces is the penalty") {
    const ControlSet dense = family_set();
    const ControlSet init = init_control_set(dense.lattice(), dense);
    const auto paths = walks(init, 6, 41, 0.0);
    const ObjectiveParams params{0.311, dense.size()};
    const ObjectiveValue v = objective(init, paths, params);
    CHECK(v.matching < 1e-12);
    CHECK(v.total() == doctest::Approx(0.311 * 4.0 / 24.0).epsilon(1e-9));
}

TEST_CASE("objective with zero lambda is the mean closest-path score") {
    const ControlSet dense = family_set();
    const auto paths = walks(dense, 8, 42, 0.15);
    double sum = 0.0;
    for (const auto& p : paths) sum += closest_path(p, dense).score;
    const ObjectiveValue v = objective(dense, paths, {0.0, dense.size()});
    CHECK(v.penalty == 0.0);
    CHECK(v.total() == doctest::Approx(sum / paths.size()).epsilon(1e-12));
    CHECK(objective(dense, paths, {0.0, dense.size()}, 4).total() == v.total());
    CHECK_THROWS_AS(objective(dense, paths, {-1.0, dense.size()}), Error);
}

TEST_CASE("adding an action never increases the matching term") {
    const ControlSet dense = family_set();
    const auto paths = walks(dense, 6, 43, 0.1);
    std::mt19937_64 rng(44);
    ControlSet cs = init_control_set(dense.lattice(), dense);
    double prev = matching_term(cs, paths);
    std::vector<std::size_t> order(dense.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t id : order) {
        if (cs.contains_id(id)) continue;
        cs = cs.with(*dense.find_id(id));
        const double now = matching_term(cs, paths);
        CHECK(now <= prev + 1e-12);
        prev = now;
    }
}

TEST_CASE("init set on the standard dense set") {
    const ControlSet& dense = testkit::standard_dense();
    const ControlSet init = init_control_set(dense.lattice(), dense);
    CHECK(init.size() == 16);
    for (int h = 0; h < 16; ++h) {
        REQUIRE(init.for_heading(h).size() == 1);
        const ControlAction& a = init.all()[init.for_heading(h)[0]];
        CHECK(a.is_straight());
        for (std::size_t i : dense.for_heading(h)) {
            if (dense.all()[i].is_straight()) CHECK(dense.all()[i].arc_length >= a.arc_length);
        }
    }
}

TEST_CASE("init set needs a straight action for every heading") {
    const LatticeConfig cfg = testkit::four_heading_lattice(0.5);
    auto actions = testkit::four_heading_family(cfg, 0.25);
    std::erase_if(actions, [](const ControlAction& a) { return a.start_heading == 2 && a.is_straight(); });
    const ControlSet cs(cfg, 0.25, actions);
    try {
        init_control_set(cfg, cs);
        FAIL("expected MissingStraight");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingStraight);
    }
}

TEST_CASE("learner behaviour") {
    const ControlSet dense = family_set();
    const auto paths = walks(dense, 24, 45, 0.05);
    const ClusterModel clusters = kmeans_paths(paths, 3, 50, 1);
    LearnerConfig lc;
    lc.paths_per_round = 6;
    lc.candidates_per_round = 8;
    lc.no_improve_rounds = 3;
    lc.seed = 9;

    SUBCASE("huge lambda keeps the init set") {
        const LearnerState s = learn_control_set(paths, clusters, dense, {1000.0, dense.size()}, lc);
        CHECK(s.learned.ids() == init_control_set(dense.lattice(), dense).ids());
        for (const auto& r : s.history) CHECK_FALSE(r.improved);
        CHECK(s.history.size() == lc.no_improve_rounds);
    }

    SUBCASE("learning grows the set one action per improving round") {
        const ObjectiveParams params{0.311, dense.size()};
        const LearnerState s = learn_control_set(paths, clusters, dense, params, lc);
        const LearnerState again = learn_control_set(paths, clusters, dense, params, lc);
        CHECK(s.learned.ids() == again.learned.ids());
        REQUIRE(s.history.size() == again.history.size());
        for (std::size_t i = 0; i < s.history.size(); ++i) {
            CHECK(s.history[i].objective == again.history[i].objective);
            CHECK(s.history[i].cluster == again.history[i].cluster);
        }

        std::size_t size = 4;
        for (const auto& r : s.history) {
            if (r.improved) ++size;
            CHECK(r.set_size == size);
        }
        CHECK(s.learned.size() == size);
        CHECK(s.learned.size() > 4);
        for (double w : s.weights) CHECK(w > 0.0);
        for (std::size_t id : init_control_set(dense.lattice(), dense).ids()) CHECK(s.learned.contains_id(id));
        std::size_t tail = 0;
        for (auto it = s.history.rbegin(); it != s.history.rend() && !it->improved; ++it) ++tail;
        CHECK(tail == lc.no_improve_rounds);

        const ObjectiveValue fin = objective(s.learned, paths, params);
        CHECK(s.final_objective.total() == doctest::Approx(fin.total()).epsilon(1e-12));
        const ObjectiveValue start = objective(init_control_set(dense.lattice(), dense), paths, params);
        CHECK(fin.total() < start.total());
    }

    SUBCASE("parallel evaluation matches serial") {
        LearnerConfig par = lc;
        par.jobs = 4;
        const ObjectiveParams params{0.311, dense.size()};
        CHECK(learn_control_set(paths, clusters, dense, params, par).learned.ids() ==
              learn_control_set(paths, clusters, dense, params, lc).learned.ids());
    }
}

TEST_CASE("learner config validation") {
    LearnerConfig lc;
    lc.paths_per_round = 0;
    CHECK_THROWS_AS(lc.validate(), Error);
    lc = {};
    lc.weight_alpha = 1.5;
    CHECK_THROWS_AS(lc.validate(), Error);
}
