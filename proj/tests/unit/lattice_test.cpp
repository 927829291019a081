#include "latlearn/error.hpp"
#include "latlearn/lattice.hpp"

#include "../support.hpp"

#include <doctest.h>

#include <random>

using namespace latlearn;

TEST_CASE("standard lattice headings") {
    const LatticeConfig cfg = LatticeConfig::standard();
    REQUIRE(cfg.num_headings() == 16);
    CHECK(cfg.headings[0] == 0.0);
    CHECK(cfg.quarter_turn_shift() == 4);
    for (int i = 0; i < 16; ++i) {
        CHECK(angle_diff(cfg.headings[i] + std::numbers::pi / 2, cfg.headings[(i + 4) % 16]) < 1e-12);
    }
    CHECK(cfg.heading_index(std::atan(0.5)) == 1);
    CHECK_FALSE(cfg.heading_index(0.3).has_value());
}

TEST_CASE("lattice validation") {
    LatticeConfig bad = LatticeConfig::standard();
    bad.dx = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    LatticeConfig dup = testkit::single_heading_lattice(0.5);
    dup.headings.push_back(2 * std::numbers::pi);
    CHECK_THROWS_AS(dup.validate(), Error);
}

TEST_CASE("snapping to the lattice") {
    const LatticeConfig cfg = LatticeConfig::standard(0.4);
    CHECK(snap_to_lattice(Pose2D(0, 0, 0), cfg) == LatticeVertex{0, 0, 0});
    CHECK(snap_to_lattice(Pose2D(0.21, -0.19, 0.01), cfg) == LatticeVertex{1, 0, 0});
    CHECK(snap_to_lattice(Pose2D(0.2, -0.2, 0.0), cfg) == LatticeVertex{0, -1, 0});
    CHECK(snap_to_lattice(Pose2D(0, 0, 0.5 * std::atan(0.5)), cfg).itheta == 0);
    CHECK(snap_to_lattice(Pose2D(0, 0, 0.5 * (std::atan(0.5) + std::numbers::pi / 4)), cfg).itheta == 1);
    CHECK(snap_to_lattice(Pose2D(0, 0, std::numbers::pi), cfg).itheta == 8);
}

TEST_CASE("vertex poses") {
    const LatticeConfig cfg = LatticeConfig::standard(0.4);
    const Pose2D p = vertex_pose({1, 2, 0}, cfg);
    CHECK(p.x == doctest::Approx(0.4));
    CHECK(p.y == doctest::Approx(0.8));
    CHECK(p.theta == 0.0);
    const Pose2D o = vertex_pose({0, 0, 0}, cfg);
    CHECK(o.x == 0.0);
    CHECK(o.y == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> I(-10000, 10000);
    std::uniform_int_distribution<int> H(0, 15);
    for (int i = 0; i < 1000; ++i) {
        const LatticeVertex v{I(rng), I(rng), H(rng)};
        CHECK(snap_to_lattice(vertex_pose(v, cfg), cfg) == v);
    }
}

TEST_CASE("applying control actions") {
    const LatticeConfig cfg = testkit::four_heading_lattice(0.5);
    const ControlAction s = testkit::straight(0, 0, 2, 0, cfg, 0.5);
    REQUIRE(s.n_segments == 2);
    const auto [v, j] = apply_control_action({0, 0, 0}, s, 0);
    CHECK(v == LatticeVertex{2, 0, 0});
    CHECK(j == 2);

    ControlAction three = testkit::straight(1, 0, 3, 0, cfg, 0.5);
    REQUIRE(three.n_segments == 3);
    CHECK(apply_control_action({4, 4, 0}, three, 7).second == 10);

    const ControlAction left = testkit::turn(2, 1, 2, 2, true, 1, cfg, 0.25);
    CHECK_THROWS_AS(apply_control_action({0, 0, 0}, left, 0), Error);
}

TEST_CASE("action application is translation invariant") {
    const LatticeConfig cfg = testkit::four_heading_lattice(0.5);
    const auto family = testkit::four_heading_family(cfg, 0.25);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> I(-50, 50);
    for (const ControlAction& c : family) {
        const LatticeVertex u{0, 0, c.start_heading};
        const auto [v, j] = apply_control_action(u, c, 3);
        const std::int64_t tx = I(rng), ty = I(rng);
        const auto [v2, j2] = apply_control_action({tx, ty, c.start_heading}, c, 3);
        CHECK(v2 == LatticeVertex{v.ix + tx, v.iy + ty, v.itheta});
        CHECK(j2 == j);
    }
}

TEST_CASE("concatenation point count") {
    const LatticeConfig cfg = testkit::four_heading_lattice(0.5);
    const ControlSet cs(cfg, 0.25, testkit::four_heading_family(cfg, 0.25));
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<const ControlAction*> seq;
        LatticeVertex u{0, 0, 0};
        std::size_t total = 0;
        for (int n = 0; n < 6; ++n) {
            const auto opts = cs.for_heading(u.itheta);
            const ControlAction& c = cs.all()[opts[rng() % opts.size()]];
            seq.push_back(&c);
            u = apply_control_action(u, c, 0).first;
            total += c.n_segments;
        }
        const SampledPath p = concatenate(seq, {0, 0, 0}, cfg);
        CHECK(p.size() == 1 + total);
        CHECK(distance(p.points.back(), vertex_position(u, cfg)) < 1e-12);
    }
}

TEST_CASE("control set indexing") {
    const LatticeConfig cfg = testkit::four_heading_lattice(0.5);
    const ControlSet cs(cfg, 0.25, testkit::four_heading_family(cfg, 0.25));
    std::size_t total = 0;
    for (int h = 0; h < 4; ++h) {
        for (std::size_t idx : cs.for_heading(h)) CHECK(cs.all()[idx].start_heading == h);
        total += cs.for_heading(h).size();
    }
    CHECK(total == cs.size());
    const std::vector<std::size_t> ids{3, 1};
    const ControlSet sub = cs.subset(ids);
    CHECK(sub.ids() == std::vector<std::size_t>{1, 3});
    CHECK(sub.with(*cs.find_id(5)).size() == 3);
    CHECK(sub.with(*cs.find_id(1)).size() == 2);
    CHECK_THROWS_AS(cs.subset(std::vector<std::size_t>{999}), Error);

    for (const ControlAction& c : cs.all()) {
        CHECK(c.path.points.front() == Vec2{0.0, 0.0});
        CHECK(distance(c.path.points.back(), vertex_position({c.delta_ix, c.delta_iy, 0}, cfg)) < 1e-12);
        CHECK(c.n_segments == c.path.size() - 1);
    }
}
