#pragma once

#include "latlearn/geometry.hpp"
#include "latlearn/lattice.hpp"
#include "latlearn/spiral.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace testkit {

using namespace latlearn;

/// Lattice with headings {0, pi/2, pi, -pi/2} (index + 1 is a left quarter turn).
inline LatticeConfig four_heading_lattice(double res) {
    LatticeConfig cfg;
    cfg.dx = res;
    cfg.dy = res;
    cfg.headings = {0.0, std::numbers::pi / 2.0, std::numbers::pi, -std::numbers::pi / 2.0};
    return cfg;
}

inline LatticeConfig single_heading_lattice(double res) {
    LatticeConfig cfg;
    cfg.dx = res;
    cfg.dy = res;
    cfg.headings = {0.0};
    return cfg;
}

/// Standard dense set, generated once per test process.
inline const ControlSet& standard_dense() {
    static const ControlSet cs = generate_dense_control_set(DenseSetConfig::standard());
    return cs;
}

inline Vec2 quarter(Vec2 p, int q) {
    for (int i = 0; i < ((q % 4) + 4) % 4; ++i) p = {-p.y + 0.0, p.x};
    return p;
}

/// Action following curve(t), t in [0, 1], from the origin to lattice cell
/// (ix, iy) in the heading-0 frame, then rotated by q quarter turns.
inline ControlAction curve_action(std::size_t id, int start_h, int end_h, std::int64_t ix, std::int64_t iy,
                                  const std::function<Vec2(double)>& curve, int q, const LatticeConfig& cfg,
                                  double delta) {
    std::vector<Vec2> dense;
    constexpr int n = 2000;
    for (int i = 0; i <= n; ++i) dense.push_back(curve(static_cast<double>(i) / n));
    SampledPath local = resample_by_arclength(Polyline(dense), delta);
    local.points.front() = {0.0, 0.0};
    local.points.back() = {static_cast<double>(ix) * cfg.dx, static_cast<double>(iy) * cfg.dy};
    ControlAction a;
    a.id = id;
    a.start_heading = start_h;
    a.end_heading = end_h;
    const Vec2 end = quarter({static_cast<double>(ix), static_cast<double>(iy)}, q);
    a.delta_ix = std::llround(end.x);
    a.delta_iy = std::llround(end.y);
    for (Vec2& p : local.points) p = quarter(p, q);
    local.update_headings();
    a.path = local;
    a.arc_length = local.arc_length();
    a.n_segments = local.size() - 1;
    if (!(start_h == end_h && iy == 0)) a.coeffs = {0.0, 1.0, 0.0, 0.0};
    return a;
}

inline ControlAction straight(std::size_t id, int h, std::int64_t cells, int q, const LatticeConfig& cfg,
                              double delta) {
    const double len = static_cast<double>(cells) * cfg.dx;
    return curve_action(id, h, h, cells, 0, [len](double t) { return Vec2{len * t, 0.0}; }, q, cfg, delta);
}

/// Smooth lateral shift by `lat` cells over `cells` cells.
inline ControlAction lane_change(std::size_t id, int h, std::int64_t cells, std::int64_t lat, int q,
                                 const LatticeConfig& cfg, double delta) {
    const double len = static_cast<double>(cells) * cfg.dx;
    const double off = static_cast<double>(lat) * cfg.dy;
    return curve_action(
        id, h, h, cells, lat,
        [len, off](double t) { return Vec2{len * t, off * (3.0 * t * t - 2.0 * t * t * t)}; }, q, cfg, delta);
}

/// Quarter-circle turn of radius r cells; left if `left`.
inline ControlAction turn(std::size_t id, int h, int end_h, std::int64_t r, bool left, int q,
                          const LatticeConfig& cfg, double delta) {
    const double radius = static_cast<double>(r) * cfg.dx;
    const double sign = left ? 1.0 : -1.0;
    return curve_action(
        id, h, end_h, r, left ? r : -r,
        [radius, sign](double t) {
            const double a = t * std::numbers::pi / 2.0;
            return Vec2{radius * std::sin(a), sign * radius * (1.0 - std::cos(a))};
        },
        q, cfg, delta);
}

/// Full 4-heading family: per heading a 1-cell and 2-cell straight, left and
/// right quarter turns of radius 2 cells, and left/right lane changes.
inline std::vector<ControlAction> four_heading_family(const LatticeConfig& cfg, double delta) {
    std::vector<ControlAction> out;
    std::size_t id = 0;
    for (int h = 0; h < 4; ++h) {
        out.push_back(straight(id++, h, 1, h, cfg, delta));
        out.push_back(straight(id++, h, 2, h, cfg, delta));
        out.push_back(turn(id++, h, (h + 1) % 4, 2, true, h, cfg, delta));
        out.push_back(turn(id++, h, (h + 3) % 4, 2, false, h, cfg, delta));
        out.push_back(lane_change(id++, h, 4, 1, h, cfg, delta));
        out.push_back(lane_change(id++, h, 4, -1, h, cfg, delta));
    }
    return out;
}

/// Smooth random path of K points spaced delta, starting at the origin with
/// heading 0.
template <class Rng>
SampledPath random_smooth_path(Rng& rng, std::size_t K, double delta, double turn_sigma = 0.15) {
    std::normal_distribution<double> turn(0.0, turn_sigma);
    std::vector<Vec2> pts{{0.0, 0.0}};
    double heading = 0.0;
    double rate = 0.0;
    for (std::size_t k = 1; k < K; ++k) {
        pts.push_back(pts.back() + delta * Vec2{std::cos(heading), std::sin(heading)});
        rate = 0.7 * rate + turn(rng);
        heading += rate;
    }
    return make_sampled(std::move(pts), delta);
}

/// Random walk over `cs` from the origin vertex (heading 0); the first K
/// points of the concatenation, optionally jittered (first point kept).
template <class Rng>
SampledPath random_action_walk(Rng& rng, const ControlSet& cs, std::size_t K, double noise = 0.0) {
    std::vector<const ControlAction*> seq;
    LatticeVertex u{0, 0, 0};
    std::size_t k = 0;
    while (k + 1 < K) {
        const auto options = cs.for_heading(u.itheta);
        const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng);
        const ControlAction& c = cs.all()[options[pick]];
        seq.push_back(&c);
        u = {u.ix + c.delta_ix, u.iy + c.delta_iy, c.end_heading};
        k += c.n_segments;
    }
    SampledPath full = concatenate(seq, LatticeVertex{0, 0, 0}, cs.lattice());
    full.points.resize(K);
    std::normal_distribution<double> jitter(0.0, noise);
    if (noise > 0.0) {
        for (std::size_t i = 1; i < full.points.size(); ++i) full.points[i] = full.points[i] + Vec2{jitter(rng), jitter(rng)};
    }
    full.update_headings();
    return full;
}

}  // namespace testkit
