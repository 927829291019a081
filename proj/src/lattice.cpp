#include "latlearn/lattice.hpp"

#include "latlearn/error.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace latlearn {

LatticeConfig LatticeConfig::standard(double resolution) {
    LatticeConfig cfg;
    cfg.dx = resolution;
    cfg.dy = resolution;
    const double base[4] = {0.0, std::atan(0.5), std::numbers::pi / 4.0, std::atan(2.0)};
    for (int q = 0; q < 4; ++q) {
        for (double b : base) cfg.headings.push_back(normalize_angle(b + q * std::numbers::pi / 2.0));
    }
    return cfg;
}

std::optional<int> LatticeConfig::heading_index(double angle, double tol) const {
    for (int i = 0; i < num_headings(); ++i) {
        if (angle_diff(angle, headings[static_cast<std::size_t>(i)]) <= tol) return i;
    }
    return std::nullopt;
}

std::optional<int> LatticeConfig::quarter_turn_shift() const {
    const int n = num_headings();
    if (n == 0 || n % 4 != 0 || dx != dy) return std::nullopt;
    const int shift = n / 4;
    for (int i = 0; i < n; ++i) {
        const double rotated = headings[static_cast<std::size_t>(i)] + std::numbers::pi / 2.0;
        if (angle_diff(rotated, headings[static_cast<std::size_t>((i + shift) % n)]) > 1e-9) {
            return std::nullopt;
        }
    }
    return shift;
}

void LatticeConfig::validate() const {
    if (!(dx > 0.0) || !(dy > 0.0)) throw Error(ErrorCode::InvalidArgument, "lattice resolution must be positive");
    if (headings.empty()) throw Error(ErrorCode::InvalidArgument, "lattice needs at least one heading");
    for (std::size_t i = 0; i < headings.size(); ++i) {
        if (std::abs(normalize_angle(headings[i]) - headings[i]) > 1e-12) {
            throw Error(ErrorCode::InvalidArgument, "lattice headings must lie in (-pi, pi]");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (angle_diff(headings[i], headings[j]) < 1e-9) {
                throw Error(ErrorCode::InvalidArgument, "lattice headings must be distinct");
            }
        }
    }
}

ControlSet::ControlSet(LatticeConfig lattice, double delta, std::vector<ControlAction> actions)
    : lattice_(std::move(lattice)), delta_(delta), actions_(std::move(actions)) {
    std::stable_sort(actions_.begin(), actions_.end(),
                     [](const ControlAction& a, const ControlAction& b) { return a.id < b.id; });
    by_heading_.assign(static_cast<std::size_t>(lattice_.num_headings()), {});
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        const int h = actions_[i].start_heading;
        if (h < 0 || h >= lattice_.num_headings() || actions_[i].end_heading < 0 ||
            actions_[i].end_heading >= lattice_.num_headings()) {
            throw Error(ErrorCode::InvalidArgument, "control action heading index out of range");
        }
        if (i > 0 && actions_[i - 1].id == actions_[i].id) {
            throw Error(ErrorCode::InvalidArgument, "duplicate control action id " + std::to_string(actions_[i].id));
        }
        by_heading_[static_cast<std::size_t>(h)].push_back(i);
    }
}

std::span<const std::size_t> ControlSet::for_heading(int h) const {
    if (h < 0 || static_cast<std::size_t>(h) >= by_heading_.size()) return {};
    return by_heading_[static_cast<std::size_t>(h)];
}

const ControlAction* ControlSet::find_id(std::size_t id) const {
    auto it = std::lower_bound(actions_.begin(), actions_.end(), id,
                               [](const ControlAction& a, std::size_t v) { return a.id < v; });
    return (it != actions_.end() && it->id == id) ? &*it : nullptr;
}

bool ControlSet::contains_id(std::size_t id) const { return find_id(id) != nullptr; }

ControlSet ControlSet::with(const ControlAction& extra) const {
    if (contains_id(extra.id)) return *this;
    std::vector<ControlAction> actions = actions_;
    actions.push_back(extra);
    return ControlSet(lattice_, delta_, std::move(actions));
}

ControlSet ControlSet::subset(std::span<const std::size_t> ids) const {
    std::vector<ControlAction> actions;
    actions.reserve(ids.size());
    for (std::size_t id : ids) {
        const ControlAction* a = find_id(id);
        if (a == nullptr) throw Error(ErrorCode::InvalidArgument, "unknown control action id " + std::to_string(id));
        actions.push_back(*a);
    }
    return ControlSet(lattice_, delta_, std::move(actions));
}

std::vector<std::size_t> ControlSet::ids() const {
    std::vector<std::size_t> out;
    out.reserve(actions_.size());
    for (const auto& a : actions_) out.push_back(a.id);
    return out;
}

namespace {

// Round to nearest; exact halves go to the smaller integer.
std::int64_t round_half_down(double r) {
    const double f = std::floor(r);
    return static_cast<std::int64_t>(r - f > 0.5 ? f + 1.0 : f);
}

}  // namespace

LatticeVertex snap_to_lattice(const Pose2D& p, const LatticeConfig& cfg) {
    LatticeVertex v;
    v.ix = round_half_down(p.x / cfg.dx);
    v.iy = round_half_down(p.y / cfg.dy);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.num_headings(); ++i) {
        const double d = angle_diff(p.theta, cfg.headings[static_cast<std::size_t>(i)]);
        if (d < best - 1e-12) {
            best = d;
            v.itheta = i;
        }
    }
    return v;
}

Vec2 vertex_position(const LatticeVertex& u, const LatticeConfig& cfg) {
    return {static_cast<double>(u.ix) * cfg.dx, static_cast<double>(u.iy) * cfg.dy};
}

Pose2D vertex_pose(const LatticeVertex& u, const LatticeConfig& cfg) {
    const Vec2 p = vertex_position(u, cfg);
    return Pose2D(p.x, p.y, cfg.headings.at(static_cast<std::size_t>(u.itheta)));
}

std::pair<LatticeVertex, std::size_t> apply_control_action(const LatticeVertex& u, const ControlAction& c,
                                                           std::size_t i) {
    if (c.start_heading != u.itheta) {
        throw Error(ErrorCode::HeadingMismatch, "action starts at heading " + std::to_string(c.start_heading) +
                                                    " but vertex has heading " + std::to_string(u.itheta));
    }
    return {LatticeVertex{u.ix + c.delta_ix, u.iy + c.delta_iy, c.end_heading}, i + c.n_segments};
}

SampledPath concatenate(std::span<const ControlAction* const> actions, const LatticeVertex& start,
                        const LatticeConfig& cfg) {
    SampledPath out;
    LatticeVertex u = start;
    out.points.push_back(vertex_position(u, cfg));
    for (const ControlAction* c : actions) {
        out.delta = c->path.delta;
        const Vec2 origin = vertex_position(u, cfg);
        for (std::size_t m = 1; m < c->path.size(); ++m) out.points.push_back(place(*c, origin, m));
        u = apply_control_action(u, *c, 0).first;
    }
    out.update_headings();
    return out;
}

}  // namespace latlearn
