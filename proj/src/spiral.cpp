#include "latlearn/spiral.hpp"

#include "latlearn/error.hpp"
#include "latlearn/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace latlearn {

double CubicSpiral::curvature(double s) const {
    const auto& [a, b, c, d] = coeffs;
    return a + s * (b + s * (c + s * d));
}

double CubicSpiral::heading(double s) const {
    const auto& [a, b, c, d] = coeffs;
    return s * (a + s * (b / 2.0 + s * (c / 3.0 + s * d / 4.0)));
}

double CubicSpiral::max_abs_curvature() const {
    double best = std::max(std::abs(curvature(0.0)), std::abs(curvature(sf)));
    // kappa'(s) = b + 2 c s + 3 d s^2
    const double qa = 3.0 * coeffs[3];
    const double qb = 2.0 * coeffs[2];
    const double qc = coeffs[1];
    auto consider = [&](double s) {
        if (s > 0.0 && s < sf) best = std::max(best, std::abs(curvature(s)));
    };
    if (std::abs(qa) < 1e-14) {
        if (std::abs(qb) > 1e-14) consider(-qc / qb);
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double r = std::sqrt(disc);
            consider((-qb + r) / (2.0 * qa));
            consider((-qb - r) / (2.0 * qa));
        }
    }
    return best;
}

Pose2D CubicSpiral::pose_at(double s, int nodes) const {
    if (nodes < 3) nodes = 3;
    if (nodes % 2 == 0) ++nodes;
    const double h = s / static_cast<double>(nodes - 1);
    double sx = 0.0;
    double sy = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double w = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double th = heading(h * i);
        sx += w * std::cos(th);
        sy += w * std::sin(th);
    }
    return Pose2D(sx * h / 3.0, sy * h / 3.0, heading(s));
}

namespace {

struct Params {
    double b;
    double c;
    double sf;
};

CubicSpiral make_spiral(const Params& p) {
    CubicSpiral sp;
    // kappa(sf) = 0 fixes d given a = 0.
    const double d = -(p.b + p.c * p.sf) / (p.sf * p.sf);
    sp.coeffs = {0.0, p.b + 0.0, p.c + 0.0, d + 0.0};
    sp.sf = p.sf;
    return sp;
}

std::array<double, 3> residual(const Params& p, const Pose2D& target, int nodes) {
    const CubicSpiral sp = make_spiral(p);
    const Pose2D end = sp.pose_at(p.sf, nodes);
    return {end.x - target.x, end.y - target.y, sp.heading(p.sf) - target.theta};
}

double norm3(const std::array<double, 3>& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

// Solves A x = rhs for 3x3 A by partial-pivot elimination; false if singular.
bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> rhs, std::array<double, 3>& x) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-14) return false;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int k = col; k < 3; ++k) a[r][k] -= f * a[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double v = rhs[r];
        for (int k = r + 1; k < 3; ++k) v -= a[r][k] * x[k];
        x[r] = v / a[r][r];
    }
    return true;
}

// Small-angle guess: heading and lateral offset are linear in (b, c).
Params initial_guess(const Pose2D& target, double sf) {
    const double a11 = sf * sf / 4.0;
    const double a12 = sf * sf * sf / 12.0;
    const double a21 = 7.0 * sf * sf * sf / 60.0;
    const double a22 = sf * sf * sf * sf / 30.0;
    const double det = a11 * a22 - a12 * a21;
    const double b = (target.theta * a22 - a12 * target.y) / det;
    const double c = (a11 * target.y - a21 * target.theta) / det;
    return {b + 0.0, c + 0.0, sf};
}

struct NewtonOutcome {
    bool converged = false;
    Params params{};
    int iterations = 0;
};

NewtonOutcome newton(Params p, const Pose2D& target, const SpiralSolverOptions& opts, double chord) {
    NewtonOutcome out;
    auto r = residual(p, target, opts.simpson_nodes);
    double rn = norm3(r);
    for (int it = 0; it < opts.max_iterations; ++it) {
        out.iterations = it;
        if (rn <= opts.tolerance) {
            out.converged = true;
            out.params = p;
            return out;
        }
        std::array<std::array<double, 3>, 3> jac{};
        double* fields[3] = {&p.b, &p.c, &p.sf};
        for (int k = 0; k < 3; ++k) {
            const double orig = *fields[k];
            const double h = 1e-7 * std::max(1.0, std::abs(orig));
            *fields[k] = orig + h;
            const auto rp = residual(p, target, opts.simpson_nodes);
            *fields[k] = orig - h;
            const auto rm = residual(p, target, opts.simpson_nodes);
            *fields[k] = orig;
            for (int row = 0; row < 3; ++row) jac[row][k] = (rp[row] - rm[row]) / (2.0 * h);
        }
        std::array<double, 3> step{};
        if (!solve3(jac, {-r[0], -r[1], -r[2]}, step)) return out;

        double alpha = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 20; ++halving, alpha *= 0.5) {
            Params trial{p.b + alpha * step[0], p.c + alpha * step[1], p.sf + alpha * step[2]};
            if (!(trial.sf > 0.5 * chord)) continue;
            const auto rt = residual(trial, target, opts.simpson_nodes);
            const double rtn = norm3(rt);
            if (rtn < rn) {
                p = trial;
                r = rt;
                rn = rtn;
                improved = true;
                break;
            }
        }
        if (!improved) return out;
    }
    out.iterations = opts.max_iterations;
    if (rn <= opts.tolerance) {
        out.converged = true;
        out.params = p;
    }
    return out;
}

}  // namespace

SpiralSolution solve_spiral_bvp(const Pose2D& target, double kappa_max, const SpiralSolverOptions& opts) {
    SpiralSolution result;
    result.failure = SpiralFailure::NoConvergence;
    if (!(target.x > 0.0)) return result;

    const double chord = std::hypot(target.x, target.y);
    const double th = target.theta;
    if (std::abs(target.y) <= 1e-9 * chord && std::abs(th) <= 1e-12) {
        result.spiral = CubicSpiral{{0.0, 0.0, 0.0, 0.0}, target.x};
        result.failure = SpiralFailure::None;
        return result;
    }
    const double sf0 = chord * (th * th / 5.0 + 1.0) + 2.0 * std::abs(th) / 5.0;

    bool any_converged = false;
    std::optional<CubicSpiral> over_limit;
    for (double scale : {1.0, 1.25, 0.9, 1.5, 2.0, 0.8, 2.5}) {
        const Params guess = initial_guess(target, std::max(chord, sf0 * scale));
        const NewtonOutcome n = newton(guess, target, opts, chord);
        result.iterations += n.iterations;
        if (!n.converged) continue;
        const CubicSpiral sp = make_spiral(n.params);
        if (sp.sf < chord - 1e-9) continue;
        any_converged = true;
        if (sp.max_abs_curvature() <= kappa_max) {
            result.spiral = sp;
            result.failure = SpiralFailure::None;
            return result;
        }
        if (!over_limit) over_limit = sp;
    }
    result.failure = any_converged ? SpiralFailure::CurvatureExceeded : SpiralFailure::NoConvergence;
    return result;
}

SampledPath sample_spiral(const CubicSpiral& sp, double delta) {
    const std::vector<double> stations = sample_stations(sp.sf, delta);
    std::vector<Vec2> pts;
    pts.reserve(stations.size());
    for (double s : stations) {
        if (s == 0.0) {
            pts.push_back({0.0, 0.0});
            continue;
        }
        const Pose2D p = sp.pose_at(s);
        pts.push_back({p.x, p.y});
    }
    return make_sampled(std::move(pts), delta);
}

DenseSetConfig DenseSetConfig::standard() {
    DenseSetConfig cfg;
    cfg.theta_endpoints = {0.0, std::atan(1.0 / 3.0), std::atan(0.5), std::numbers::pi / 4.0, std::atan(2.0),
                           std::atan(3.0)};
    return cfg;
}

void DenseSetConfig::validate() const {
    lattice.validate();
    if (!(x_min > 0.0) || x_max < x_min || y_max < y_min) {
        throw Error(ErrorCode::InvalidArgument, "dense set ranges are empty or start at x <= 0");
    }
    if (!(kappa_max > 0.0) || !(delta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa_max and delta must be positive");
    }
    if (theta_endpoints.empty()) throw Error(ErrorCode::InvalidArgument, "no endpoint headings configured");
}

namespace {

struct Candidate {
    int start_heading;
    std::int64_t ix;
    std::int64_t iy;
    int end_heading;
    Pose2D local_target;
};

bool in_endpoint_set(double local_heading, const std::vector<double>& endpoints) {
    for (double e : endpoints) {
        if (angle_diff(local_heading, e) < 1e-9 || angle_diff(local_heading, -e) < 1e-9) return true;
    }
    return false;
}

ControlAction rotate_quarter(const ControlAction& a, int shift, int n_headings) {
    ControlAction r = a;
    r.start_heading = (a.start_heading + shift) % n_headings;
    r.end_heading = (a.end_heading + shift) % n_headings;
    r.delta_ix = -a.delta_iy;
    r.delta_iy = a.delta_ix;
    for (auto& p : r.path.points) p = {-p.y + 0.0, p.x};
    r.path.update_headings();
    return r;
}

}  // namespace

ControlSet generate_dense_control_set(const DenseSetConfig& cfg) {
    cfg.validate();
    const LatticeConfig& lat = cfg.lattice;
    const int n_headings = lat.num_headings();
    const std::optional<int> shift = lat.quarter_turn_shift();
    const int base_headings = shift ? *shift : n_headings;

    const double reach = std::hypot(std::max(std::abs(cfg.x_min), std::abs(cfg.x_max)),
                                    std::max(std::abs(cfg.y_min), std::abs(cfg.y_max)));
    const auto ix_max = static_cast<std::int64_t>(std::ceil(reach / lat.dx));
    const auto iy_max = static_cast<std::int64_t>(std::ceil(reach / lat.dy));
    constexpr double eps = 1e-9;

    std::vector<Candidate> candidates;
    for (int h = 0; h < base_headings; ++h) {
        const double th = lat.headings[static_cast<std::size_t>(h)];
        for (std::int64_t ix = -ix_max; ix <= ix_max; ++ix) {
            for (std::int64_t iy = -iy_max; iy <= iy_max; ++iy) {
                const Vec2 local = rotate({static_cast<double>(ix) * lat.dx, static_cast<double>(iy) * lat.dy}, -th);
                if (local.x < cfg.x_min - eps || local.x > cfg.x_max + eps) continue;
                if (local.y < cfg.y_min - eps || local.y > cfg.y_max + eps) continue;
                for (int e = 0; e < n_headings; ++e) {
                    const double local_heading = normalize_angle(lat.headings[static_cast<std::size_t>(e)] - th);
                    if (!in_endpoint_set(local_heading, cfg.theta_endpoints)) continue;
                    candidates.push_back({h, ix, iy, e, Pose2D(local.x, local.y, local_heading)});
                }
            }
        }
    }

    std::vector<std::optional<ControlAction>> solved(candidates.size());
    parallel_for(candidates.size(), default_jobs(), [&](std::size_t i) {
        const Candidate& cand = candidates[i];
        const SpiralSolution sol = solve_spiral_bvp(cand.local_target, cfg.kappa_max);
        if (!sol.ok()) return;
        const double th = lat.headings[static_cast<std::size_t>(cand.start_heading)];
        ControlAction a;
        a.start_heading = cand.start_heading;
        a.end_heading = cand.end_heading;
        a.delta_ix = cand.ix;
        a.delta_iy = cand.iy;
        a.coeffs = sol.spiral->coeffs;
        a.arc_length = sol.spiral->sf;
        SampledPath local = sample_spiral(*sol.spiral, cfg.delta);
        a.path = transform(local, Pose2D(0.0, 0.0, th));
        a.path.points.front() = {0.0, 0.0};
        // Snap the endpoint onto its lattice vertex; the solver residual is below 1e-6.
        a.path.points.back() = {static_cast<double>(cand.ix) * lat.dx, static_cast<double>(cand.iy) * lat.dy};
        a.path.update_headings();
        a.n_segments = a.path.size() - 1;
        solved[i] = std::move(a);
    });

    std::vector<ControlAction> base;
    for (auto& s : solved) {
        if (s) base.push_back(std::move(*s));
    }
    std::vector<ControlAction> actions;
    if (shift) {
        std::vector<ControlAction> current = base;
        actions = base;
        for (int q = 1; q < 4; ++q) {
            for (auto& a : current) a = rotate_quarter(a, *shift, n_headings);
            actions.insert(actions.end(), current.begin(), current.end());
        }
    } else {
        actions = std::move(base);
    }
    std::stable_sort(actions.begin(), actions.end(), [](const ControlAction& a, const ControlAction& b) {
        return a.start_heading < b.start_heading;
    });
    for (std::size_t i = 0; i < actions.size(); ++i) actions[i].id = i;
    if (actions.empty()) throw Error(ErrorCode::EmptySet, "no control action could be solved");
    return ControlSet(lat, cfg.delta, std::move(actions));
}

}  // namespace latlearn
