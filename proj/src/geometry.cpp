#include "latlearn/geometry.hpp"

#include "latlearn/error.hpp"

#include <algorithm>

namespace latlearn {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegeneratePath: return "DegeneratePath";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::CurvatureExceeded: return "CurvatureExceeded";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::HeadingMismatch: return "HeadingMismatch";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::IndexError: return "IndexError";
        case ErrorCode::Stuck: return "Stuck";
        case ErrorCode::NoPath: return "NoPath";
        case ErrorCode::Explosion: return "Explosion";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::MissingStraight: return "MissingStraight";
        case ErrorCode::EmptyGoal: return "EmptyGoal";
        case ErrorCode::NoPlan: return "NoPlan";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Polyline::Polyline(std::vector<Vec2> points) {
    points_.reserve(points.size());
    for (const Vec2& p : points) {
        if (points_.empty() || distance(points_.back(), p) > 1e-9) points_.push_back(p);
    }
    if (points_.size() < 2) {
        throw Error(ErrorCode::DegeneratePath, "polyline needs at least two distinct points");
    }
}

double Polyline::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) total += distance(points_[i - 1], points_[i]);
    return total;
}

double SampledPath::arc_length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
    return total;
}

void SampledPath::update_headings() {
    headings.assign(points.size(), 0.0);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const Vec2 d = points[i + 1] - points[i];
        headings[i] = std::atan2(d.y, d.x);
    }
    if (points.size() >= 2) headings.back() = headings[points.size() - 2];
}

SampledPath make_sampled(std::vector<Vec2> points, double delta) {
    SampledPath out;
    out.points = std::move(points);
    out.delta = delta;
    out.update_headings();
    return out;
}

std::vector<double> sample_stations(double total, double delta) {
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    constexpr double eps = 1e-9;
    if (total < 0.5 * delta - eps) {
        throw Error(ErrorCode::DegeneratePath, "path shorter than delta/2");
    }
    const auto full = static_cast<std::size_t>(std::floor(total / delta + eps));
    const double tail = total - static_cast<double>(full) * delta;

    std::vector<double> stations;
    stations.reserve(full + 2);
    if (full == 0) {
        stations = {0.0, total};
        return stations;
    }
    // Leftover below half a step is merged into the last full segment.
    const bool append_tail = tail >= 0.5 * delta - eps;
    const std::size_t regular = append_tail ? full : full - 1;
    for (std::size_t i = 0; i <= regular; ++i) stations.push_back(static_cast<double>(i) * delta);
    stations.push_back(total);
    return stations;
}

SampledPath resample_by_arclength(const Polyline& p, double delta) {
    const auto& pts = p.points();
    std::vector<double> cumulative(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + distance(pts[i - 1], pts[i]);
    }
    const double total = cumulative.back();
    const std::vector<double> stations = sample_stations(total, delta);

    std::vector<Vec2> out;
    out.reserve(stations.size());
    std::size_t seg = 1;
    for (std::size_t k = 0; k + 1 < stations.size(); ++k) {
        const double s = stations[k];
        while (seg + 1 < pts.size() && cumulative[seg] < s) ++seg;
        const double len = cumulative[seg] - cumulative[seg - 1];
        const double t = std::clamp((s - cumulative[seg - 1]) / len, 0.0, 1.0);
        out.push_back(pts[seg - 1] + t * (pts[seg] - pts[seg - 1]));
    }
    out.push_back(pts.back());
    return make_sampled(std::move(out), delta);
}

std::vector<double> curvature_profile(const SampledPath& p) {
    const std::size_t n = p.size();
    if (n < 3) throw Error(ErrorCode::DegeneratePath, "curvature needs at least three points");
    std::vector<double> kappa(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec2 a = p.points[i - 1];
        const Vec2 b = p.points[i];
        const Vec2 c = p.points[i + 1];
        const double denom = distance(a, b) * distance(b, c) * distance(a, c);
        kappa[i] = denom > 0.0 ? 2.0 * cross(b - a, c - b) / denom : 0.0;
    }
    kappa.front() = kappa[1];
    kappa.back() = kappa[n - 2];
    return kappa;
}

std::vector<SampledPath> slice_sliding_windows(const SampledPath& p, double window, double step) {
    if (window < p.delta - 1e-12 || step < p.delta - 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "window and step must be at least delta");
    }
    const auto window_pts = static_cast<std::size_t>(std::llround(window / p.delta));
    const auto step_pts = static_cast<std::size_t>(std::llround(step / p.delta));
    std::vector<SampledPath> slices;
    if (p.size() == 0) return slices;
    for (std::size_t start = 0; start + window_pts <= p.size() - 1; start += step_pts) {
        SampledPath s;
        s.delta = p.delta;
        s.points.assign(p.points.begin() + static_cast<std::ptrdiff_t>(start),
                        p.points.begin() + static_cast<std::ptrdiff_t>(start + window_pts + 1));
        s.update_headings();
        slices.push_back(std::move(s));
    }
    return slices;
}

SampledPath transform(const SampledPath& p, const Pose2D& frame) {
    SampledPath out;
    out.delta = p.delta;
    out.points.reserve(p.size());
    const double c = std::cos(frame.theta);
    const double s = std::sin(frame.theta);
    for (const Vec2& v : p.points) {
        out.points.push_back({frame.x + c * v.x - s * v.y, frame.y + s * v.x + c * v.y});
    }
    out.headings.reserve(p.headings.size());
    for (double h : p.headings) out.headings.push_back(normalize_angle(h + frame.theta));
    return out;
}

SampledPath normalize_to_origin(const SampledPath& p) {
    if (p.empty()) throw Error(ErrorCode::DegeneratePath, "cannot normalize an empty path");
    const Vec2 origin = p.points.front();
    const double h0 = p.headings.empty() ? 0.0 : p.headings.front();
    const double c = std::cos(-h0);
    const double s = std::sin(-h0);

    SampledPath out;
    out.delta = p.delta;
    out.points.reserve(p.size());
    for (const Vec2& v : p.points) {
        const Vec2 d = v - origin;
        out.points.push_back({c * d.x - s * d.y, s * d.x + c * d.y});
    }
    out.headings.reserve(p.headings.size());
    for (double h : p.headings) out.headings.push_back(normalize_angle(h - h0));
    if (!out.headings.empty()) out.headings.front() = 0.0;
    return out;
}

}  // namespace latlearn
