#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace latlearn {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wrap an angle into (-pi, pi].
inline double normalize_angle(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

/// Absolute angular difference in [0, pi].
inline double angle_diff(double a, double b) { return std::abs(normalize_angle(a - b)); }

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Pose2D() = default;
    Pose2D(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

    Vec2 position() const { return {x, y}; }
};

/// Raw ingested path. Consecutive points are kept strictly apart.
class Polyline {
public:
    Polyline() = default;
    /// Drops consecutive near-duplicates (<= 1e-9 m); throws DegeneratePath if
    /// fewer than two distinct points remain.
    explicit Polyline(std::vector<Vec2> points);

    const std::vector<Vec2>& points() const { return points_; }
    double length() const;

private:
    std::vector<Vec2> points_;
};

/// Points spaced `delta` apart in arc length. The final segment may be
/// anywhere in [delta/2, 3*delta/2) so that the true endpoint is retained.
struct SampledPath {
    std::vector<Vec2> points;
    std::vector<double> headings;
    double delta = 0.0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    double arc_length() const;

    /// Recompute per-point chord headings (last heading replicated).
    void update_headings();
};

/// Build a SampledPath from points that already satisfy the spacing rule.
SampledPath make_sampled(std::vector<Vec2> points, double delta);

/// Arc lengths at which samples are taken for a curve of length `total`:
/// 0, delta, 2 delta, ... with the endpoint either appended (tail >= delta/2)
/// or substituted for the last regular sample.
std::vector<double> sample_stations(double total, double delta);

SampledPath resample_by_arclength(const Polyline& p, double delta);

/// Signed Menger curvature per point; endpoints copy their neighbour.
std::vector<double> curvature_profile(const SampledPath& p);

std::vector<SampledPath> slice_sliding_windows(const SampledPath& p, double window, double step);

/// Rigid motion taking points[0] to the origin and headings[0] to zero.
SampledPath normalize_to_origin(const SampledPath& p);

SampledPath transform(const SampledPath& p, const Pose2D& frame);

}  // namespace latlearn
