#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace advscen {

struct Vec2 {
    double x{0};
    double y{0};

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    friend Vec2 operator*(double s, const Vec2& v) { return v * s; }
    friend bool operator==(const Vec2&, const Vec2&) = default;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
    Vec2 left_normal() const { return {-y, x}; }
};

struct Pose2 {
    double x{0};
    double y{0};
    double theta{0};

    Vec2 position() const { return {x, y}; }
    Vec2 to_world(const Vec2& local) const { return position() + local.rotated(theta); }
    Vec2 to_local(const Vec2& world) const { return (world - position()).rotated(-theta); }
    friend bool operator==(const Pose2&, const Pose2&) = default;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

using Polygon = std::vector<Vec2>;  // simple polygon, vertex loop

/// Axis-aligned rectangle in its own frame, posed in the world by
/// center + heading. length is along the heading axis.
struct OrientedBox {
    Vec2 center;
    double heading{0};
    double length{0};
    double width{0};

    std::array<Vec2, 4> corners() const;
    bool contains(const Vec2& p, double eps = 0.0) const;
    OrientedBox inflated(double margin) const {
        return {center, heading, length + 2.0 * margin, width + 2.0 * margin};
    }
};

/// Separating-axis overlap test for two oriented rectangles.
/// Touching boundaries count as overlap.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

bool point_in_polygon(const Polygon& poly, const Vec2& p);

/// Distance along the ray (origin, unit dir) to segment [a, b], or +inf if missed.
double ray_segment_distance(const Vec2& origin, const Vec2& dir, const Vec2& a, const Vec2& b);

/// Piecewise-linear path with arc-length lookup and point projection.
class Polyline {
public:
    Polyline() = default;
    explicit Polyline(std::vector<Vec2> pts);

    std::size_t size() const { return pts_.size(); }
    const std::vector<Vec2>& points() const { return pts_; }
    double length() const { return cum_.empty() ? 0.0 : cum_.back(); }

    Vec2 point_at(double s) const;     // clamped to [0, length]
    double heading_at(double s) const;
    Vec2 left_normal_at(double s) const { return Vec2{1, 0}.rotated(heading_at(s)).left_normal(); }

    struct Projection {
        double station{0};   // arc length of the closest point
        double lateral{0};   // signed offset, left of travel positive
        double distance{0};  // euclidean distance to the closest point
    };
    Projection project(const Vec2& p) const;

private:
    std::vector<Vec2> pts_;
    std::vector<double> cum_;  // cumulative arc length per vertex

    std::size_t segment_index(double s) const;
};

}  // namespace advscen
