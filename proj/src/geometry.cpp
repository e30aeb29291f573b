#include "advscen/geometry.hpp"

#include <algorithm>
#include <limits>

namespace advscen {

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a > M_PI) a -= 2.0 * M_PI;
    if (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

std::array<Vec2, 4> OrientedBox::corners() const {
    const double hl = 0.5 * length, hw = 0.5 * width;
    const Vec2 ax = Vec2{1, 0}.rotated(heading);
    const Vec2 ay = ax.left_normal();
    return {center + ax * hl + ay * hw, center - ax * hl + ay * hw,
            center - ax * hl - ay * hw, center + ax * hl - ay * hw};
}

bool OrientedBox::contains(const Vec2& p, double eps) const {
    const Vec2 local = (p - center).rotated(-heading);
    return std::abs(local.x) <= 0.5 * length + eps && std::abs(local.y) <= 0.5 * width + eps;
}

namespace {

struct Interval {
    double lo, hi;
};

Interval project_onto(const std::array<Vec2, 4>& corners, const Vec2& axis) {
    double lo = corners[0].dot(axis), hi = lo;
    for (std::size_t i = 1; i < 4; ++i) {
        const double v = corners[i].dot(axis);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

}  // namespace

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    const std::array<Vec2, 4> axes = {
        Vec2{1, 0}.rotated(a.heading), Vec2{0, 1}.rotated(a.heading),
        Vec2{1, 0}.rotated(b.heading), Vec2{0, 1}.rotated(b.heading)};
    for (const Vec2& axis : axes) {
        const Interval ia = project_onto(ca, axis);
        const Interval ib = project_onto(cb, axis);
        if (ia.hi < ib.lo || ib.hi < ia.lo) return false;
    }
    return true;
}

bool point_in_polygon(const Polygon& poly, const Vec2& p) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double ray_segment_distance(const Vec2& origin, const Vec2& dir, const Vec2& a, const Vec2& b) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const Vec2 seg = b - a;
    const double denom = dir.cross(seg);
    if (denom == 0.0) return kInf;  // parallel (grazing hits resolve via adjacent edges)
    const Vec2 ao = a - origin;
    const double t = ao.cross(seg) / denom;   // distance along ray
    const double u = ao.cross(dir) / denom;   // parameter on segment
    if (t < 0.0 || u < 0.0 || u > 1.0) return kInf;
    return t;
}

Polyline::Polyline(std::vector<Vec2> pts) : pts_(std::move(pts)) {
    cum_.resize(pts_.size(), 0.0);
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        cum_[i] = cum_[i - 1] + (pts_[i] - pts_[i - 1]).norm();
    }
}

std::size_t Polyline::segment_index(double s) const {
    // index of the segment [i, i+1] containing arc length s
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    const std::size_t i = static_cast<std::size_t>(std::distance(cum_.begin(), it));
    if (i == 0) return 0;
    return std::min(i - 1, pts_.size() - 2);
}

Vec2 Polyline::point_at(double s) const {
    s = std::clamp(s, 0.0, length());
    const std::size_t i = segment_index(s);
    const double seg_len = cum_[i + 1] - cum_[i];
    const double t = seg_len > 0.0 ? (s - cum_[i]) / seg_len : 0.0;
    return pts_[i] + (pts_[i + 1] - pts_[i]) * t;
}

double Polyline::heading_at(double s) const {
    s = std::clamp(s, 0.0, length());
    const std::size_t i = segment_index(s);
    const Vec2 d = pts_[i + 1] - pts_[i];
    return std::atan2(d.y, d.x);
}

Polyline::Projection Polyline::project(const Vec2& p) const {
    Projection best;
    best.distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
        const Vec2 a = pts_[i];
        const Vec2 d = pts_[i + 1] - a;
        const double len2 = d.squared_norm();
        const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
        const Vec2 closest = a + d * t;
        const double dist = (p - closest).norm();
        if (dist < best.distance) {
            const double seg_len = std::sqrt(len2);
            best.distance = dist;
            best.station = cum_[i] + t * seg_len;
            // signed perpendicular offset w.r.t. the segment direction
            best.lateral = seg_len > 0.0 ? d.cross(p - a) / seg_len : 0.0;
        }
    }
    return best;
}

}  // namespace advscen
