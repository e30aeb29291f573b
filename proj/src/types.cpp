#include "advscen/types.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace advscen {

bool BicycleState::finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta) &&
           std::isfinite(v) && std::isfinite(kappa) && std::isfinite(a);
}

Polyline Trajectory::centerline() const {
    std::vector<Vec2> pts;
    pts.reserve(states.size());
    for (const auto& s : states) pts.push_back(s.position());
    return Polyline(std::move(pts));
}

bool HDMap::on_road(const Vec2& p) const {
    for (const auto& lane : lanes) {
        if (lane.centerline.project(p).distance <= 0.5 * lane.width) return true;
    }
    return false;
}

const Lane* HDMap::nearest_lane(const Vec2& p) const {
    const Lane* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& lane : lanes) {
        const double d = lane.centerline.project(p).distance;
        if (d < best_dist) {
            best_dist = d;
            best = &lane;
        }
    }
    return best;
}

const Actor* Scenario::find_actor(int id) const {
    for (const auto& a : actors) {
        if (a.id == id) return &a;
    }
    return nullptr;
}

const Actor& Scenario::actor_by_id(int id) const {
    const Actor* a = find_actor(id);
    if (!a) throw ValidationError("no actor with id " + std::to_string(id));
    return *a;
}

namespace {

void fail(const std::string& msg) { throw ValidationError(msg); }

void check_trajectory(const Trajectory& t, int horizon, const std::string& who) {
    if (static_cast<int>(t.size()) != horizon) {
        std::ostringstream os;
        os << who << ": state count mismatch (got " << t.size() << ", expected " << horizon << ")";
        fail(os.str());
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i].finite()) fail(who + ": non-finite state at index " + std::to_string(i));
    }
}

bool box_hits_polygon(const OrientedBox& box, const Polygon& poly) {
    // corner containment both ways, then edge crossings
    for (const auto& c : box.corners()) {
        if (point_in_polygon(poly, c)) return true;
    }
    for (const auto& v : poly) {
        if (box.contains(v)) return true;
    }
    const auto corners = box.corners();
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec2 a = corners[i];
        const Vec2 b = corners[(i + 1) % 4];
        const Vec2 d = b - a;
        const double len = d.norm();
        if (len == 0.0) continue;
        const Vec2 dir = d * (1.0 / len);
        for (std::size_t j = 0, n = poly.size(); j < n; ++j) {
            if (ray_segment_distance(a, dir, poly[j], poly[(j + 1) % n]) <= len) return true;
        }
    }
    return false;
}

}  // namespace

void Scenario::validate() const {
    if (!(dt > 0.0)) fail("dt must be > 0");
    if (n_history < 1) fail("n_history must be >= 1");
    if (n_future < 1) fail("n_future must be >= 1");

    for (std::size_t i = 0; i < map.lanes.size(); ++i) {
        const auto& lane = map.lanes[i];
        if (lane.centerline.size() < 2) fail("lane " + std::to_string(i) + ": centerline needs >= 2 points");
        if (!(lane.width > 0.0)) fail("lane " + std::to_string(i) + ": width must be > 0");
    }
    for (std::size_t i = 0; i < map.static_obstacles.size(); ++i) {
        if (map.static_obstacles[i].size() < 3) {
            fail("static_obstacles[" + std::to_string(i) + "]: polygon needs >= 3 vertices");
        }
    }

    check_trajectory(sdv_expert, horizon(), "sdv_expert");
    std::set<int> ids;
    for (const auto& actor : actors) {
        const std::string who = "actor " + std::to_string(actor.id);
        if (!ids.insert(actor.id).second) fail(who + ": duplicate id");
        if (!(actor.length > 0.0)) fail(who + ": length must be > 0");
        if (!(actor.width > 0.0)) fail(who + ": width must be > 0");
        check_trajectory(actor.trajectory, horizon(), who);
    }

    // Recorded scenes must be collision-free; feasibility and the sensor
    // editing pipeline both assume it.
    for (int t = 0; t < horizon(); ++t) {
        const OrientedBox ego = sdv_box(sdv_expert[t]);
        for (std::size_t i = 0; i < actors.size(); ++i) {
            const OrientedBox bi = actors[i].box_at(actors[i].trajectory[t]);
            if (boxes_overlap(bi, ego)) {
                fail("actor " + std::to_string(actors[i].id) + " overlaps sdv_expert at step " +
                     std::to_string(t));
            }
            for (std::size_t j = i + 1; j < actors.size(); ++j) {
                const OrientedBox bj = actors[j].box_at(actors[j].trajectory[t]);
                if (boxes_overlap(bi, bj)) {
                    fail("actor " + std::to_string(actors[i].id) + " overlaps actor " +
                         std::to_string(actors[j].id) + " at step " + std::to_string(t));
                }
            }
            for (std::size_t k = 0; k < map.static_obstacles.size(); ++k) {
                if (box_hits_polygon(bi, map.static_obstacles[k])) {
                    fail("actor " + std::to_string(actors[i].id) + " overlaps static obstacle " +
                         std::to_string(k) + " at step " + std::to_string(t));
                }
            }
        }
        for (std::size_t k = 0; k < map.static_obstacles.size(); ++k) {
            if (box_hits_polygon(ego, map.static_obstacles[k])) {
                fail("sdv_expert overlaps static obstacle " + std::to_string(k) + " at step " +
                     std::to_string(t));
            }
        }
    }
}

}  // namespace advscen
