#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "advscen/geometry.hpp"

namespace advscen {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Kinematic bicycle state. a is the forward acceleration applied over the
/// step starting at this state (0 on terminal states).
struct BicycleState {
    double x{0};      // [m]
    double y{0};      // [m]
    double theta{0};  // [rad]
    double v{0};      // [m/s]
    double kappa{0};  // path curvature [1/m]
    double a{0};      // [m/s^2]

    Vec2 position() const { return {x, y}; }
    Pose2 pose() const { return {x, y, theta}; }
    bool finite() const;
    friend bool operator==(const BicycleState&, const BicycleState&) = default;
};

struct Trajectory {
    std::vector<BicycleState> states;  // uniformly spaced at the scenario dt

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }
    const BicycleState& operator[](std::size_t i) const { return states[i]; }
    BicycleState& operator[](std::size_t i) { return states[i]; }

    Polyline centerline() const;
    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct Actor {
    int id{0};
    double length{0};  // footprint [m]
    double width{0};   // footprint [m]
    bool is_perturbable{true};
    Trajectory trajectory;

    OrientedBox box_at(const BicycleState& s) const {
        return {s.position(), s.theta, length, width};
    }
};

struct Lane {
    Polyline centerline;
    double width{0};  // full corridor width [m]
};

struct HDMap {
    std::vector<Lane> lanes;
    std::vector<Polygon> static_obstacles;  // buildings / props flanking the lanes

    /// On-road iff the point is within lateral half-width of some centerline.
    bool on_road(const Vec2& p) const;
    /// Lane whose centerline is closest to p (nullptr on an empty map).
    const Lane* nearest_lane(const Vec2& p) const;
};

// SDV footprint shared by planning, plausibility and metrics.
inline constexpr double kSdvLength = 4.8;  // [m]
inline constexpr double kSdvWidth = 2.0;   // [m]

inline OrientedBox sdv_box(const BicycleState& s) {
    return {s.position(), s.theta, kSdvLength, kSdvWidth};
}

struct Scenario {
    HDMap map;
    std::vector<Actor> actors;
    Trajectory sdv_expert;  // recorded human/SDV trajectory over the full horizon
    double dt{0.5};         // [s]
    int n_history{2};       // observation steps
    int n_future{10};       // planning steps

    int horizon() const { return n_history + n_future; }
    /// Index of the last observed step ("now"); planning starts here.
    int now_index() const { return n_history - 1; }

    const Actor* find_actor(int id) const;
    const Actor& actor_by_id(int id) const;

    /// Throws ValidationError on the first violated invariant. Also enforces
    /// that the recorded scene is collision-free (actor/actor, actor/expert,
    /// footprint/static) at every step, which downstream modules rely on.
    void validate() const;
};

}  // namespace advscen
