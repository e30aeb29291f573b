#pragma once

#include <map>
#include <vector>

#include "advscen/kinematics.hpp"
#include "advscen/sensorsim.hpp"
#include "advscen/types.hpp"

namespace advscen::autonomy {

struct DetectParams {
    double cluster_dist = 0.7;  // single-linkage threshold [m]
    int min_points = 5;         // clusters below this are dropped (occlusion failure mode)
};

struct Detection {
    Vec2 center;  // world frame
    double heading{0};
    Vec2 half_extent;  // along/across the heading axis
    int n_points{0};

    OrientedBox box() const {
        return {center, heading, 2.0 * half_extent.x, 2.0 * half_extent.y};
    }
};

/// Euclidean clustering of non-background sweep points with a PCA box fit.
/// Clusters are reported in ascending order of their first point's ray index.
std::vector<Detection> detect(const sensorsim::Sweep& sweep, const DetectParams& params = {});

struct ObstacleForecast {
    double length{0};
    double width{0};
    std::vector<Pose2> poses;  // index 0 = now, then one per future step

    OrientedBox box_at(int t) const {
        const Pose2& p = poses[t];
        return {{p.x, p.y}, p.theta, length, width};
    }
};

struct ForecastParams {
    double gate = 3.0;          // association distance [m]
    double moving_speed = 0.5;  // below this the detection heading is kept
};

/// Nearest-neighbor association over consecutive frames plus constant-velocity
/// extrapolation; detections without a match get zero velocity.
std::vector<ObstacleForecast> forecast(const std::vector<std::vector<Detection>>& frames,
                                       double dt, int n_future,
                                       const ForecastParams& params = {});

struct PlannerWeights {
    double w_col = 1000.0;
    double w_lane = 1.0;
    double w_prog = 5.0;
    double w_comf = 0.1;

    friend bool operator==(const PlannerWeights&, const PlannerWeights&) = default;
};

struct PlannerInput {
    std::vector<sensorsim::Sweep> sweeps;     // n_history frames (empty for ground truth)
    HDMap map;
    std::vector<BicycleState> sdv_history;    // last entry = current state
    int n_future{10};
    double dt{0.5};
    PlannerWeights weights;
};

struct CostBreakdown {
    double collision{0};
    double lane{0};
    double progress{0};
    double comfort{0};
    double total() const { return collision + lane + progress + comfort; }
};

struct Plan {
    Trajectory trajectory;  // n_future + 1 states, starts at the current SDV state
    CostBreakdown costs;
    int candidate_index{-1};
    bool unavoidable{false};  // no collision-free candidate existed
};

/// Obstacle footprint inflation used by the collision cost term.
inline constexpr double kObstacleInflation = 0.3;  // [m]

/// Deterministic sampling planner: 5 lateral offsets x 8 terminal speeds x
/// 5 longitudinal shapes = 200 lane-frame candidates, each realized through
/// the bicycle rollout so every candidate respects the physical bounds.
/// Returns the argmin of the weighted cost; ties break on candidate index.
Plan plan(const PlannerInput& input, const std::vector<ObstacleForecast>& obstacles);

/// Rollout-realized lane-frame candidate (shared with scenario curation).
struct CandidateSpec {
    double target_offset{0};   // lateral offset from the centerline at horizon end [m]
    double terminal_speed{0};  // [m/s]
    double shape_exp{1.0};     // speed-profile exponent: <1 early, >1 late
};

Trajectory fit_lane_candidate(const HDMap& map, const BicycleState& now, const CandidateSpec& spec,
                              int n_steps, double dt,
                              const kinematics::PhysicalBounds& bounds = {});

enum class StackKind { kGroundTruth, kSensor };

struct StackConfig {
    StackKind kind = StackKind::kSensor;
    PlannerWeights weights;
    DetectParams detect;
    ForecastParams forecast;
    sensorsim::SensorParams sensor;
};

/// Black-box autonomy evaluation on a (possibly perturbed) world. The ground
/// truth stack feeds true actor trajectories to the planner; the sensor stack
/// runs detect -> forecast -> plan on simulated sweeps. `sim` optionally
/// reuses a cached SensorSim for the sensor stack.
Plan run_stack(const StackConfig& config, const Scenario& scenario,
               const std::map<int, Trajectory>& perturbed,
               const sensorsim::SensorSim* sim = nullptr);

/// True actor footprint tracks of the (perturbed) world over the plan horizon.
std::vector<ObstacleForecast> world_obstacles(const Scenario& scenario,
                                              const std::map<int, Trajectory>& perturbed);

}  // namespace advscen::autonomy
