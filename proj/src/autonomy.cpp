#include "advscen/autonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace advscen::autonomy {

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

Detection fit_box(const std::vector<Vec2>& pts) {
    Detection det;
    det.n_points = static_cast<int>(pts.size());
    Vec2 mean;
    for (const auto& p : pts) mean = mean + p;
    mean = mean * (1.0 / pts.size());

    double cxx = 0, cxy = 0, cyy = 0;
    for (const auto& p : pts) {
        const Vec2 d = p - mean;
        cxx += d.x * d.x;
        cxy += d.x * d.y;
        cyy += d.y * d.y;
    }
    // principal axis of the 2x2 covariance
    const double heading = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
    const Vec2 e1{std::cos(heading), std::sin(heading)};
    const Vec2 e2 = e1.left_normal();

    double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
    for (const auto& p : pts) {
        const Vec2 d = p - mean;
        lo1 = std::min(lo1, d.dot(e1));
        hi1 = std::max(hi1, d.dot(e1));
        lo2 = std::min(lo2, d.dot(e2));
        hi2 = std::max(hi2, d.dot(e2));
    }
    det.center = mean + e1 * (0.5 * (lo1 + hi1)) + e2 * (0.5 * (lo2 + hi2));
    det.heading = heading;
    det.half_extent = {std::max(0.5 * (hi1 - lo1), 0.1), std::max(0.5 * (hi2 - lo2), 0.1)};
    return det;
}

}  // namespace

std::vector<Detection> detect(const sensorsim::Sweep& sweep, const DetectParams& params) {
    std::vector<Vec2> pts;  // world frame, actor returns only
    for (const auto& pt : sweep.points) {
        if (pt.tag >= 0) pts.push_back(sweep.to_world(pt.p));
    }
    if (pts.empty()) return {};

    DisjointSet ds(pts.size());
    const double thr2 = params.cluster_dist * params.cluster_dist;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if ((pts[i] - pts[j]).squared_norm() <= thr2) ds.unite(static_cast<int>(i),
                                                                   static_cast<int>(j));
        }
    }
    std::vector<int> roots;
    std::vector<std::vector<Vec2>> clusters;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const int r = ds.find(static_cast<int>(i));
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            clusters.emplace_back();
            it = roots.end() - 1;
        }
        clusters[static_cast<std::size_t>(it - roots.begin())].push_back(pts[i]);
    }

    std::vector<Detection> out;
    for (const auto& cluster : clusters) {
        if (static_cast<int>(cluster.size()) < params.min_points) continue;
        out.push_back(fit_box(cluster));
    }
    return out;
}

std::vector<ObstacleForecast> forecast(const std::vector<std::vector<Detection>>& frames,
                                       double dt, int n_future, const ForecastParams& params) {
    if (frames.size() < 2) throw ValidationError("forecast: needs >= 2 frames");
    const auto& cur = frames.back();
    const auto& prev = frames[frames.size() - 2];

    // greedy nearest-neighbor association, deterministic by (distance, indices)
    struct Pair {
        double d;
        std::size_t ci, pi;
    };
    std::vector<Pair> pairs;
    for (std::size_t ci = 0; ci < cur.size(); ++ci) {
        for (std::size_t pi = 0; pi < prev.size(); ++pi) {
            const double d = (cur[ci].center - prev[pi].center).norm();
            if (d <= params.gate) pairs.push_back({d, ci, pi});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.ci != b.ci) return a.ci < b.ci;
        return a.pi < b.pi;
    });
    std::vector<int> match(cur.size(), -1);
    std::vector<bool> prev_used(prev.size(), false);
    for (const auto& pr : pairs) {
        if (match[pr.ci] >= 0 || prev_used[pr.pi]) continue;
        match[pr.ci] = static_cast<int>(pr.pi);
        prev_used[pr.pi] = true;
    }

    std::vector<ObstacleForecast> out;
    for (std::size_t ci = 0; ci < cur.size(); ++ci) {
        const Detection& det = cur[ci];
        Vec2 vel{0, 0};
        if (match[ci] >= 0) {
            vel = (det.center - prev[static_cast<std::size_t>(match[ci])].center) * (1.0 / dt);
        }
        const double speed = vel.norm();
        const double heading = speed >= params.moving_speed ? std::atan2(vel.y, vel.x)
                                                            : det.heading;
        ObstacleForecast ob;
        ob.length = 2.0 * det.half_extent.x;
        ob.width = 2.0 * det.half_extent.y;
        ob.poses.reserve(n_future + 1);
        for (int t = 0; t <= n_future; ++t) {
            const Vec2 c = det.center + vel * (dt * t);
            ob.poses.push_back({c.x, c.y, heading});
        }
        out.push_back(std::move(ob));
    }
    return out;
}

Trajectory fit_lane_candidate(const HDMap& map, const BicycleState& now, const CandidateSpec& spec,
                              int n_steps, double dt, const kinematics::PhysicalBounds& bounds) {
    const Lane* lane = map.nearest_lane(now.position());

    // Desired speed profile v*(t) = v0 + (vf - v0) * (t/T)^shape.
    std::vector<double> v_des(n_steps + 1);
    for (int t = 0; t <= n_steps; ++t) {
        const double u = static_cast<double>(t) / n_steps;
        v_des[t] = now.v + (spec.terminal_speed - now.v) * std::pow(u, spec.shape_exp);
    }

    // Desired waypoints along the lane with a smoothstep lateral blend.
    std::vector<Vec2> q(n_steps + 1);
    if (lane) {
        const auto proj = lane->centerline.project(now.position());
        double s = proj.station;
        const double l0 = proj.lateral;
        q[0] = now.position();
        for (int t = 1; t <= n_steps; ++t) {
            s += v_des[t - 1] * dt;
            const double u = static_cast<double>(t) / n_steps;
            const double blend = u * u * (3.0 - 2.0 * u);
            const double l = l0 + (spec.target_offset - l0) * blend;
            q[t] = lane->centerline.point_at(s) + lane->centerline.left_normal_at(s) * l;
        }
    } else {
        // no map: heading-aligned frame
        const Vec2 fwd{std::cos(now.theta), std::sin(now.theta)};
        const Vec2 left = fwd.left_normal();
        double s = 0.0;
        q[0] = now.position();
        for (int t = 1; t <= n_steps; ++t) {
            s += v_des[t - 1] * dt;
            const double u = static_cast<double>(t) / n_steps;
            const double blend = u * u * (3.0 - 2.0 * u);
            q[t] = now.position() + fwd * s + left * (spec.target_offset * blend);
        }
    }

    // Greedy control fit: track the desired headings/speeds step by step so
    // the final trajectory is an exact bicycle rollout.
    kinematics::ControlSequence controls;
    controls.steps.resize(n_steps);
    BicycleState s = now;
    std::vector<double> theta_des(n_steps + 1);
    for (int t = 0; t < n_steps; ++t) {
        const Vec2 d = q[t + 1] - q[t];
        theta_des[t + 1] = d.norm() > 1e-6 ? std::atan2(d.y, d.x) : (t == 0 ? now.theta : theta_des[t]);
    }
    theta_des[0] = now.theta;
    for (int t = 0; t < n_steps; ++t) {
        const double a = std::clamp((v_des[t + 1] - s.v) / dt, -bounds.accel_max, bounds.accel_max);
        // curvature that would rotate the heading onto the next desired one
        double kappa_tgt = 0.0;
        if (s.v > 0.1) {
            kappa_tgt = wrap_angle(theta_des[t + 1] - s.theta) / (s.v * dt);
        }
        kappa_tgt = std::clamp(kappa_tgt, -bounds.kappa_max, bounds.kappa_max);
        const double kdot = std::clamp((kappa_tgt - s.kappa) / dt, -bounds.kappa_dot_max,
                                       bounds.kappa_dot_max);
        controls.steps[t] = {a, kdot};

        // advance exactly like kinematics::rollout
        BicycleState next;
        next.x = s.x + s.v * std::cos(s.theta) * dt;
        next.y = s.y + s.v * std::sin(s.theta) * dt;
        next.theta = s.theta + s.v * s.kappa * dt;
        next.kappa = std::clamp(s.kappa + kdot * dt, -bounds.kappa_max, bounds.kappa_max);
        next.v = std::clamp(s.v + a * dt, 0.0, bounds.v_max);
        if (next.kappa != 0.0) {
            next.v = std::min(next.v, std::sqrt(bounds.lat_accel_max / std::abs(next.kappa)));
        }
        s = next;
    }
    return kinematics::rollout(now, controls, dt, bounds).trajectory;
}

namespace {

double lane_offset(const HDMap& map, const Vec2& p) {
    const Lane* lane = map.nearest_lane(p);
    return lane ? lane->centerline.project(p).lateral : 0.0;
}

double lane_station(const HDMap& map, const Vec2& p) {
    const Lane* lane = map.nearest_lane(p);
    return lane ? lane->centerline.project(p).station : 0.0;
}

}  // namespace

Plan plan(const PlannerInput& input, const std::vector<ObstacleForecast>& obstacles) {
    if (input.sdv_history.empty()) throw ValidationError("plan: empty SDV history");
    const BicycleState now = input.sdv_history.back();
    if (!now.finite()) throw ValidationError("plan: non-finite SDV state");

    static constexpr std::array<double, 5> kOffsets = {-3.0, -1.5, 0.0, 1.5, 3.0};
    static constexpr std::array<double, 5> kShapes = {0.5, 0.75, 1.0, 1.5, 2.5};
    std::array<double, 8> speeds{};
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        // terminal speeds from full stop up to +25% of current speed
        speeds[i] = std::clamp(now.v * (0.25 * static_cast<double>(i) - 0.5) + now.v, 0.0, 15.0);
    }
    // dedupe keeps the grid fixed-size but distinct in effect; candidates are
    // scored as-is so duplicates merely tie and resolve by index.

    Plan best;
    double best_cost = std::numeric_limits<double>::infinity();
    bool any_collision_free = false;
    int index = 0;
    for (const double offset : kOffsets) {
        for (const double speed : speeds) {
            for (const double shape : kShapes) {
                const Trajectory traj = fit_lane_candidate(
                    input.map, now, {offset, speed, shape}, input.n_future, input.dt);

                CostBreakdown costs;
                int collision_steps = 0;
                for (int t = 1; t <= input.n_future; ++t) {
                    const OrientedBox ego = sdv_box(traj[t]);
                    for (const auto& ob : obstacles) {
                        if (boxes_overlap(ego, ob.box_at(t).inflated(kObstacleInflation))) {
                            ++collision_steps;
                            break;
                        }
                    }
                    const double l = lane_offset(input.map, traj[t].position());
                    costs.lane += input.weights.w_lane * l * l;
                    const double lat = traj[t].v * traj[t].v * traj[t].kappa;
                    costs.comfort += input.weights.w_comf * lat * lat;
                }
                for (int t = 0; t + 1 <= input.n_future; ++t) {
                    const double jerk = (traj[t + 1].a - traj[t].a) / input.dt;
                    costs.comfort += input.weights.w_comf * jerk * jerk;
                }
                costs.collision = input.weights.w_col * collision_steps;
                costs.progress = -input.weights.w_prog *
                                 (lane_station(input.map, traj[input.n_future].position()) -
                                  lane_station(input.map, traj[0].position()));

                if (collision_steps == 0) any_collision_free = true;
                const double total = costs.total();
                if (total < best_cost) {
                    best_cost = total;
                    best.trajectory = traj;
                    best.costs = costs;
                    best.candidate_index = index;
                }
                ++index;
            }
        }
    }
    best.unavoidable = !any_collision_free;
    return best;
}

std::vector<ObstacleForecast> world_obstacles(const Scenario& scenario,
                                              const std::map<int, Trajectory>& perturbed) {
    std::vector<ObstacleForecast> out;
    const int now = scenario.now_index();
    for (const auto& actor : scenario.actors) {
        const auto it = perturbed.find(actor.id);
        const Trajectory& traj = it != perturbed.end() ? it->second : actor.trajectory;
        ObstacleForecast ob;
        ob.length = actor.length;
        ob.width = actor.width;
        for (int t = 0; t <= scenario.n_future; ++t) {
            const BicycleState& s = traj[now + t];
            ob.poses.push_back({s.x, s.y, s.theta});
        }
        out.push_back(std::move(ob));
    }
    return out;
}

Plan run_stack(const StackConfig& config, const Scenario& scenario,
               const std::map<int, Trajectory>& perturbed, const sensorsim::SensorSim* sim) {
    PlannerInput input;
    input.map = scenario.map;
    input.n_future = scenario.n_future;
    input.dt = scenario.dt;
    input.weights = config.weights;
    for (int h = 0; h < scenario.n_history; ++h) {
        input.sdv_history.push_back(scenario.sdv_expert[h]);
    }

    if (config.kind == StackKind::kGroundTruth) {
        return plan(input, world_obstacles(scenario, perturbed));
    }

    if (sim) {
        input.sweeps = sim->simulate(perturbed);
    } else {
        input.sweeps = sensorsim::simulate(scenario, perturbed, config.sensor);
    }
    std::vector<std::vector<Detection>> frames;
    frames.reserve(input.sweeps.size());
    for (const auto& sweep : input.sweeps) frames.push_back(detect(sweep, config.detect));
    const auto obstacles = forecast(frames, scenario.dt, scenario.n_future, config.forecast);
    return plan(input, obstacles);
}

}  // namespace advscen::autonomy
