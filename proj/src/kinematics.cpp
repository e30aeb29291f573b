#include "advscen/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace advscen::kinematics {

PhysicalBounds load_bounds(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open bounds file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bounds: invalid JSON: ") + e.what());
    }
    PhysicalBounds b;
    b.kappa_max = j.value("kappa_max", b.kappa_max);
    b.kappa_dot_max = j.value("kappa_dot_max", b.kappa_dot_max);
    b.accel_max = j.value("accel_max", b.accel_max);
    b.lat_accel_max = j.value("lat_accel_max", b.lat_accel_max);
    b.v_max = j.value("v_max", b.v_max);
    b.init_pos_bound = j.value("init_pos_bound", b.init_pos_bound);
    b.init_heading_bound = j.value("init_heading_bound", b.init_heading_bound);
    b.init_speed_bound = j.value("init_speed_bound", b.init_speed_bound);
    return b;
}

bool Perturbation::in_unit_ball(double tol) const {
    for (const double c : delta) {
        if (!(std::abs(c) <= 1.0 + tol)) return false;
    }
    return true;
}

namespace {

double clamp_count(double v, double lo, double hi, int& events) {
    if (v < lo) {
        ++events;
        return lo;
    }
    if (v > hi) {
        ++events;
        return hi;
    }
    return v;
}

// Cap that also satisfies |v^2 kappa| <= lat_max for the given kappa.
double lat_accel_speed_cap(double kappa, double lat_max) {
    const double ak = std::abs(kappa);
    if (ak == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(lat_max / ak);
}

}  // namespace

RolloutResult rollout(const BicycleState& s0, const ControlSequence& controls, double dt,
                      const PhysicalBounds& bounds) {
    if (!s0.finite()) throw ValidationError("rollout: non-finite initial state");
    for (const auto& c : controls.steps) {
        if (!std::isfinite(c.accel) || !std::isfinite(c.kappa_dot)) {
            throw ValidationError("rollout: non-finite control");
        }
    }
    if (!(dt > 0.0)) throw ValidationError("rollout: dt must be > 0");

    RolloutResult out;
    out.trajectory.states.reserve(controls.size() + 1);

    BicycleState s = s0;
    for (std::size_t t = 0; t < controls.size(); ++t) {
        const double a = clamp_count(controls.steps[t].accel, -bounds.accel_max, bounds.accel_max,
                                     out.clamp_events);
        const double kdot = clamp_count(controls.steps[t].kappa_dot, -bounds.kappa_dot_max,
                                        bounds.kappa_dot_max, out.clamp_events);
        s.a = a;
        out.trajectory.states.push_back(s);

        BicycleState next;
        next.x = s.x + s.v * std::cos(s.theta) * dt;
        next.y = s.y + s.v * std::sin(s.theta) * dt;
        next.theta = s.theta + s.v * s.kappa * dt;
        next.kappa = clamp_count(s.kappa + kdot * dt, -bounds.kappa_max, bounds.kappa_max,
                                 out.clamp_events);
        next.v = clamp_count(s.v + a * dt, 0.0, bounds.v_max, out.clamp_events);
        next.v = clamp_count(next.v, 0.0, lat_accel_speed_cap(next.kappa, bounds.lat_accel_max),
                             out.clamp_events);
        next.a = 0.0;
        s = next;
    }
    out.trajectory.states.push_back(s);
    return out;
}

Decoded decode(const Perturbation& delta, const BicycleState& base, double dt,
               const PhysicalBounds& bounds) {
    (void)dt;
    if (delta.delta.size() < 4 || (delta.delta.size() - 4) % 2 != 0) {
        throw ValidationError("decode: delta must have 4 + 2*T components, got " +
                              std::to_string(delta.delta.size()));
    }
    Decoded out;
    out.initial = base;
    out.initial.x = base.x + delta.delta[0] * bounds.init_pos_bound;
    out.initial.y = base.y + delta.delta[1] * bounds.init_pos_bound;
    out.initial.theta = base.theta + delta.delta[2] * bounds.init_heading_bound;
    out.initial.v = std::clamp(base.v + delta.delta[3] * bounds.init_speed_bound, 0.0, bounds.v_max);
    out.initial.kappa = std::clamp(base.kappa, -bounds.kappa_max, bounds.kappa_max);
    out.initial.v = std::min(out.initial.v,
                             lat_accel_speed_cap(out.initial.kappa, bounds.lat_accel_max));
    out.initial.a = 0.0;

    const std::size_t n_steps = delta.n_steps();
    out.controls.steps.resize(n_steps);
    for (std::size_t t = 0; t < n_steps; ++t) {
        out.controls.steps[t].accel = delta.delta[4 + 2 * t] * bounds.accel_max;
        out.controls.steps[t].kappa_dot = delta.delta[5 + 2 * t] * bounds.kappa_dot_max;
    }
    return out;
}

Perturbation encode(double dx0, double dy0, double dtheta0, double dv0,
                    const ControlSequence& controls, const PhysicalBounds& bounds) {
    Perturbation p;
    p.delta.resize(Perturbation::dim_for_steps(controls.size()));
    p.delta[0] = dx0 / bounds.init_pos_bound;
    p.delta[1] = dy0 / bounds.init_pos_bound;
    p.delta[2] = dtheta0 / bounds.init_heading_bound;
    p.delta[3] = dv0 / bounds.init_speed_bound;
    for (std::size_t t = 0; t < controls.size(); ++t) {
        p.delta[4 + 2 * t] = controls.steps[t].accel / bounds.accel_max;
        p.delta[5 + 2 * t] = controls.steps[t].kappa_dot / bounds.kappa_dot_max;
    }
    return p;
}

BoundsCheck check_bounds(const Trajectory& traj, double dt, const PhysicalBounds& bounds,
                         double tol) {
    const auto bad = [&](int i, const char* field) {
        BoundsCheck c;
        c.ok = false;
        c.index = i;
        c.field = field;
        return c;
    };
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj[i];
        if (!s.finite()) return bad(static_cast<int>(i), "finite");
        if (std::abs(s.kappa) > bounds.kappa_max + tol) return bad(static_cast<int>(i), "kappa");
        if (std::abs(s.a) > bounds.accel_max + tol) return bad(static_cast<int>(i), "a");
        if (s.v < -tol || s.v > bounds.v_max + tol) return bad(static_cast<int>(i), "v");
        if (std::abs(s.v * s.v * s.kappa) > bounds.lat_accel_max + tol) {
            return bad(static_cast<int>(i), "lat_accel");
        }
        if (i > 0 && std::abs(s.kappa - traj[i - 1].kappa) / dt > bounds.kappa_dot_max + tol) {
            return bad(static_cast<int>(i), "kappa_dot");
        }
    }
    return {};
}

}  // namespace advscen::kinematics
