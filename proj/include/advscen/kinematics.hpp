#pragma once

#include <string>
#include <vector>

#include "advscen/types.hpp"

namespace advscen::kinematics {

/// Physical limits of the bicycle model plus the de-normalization bounds of
/// the initial-state perturbation. Immutable once constructed; overridable
/// from a JSON config file.
struct PhysicalBounds {
    double kappa_max = 0.2;        // |curvature| [1/m]
    double kappa_dot_max = 0.05;   // |curvature rate| [1/(m s)]
    double accel_max = 2.0;        // |acceleration| [m/s^2]
    double lat_accel_max = 3.0;    // |v^2 kappa| [m/s^2]
    double v_max = 15.0;           // speed in [0, v_max] [m/s]
    double init_pos_bound = 5.0;   // |dx0|, |dy0| [m]
    double init_heading_bound = M_PI / 4.0;  // |dtheta0| [rad]
    double init_speed_bound = 5.0;           // |dv0| [m/s]

    friend bool operator==(const PhysicalBounds&, const PhysicalBounds&) = default;
};

PhysicalBounds load_bounds(const std::string& path);

struct Control {
    double accel{0};      // [m/s^2]
    double kappa_dot{0};  // [1/(m s)]
};

struct ControlSequence {
    std::vector<Control> steps;

    std::size_t size() const { return steps.size(); }
    static ControlSequence zeros(std::size_t n) { return {std::vector<Control>(n)}; }
};

/// Normalized search vector: 4 initial-state components then (a, kappa_dot)
/// per step, every component in [-1, 1].
struct Perturbation {
    std::vector<double> delta;

    static std::size_t dim_for_steps(std::size_t n_steps) { return 4 + 2 * n_steps; }
    std::size_t n_steps() const { return (delta.size() - 4) / 2; }
    bool in_unit_ball(double tol = 0.0) const;
};

struct RolloutResult {
    Trajectory trajectory;  // n_steps + 1 states, starts at s0
    int clamp_events{0};    // how many state components hit a bound
};

/// Forward-Euler rollout. Position/heading advance on pre-update v, kappa,
/// theta; v and kappa are clamped to bounds each step (clamping, not
/// rejection, keeps the delta -> trajectory map continuous). The lateral
/// acceleration bound is enforced by capping v after the kappa update, so
/// the output always satisfies check_bounds.
RolloutResult rollout(const BicycleState& s0, const ControlSequence& controls, double dt,
                      const PhysicalBounds& bounds = {});

struct Decoded {
    BicycleState initial;
    ControlSequence controls;
};

/// Affine de-normalization of delta around `base` (component c maps to
/// c * bound). The perturbed initial state is clamped to the state bounds.
Decoded decode(const Perturbation& delta, const BicycleState& base, double dt,
               const PhysicalBounds& bounds = {});

/// Inverse of decode for in-bounds inputs: offsets and controls back to the
/// normalized vector.
Perturbation encode(double dx0, double dy0, double dtheta0, double dv0,
                    const ControlSequence& controls, const PhysicalBounds& bounds = {});

struct BoundsCheck {
    bool ok{true};
    int index{-1};      // first offending state
    std::string field;  // which invariant failed

    explicit operator bool() const { return ok; }
};

/// Verifies per-state bounds plus inter-state curvature-rate consistency
/// (|dkappa|/dt <= kappa_dot_max + tol).
BoundsCheck check_bounds(const Trajectory& traj, double dt, const PhysicalBounds& bounds = {},
                         double tol = 1e-9);

}  // namespace advscen::kinematics
