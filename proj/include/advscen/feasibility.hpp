#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advscen/kinematics.hpp"
#include "advscen/random.hpp"
#include "advscen/types.hpp"

namespace advscen::feasibility {

struct InfeasibleActorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FeasibilityParams {
    int n_sample = 10000;  // candidate draws per actor (2e5 at paper scale)
    int n_min = 100;       // minimum survivors, else the actor is infeasible
    kinematics::PhysicalBounds bounds;
};

struct FeasibleSet {
    int actor_id{-1};
    std::vector<Trajectory> trajectories;  // full horizon each, sorted by sample index
    std::uint64_t seed{0};
};

struct Plausibility {
    bool ok{true};
    std::string reason;  // first failed check, e.g. "collides actor 3 @ t=5"
    int t{-1};

    explicit operator bool() const { return ok; }
};

/// Full-horizon trajectory for one perturbation of `actor_id`: decode around
/// the actor's state at the last observed step, roll the future out, and
/// back-extrapolate the observation prefix along the perturbed initial
/// heading at the perturbed initial speed.
Trajectory build_perturbed_trajectory(const Scenario& scenario, int actor_id,
                                      const kinematics::Perturbation& delta,
                                      const kinematics::PhysicalBounds& bounds = {});

/// True iff at every step the actor footprint avoids all other actors'
/// original footprints and the expert SDV footprint, and stays on-road.
Plausibility is_plausible(const Trajectory& traj, const Scenario& scenario, int actor_id);

/// Rejection sampling of the physically feasible trajectory set. Throws
/// InfeasibleActorError when fewer than n_min candidates survive.
FeasibleSet sample_feasible_set(const Scenario& scenario, int actor_id, int n_sample,
                                RandomSource rng, const FeasibilityParams& params = {});

/// Like sample_feasible_set, with a disk cache keyed by
/// (scenario hash, actor id, seed, n_sample) under cache_dir.
FeasibleSet sample_feasible_set_cached(const Scenario& scenario, int actor_id, int n_sample,
                                       RandomSource rng, const std::string& cache_dir,
                                       const FeasibilityParams& params = {});

/// Nearest set member by summed squared waypoint distance; ties go to the
/// lowest member index. The returned trajectory is always a set member.
const Trajectory& project(const Trajectory& traj, const FeasibleSet& set);
std::size_t project_index(const Trajectory& traj, const FeasibleSet& set);

struct ActorSelection {
    std::vector<int> chosen;           // m feasible actors, closest first
    std::vector<FeasibleSet> sets;     // aligned with chosen
    std::vector<int> skipped;          // infeasible actors passed over
};

/// Ranks perturbable actors by minimum distance to the SDV expert path over
/// the horizon and keeps the first m with a feasible set. Throws
/// InfeasibleActorError if fewer than m qualify.
ActorSelection select_perturbed_actors(const Scenario& scenario, int m, RandomSource rng,
                                       const FeasibilityParams& params = {});

}  // namespace advscen::feasibility
