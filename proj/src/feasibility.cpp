#include "advscen/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "advscen/scenario_io.hpp"

namespace advscen::feasibility {

Trajectory build_perturbed_trajectory(const Scenario& scenario, int actor_id,
                                      const kinematics::Perturbation& delta,
                                      const kinematics::PhysicalBounds& bounds) {
    const Actor& actor = scenario.actor_by_id(actor_id);
    const BicycleState& base = actor.trajectory[scenario.now_index()];

    const auto dec = kinematics::decode(delta, base, scenario.dt, bounds);
    auto rolled = kinematics::rollout(dec.initial, dec.controls, scenario.dt, bounds);

    Trajectory full;
    full.states.reserve(scenario.horizon());
    // Observation prefix: straight back-extrapolation from the perturbed start.
    const BicycleState& s0 = rolled.trajectory[0];
    const Vec2 step = Vec2{std::cos(s0.theta), std::sin(s0.theta)} * (s0.v * scenario.dt);
    for (int i = scenario.now_index() - 1; i >= 0; --i) {
        BicycleState h = s0;
        const double back = static_cast<double>(scenario.now_index() - i);
        h.x = s0.x - back * step.x;
        h.y = s0.y - back * step.y;
        h.a = 0.0;
        full.states.push_back(h);
    }
    std::reverse(full.states.begin(), full.states.end());
    for (auto& s : rolled.trajectory.states) full.states.push_back(s);
    return full;
}

Plausibility is_plausible(const Trajectory& traj, const Scenario& scenario, int actor_id) {
    const Actor& actor = scenario.actor_by_id(actor_id);
    if (static_cast<int>(traj.size()) != scenario.horizon()) {
        Plausibility p;
        p.ok = false;
        p.reason = "horizon mismatch";
        return p;
    }
    const auto fail = [&](int t, const std::string& reason) {
        Plausibility p;
        p.ok = false;
        p.t = t;
        std::ostringstream os;
        os << reason << " @ t=" << t;
        p.reason = os.str();
        return p;
    };
    for (int t = 0; t < scenario.horizon(); ++t) {
        const OrientedBox self = actor.box_at(traj[t]);
        for (const auto& other : scenario.actors) {
            if (other.id == actor_id) continue;
            if (boxes_overlap(self, other.box_at(other.trajectory[t]))) {
                return fail(t, "collides actor " + std::to_string(other.id));
            }
        }
        if (boxes_overlap(self, sdv_box(scenario.sdv_expert[t]))) {
            return fail(t, "collides expert SDV");
        }
        if (!scenario.map.on_road(traj[t].position())) {
            return fail(t, "off-road");
        }
    }
    return {};
}

FeasibleSet sample_feasible_set(const Scenario& scenario, int actor_id, int n_sample,
                                RandomSource rng, const FeasibilityParams& params) {
    const Actor& actor = scenario.actor_by_id(actor_id);
    if (!actor.is_perturbable) {
        throw InfeasibleActorError("actor " + std::to_string(actor_id) + " is not perturbable");
    }

    const std::size_t dim = kinematics::Perturbation::dim_for_steps(scenario.n_future);
    FeasibleSet set;
    set.actor_id = actor_id;
    set.seed = rng.seed();

    kinematics::Perturbation delta;
    delta.delta.resize(dim);
    for (int k = 0; k < n_sample; ++k) {
        for (auto& c : delta.delta) c = rng.uniform(-1.0, 1.0);
        Trajectory traj = build_perturbed_trajectory(scenario, actor_id, delta, params.bounds);
        if (is_plausible(traj, scenario, actor_id)) {
            set.trajectories.push_back(std::move(traj));
        }
    }
    if (static_cast<int>(set.trajectories.size()) < params.n_min) {
        std::ostringstream os;
        os << "actor " << actor_id << " infeasible: " << set.trajectories.size()
           << " plausible trajectories out of " << n_sample << " (need " << params.n_min << ")";
        throw InfeasibleActorError(os.str());
    }
    return set;
}

namespace {

std::string cache_path(const std::string& dir, const Scenario& scenario, int actor_id,
                       std::uint64_t seed, int n_sample) {
    std::ostringstream os;
    os << dir << "/fs_" << std::hex << scenario_hash(scenario) << "_" << std::dec << actor_id
       << "_" << seed << "_" << n_sample << ".json";
    return os.str();
}

}  // namespace

FeasibleSet sample_feasible_set_cached(const Scenario& scenario, int actor_id, int n_sample,
                                       RandomSource rng, const std::string& cache_dir,
                                       const FeasibilityParams& params) {
    namespace fs = std::filesystem;
    const std::string path = cache_path(cache_dir, scenario, actor_id, rng.seed(), n_sample);
    if (fs::exists(path)) {
        std::ifstream in(path);
        nlohmann::json j;
        in >> j;
        FeasibleSet set;
        set.actor_id = j.at("actor_id").get<int>();
        set.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& jt : j.at("trajectories")) {
            Trajectory t;
            for (const auto& js : jt) {
                t.states.push_back({js[0].get<double>(), js[1].get<double>(), js[2].get<double>(),
                                    js[3].get<double>(), js[4].get<double>(), js[5].get<double>()});
            }
            set.trajectories.push_back(std::move(t));
        }
        return set;
    }
    FeasibleSet set = sample_feasible_set(scenario, actor_id, n_sample, rng, params);
    fs::create_directories(cache_dir);
    nlohmann::json j;
    j["actor_id"] = set.actor_id;
    j["seed"] = set.seed;
    nlohmann::json jts = nlohmann::json::array();
    for (const auto& t : set.trajectories) {
        nlohmann::json jt = nlohmann::json::array();
        for (const auto& s : t.states) jt.push_back({s.x, s.y, s.theta, s.v, s.kappa, s.a});
        jts.push_back(std::move(jt));
    }
    j["trajectories"] = std::move(jts);
    std::ofstream out(path);
    out << j.dump();
    return set;
}

std::size_t project_index(const Trajectory& traj, const FeasibleSet& set) {
    if (set.trajectories.empty()) throw ValidationError("project: empty feasible set");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.trajectories.size(); ++i) {
        const Trajectory& cand = set.trajectories[i];
        double d = 0.0;
        const std::size_t n = std::min(traj.size(), cand.size());
        for (std::size_t t = 0; t < n; ++t) {
            d += (traj[t].position() - cand[t].position()).squared_norm();
        }
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

const Trajectory& project(const Trajectory& traj, const FeasibleSet& set) {
    return set.trajectories[project_index(traj, set)];
}

ActorSelection select_perturbed_actors(const Scenario& scenario, int m, RandomSource rng,
                                       const FeasibilityParams& params) {
    if (m < 1) throw ValidationError("select_perturbed_actors: m must be >= 1");

    const Polyline expert_path = scenario.sdv_expert.centerline();
    std::vector<std::pair<double, int>> ranked;  // (min distance over horizon, id)
    for (const auto& actor : scenario.actors) {
        if (!actor.is_perturbable) continue;
        double d = std::numeric_limits<double>::infinity();
        for (const auto& s : actor.trajectory.states) {
            d = std::min(d, expert_path.project(s.position()).distance);
        }
        ranked.emplace_back(d, actor.id);
    }
    std::sort(ranked.begin(), ranked.end());

    ActorSelection sel;
    for (const auto& [dist, id] : ranked) {
        if (static_cast<int>(sel.chosen.size()) == m) break;
        try {
            FeasibleSet set = sample_feasible_set(scenario, id, params.n_sample,
                                                  rng.split("feasible_set").split(id), params);
            sel.chosen.push_back(id);
            sel.sets.push_back(std::move(set));
        } catch (const InfeasibleActorError&) {
            sel.skipped.push_back(id);
        }
    }
    if (static_cast<int>(sel.chosen.size()) < m) {
        std::ostringstream os;
        os << "only " << sel.chosen.size() << " feasible actors found, need " << m;
        throw InfeasibleActorError(os.str());
    }
    return sel;
}

}  // namespace advscen::feasibility
