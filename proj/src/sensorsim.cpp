#include "advscen/sensorsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace advscen::sensorsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void cast_loop(const Vec2& origin, const Vec2& dir, const Polygon& poly, double& best) {
    const std::size_t n = poly.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double d = ray_segment_distance(origin, dir, poly[j], poly[(j + 1) % n]);
        if (d > 1e-9 && d < best) best = d;
    }
}

}  // namespace

RangeImage RangeImage::empty(int n_rays, const Pose2& pose) {
    RangeImage ri;
    ri.n_rays = n_rays;
    ri.pose = pose;
    ri.ranges.assign(n_rays, kInf);
    ri.tags.assign(n_rays, kTagNone);
    return ri;
}

RangeImage raycast(const SceneGeometry& geometry, const Pose2& pose, int n_rays,
                   double max_range) {
    RangeImage ri = RangeImage::empty(n_rays, pose);
    const Vec2 origin = pose.position();
    for (int i = 0; i < n_rays; ++i) {
        const double ang = ri.angle_of(i);
        const Vec2 dir{std::cos(ang), std::sin(ang)};
        double best = kInf;
        int tag = kTagNone;
        for (const auto& poly : geometry.statics) {
            const double before = best;
            cast_loop(origin, dir, poly, best);
            if (best < before) tag = kTagBackground;
        }
        for (const auto& [id, box] : geometry.actors) {
            const auto corners = box.corners();
            const double before = best;
            for (std::size_t j = 0; j < 4; ++j) {
                const double d = ray_segment_distance(origin, dir, corners[j], corners[(j + 1) % 4]);
                if (d > 1e-9 && d < best) best = d;
            }
            if (best < before) tag = id;
        }
        if (best <= max_range) {
            ri.ranges[i] = best;
            ri.tags[i] = tag;
        }
    }
    return ri;
}

RangeImage merge_min(const RangeImage& a, const RangeImage& b) {
    if (a.n_rays != b.n_rays) throw ValidationError("merge_min: ray count mismatch");
    if (!(a.pose == b.pose)) throw ValidationError("merge_min: sensor pose mismatch");
    RangeImage out = a;
    for (int i = 0; i < a.n_rays; ++i) {
        if (b.ranges[i] < out.ranges[i]) {
            out.ranges[i] = b.ranges[i];
            out.tags[i] = b.tags[i];
        }
    }
    return out;
}

RangeImage to_range_image(const Sweep& sweep) {
    RangeImage ri = RangeImage::empty(sweep.n_rays, sweep.pose);
    const double step = 2.0 * M_PI / sweep.n_rays;
    for (const auto& pt : sweep.points) {
        // nearest-angle binning in the sensor frame
        const double ang = std::atan2(pt.p.y, pt.p.x);
        int i = static_cast<int>(std::lround(ang / step));
        i = ((i % sweep.n_rays) + sweep.n_rays) % sweep.n_rays;
        const double r = pt.p.norm();
        if (r < ri.ranges[i]) {
            ri.ranges[i] = r;
            ri.tags[i] = pt.tag;
        }
    }
    return ri;
}

Sweep to_sweep(const RangeImage& image, int t) {
    Sweep sweep;
    sweep.pose = image.pose;
    sweep.n_rays = image.n_rays;
    sweep.t = t;
    const double step = 2.0 * M_PI / image.n_rays;
    for (int i = 0; i < image.n_rays; ++i) {
        if (!std::isfinite(image.ranges[i])) continue;
        const double ang = i * step;  // sensor frame
        sweep.points.push_back({Vec2{std::cos(ang), std::sin(ang)} * image.ranges[i],
                                image.tags[i]});
    }
    return sweep;
}

Sweep remove_actors(const Sweep& sweep, const std::vector<OrientedBox>& boxes,
                    const SceneGeometry& background, double max_range) {
    RangeImage ri = to_range_image(sweep);
    const RangeImage bg = raycast(background, sweep.pose, sweep.n_rays, max_range);
    for (int i = 0; i < ri.n_rays; ++i) {
        if (!std::isfinite(ri.ranges[i])) continue;
        const double ang = ri.angle_of(i);
        const Vec2 world = ri.pose.position() +
                           Vec2{std::cos(ang), std::sin(ang)} * ri.ranges[i];
        const bool removed = std::any_of(boxes.begin(), boxes.end(), [&](const OrientedBox& b) {
            return b.contains(world, 1e-9);
        });
        if (removed) {
            ri.ranges[i] = bg.ranges[i];
            ri.tags[i] = bg.tags[i];
        }
    }
    return to_sweep(ri, sweep.t);
}

Sweep add_actors(const Sweep& sweep, const std::vector<std::pair<int, OrientedBox>>& actors,
                 double max_range) {
    SceneGeometry actors_only;
    actors_only.actors = actors;
    const RangeImage inserted = raycast(actors_only, sweep.pose, sweep.n_rays, max_range);
    return to_sweep(merge_min(to_range_image(sweep), inserted), sweep.t);
}

SensorSim::SensorSim(const Scenario& scenario, std::vector<int> perturbed_ids, SensorParams params)
    : scenario_(&scenario), perturbed_ids_(std::move(perturbed_ids)), params_(params) {
    for (const int id : perturbed_ids_) scenario.actor_by_id(id);  // existence check

    const auto is_perturbed = [&](int id) {
        return std::find(perturbed_ids_.begin(), perturbed_ids_.end(), id) != perturbed_ids_.end();
    };

    for (int h = 0; h < scenario.n_history; ++h) {
        const Pose2 pose = scenario.sdv_expert[h].pose();

        SceneGeometry full;
        SceneGeometry background;
        full.statics = scenario.map.static_obstacles;
        background.statics = scenario.map.static_obstacles;
        std::vector<OrientedBox> removed;
        for (const auto& actor : scenario.actors) {
            const OrientedBox box = actor.box_at(actor.trajectory[h]);
            full.actors.emplace_back(actor.id, box);
            if (is_perturbed(actor.id)) {
                removed.push_back(box);
            } else {
                background.actors.emplace_back(actor.id, box);
            }
        }
        Sweep orig = to_sweep(raycast(full, pose, params_.n_rays, params_.max_range), h);
        if (params_.dropout_prob > 0.0) {
            orig = apply_dropout(orig, params_.dropout_prob,
                                 RandomSource(params_.dropout_seed).split("dropout").split(h));
        }
        originals_.push_back(std::move(orig));
        backgrounds_.push_back(raycast(background, pose, params_.n_rays, params_.max_range));
        removed_boxes_.push_back(std::move(removed));
    }
}

std::vector<Sweep> SensorSim::simulate(const std::map<int, Trajectory>& perturbed) const {
    for (const auto& [id, traj] : perturbed) {
        if (std::find(perturbed_ids_.begin(), perturbed_ids_.end(), id) == perturbed_ids_.end()) {
            throw ValidationError("simulate: actor " + std::to_string(id) +
                                  " was not declared perturbed");
        }
        if (static_cast<int>(traj.size()) != scenario_->horizon()) {
            throw ValidationError("simulate: perturbed trajectory horizon mismatch for actor " +
                                  std::to_string(id));
        }
    }
    for (const int id : perturbed_ids_) {
        if (!perturbed.count(id)) {
            throw ValidationError("simulate: missing trajectory for perturbed actor " +
                                  std::to_string(id));
        }
    }

    std::vector<Sweep> out;
    out.reserve(originals_.size());
    for (std::size_t h = 0; h < originals_.size(); ++h) {
        RangeImage ri = to_range_image(originals_[h]);
        // removal: refill rays terminating inside the removed footprints
        const RangeImage& bg = backgrounds_[h];
        for (int i = 0; i < ri.n_rays; ++i) {
            if (!std::isfinite(ri.ranges[i])) continue;
            const double ang = ri.angle_of(i);
            const Vec2 world = ri.pose.position() +
                               Vec2{std::cos(ang), std::sin(ang)} * ri.ranges[i];
            for (const auto& box : removed_boxes_[h]) {
                if (box.contains(world, 1e-9)) {
                    ri.ranges[i] = bg.ranges[i];
                    ri.tags[i] = bg.tags[i];
                    break;
                }
            }
        }
        // addition: min-merge the perturbed footprints back in
        SceneGeometry inserted;
        for (const auto& [id, traj] : perturbed) {
            const Actor& actor = scenario_->actor_by_id(id);
            inserted.actors.emplace_back(id, actor.box_at(traj[h]));
        }
        const RangeImage ins =
            raycast(inserted, ri.pose, ri.n_rays, params_.max_range);
        out.push_back(to_sweep(merge_min(ri, ins), static_cast<int>(h)));
    }
    return out;
}

std::vector<Sweep> simulate(const Scenario& scenario, const std::map<int, Trajectory>& perturbed,
                            const SensorParams& params) {
    std::vector<int> ids;
    for (const auto& [id, traj] : perturbed) ids.push_back(id);
    return SensorSim(scenario, std::move(ids), params).simulate(perturbed);
}

Sweep apply_dropout(const Sweep& sweep, double prob, RandomSource rng) {
    Sweep out = sweep;
    out.points.clear();
    for (const auto& pt : sweep.points) {
        if (rng.uniform() >= prob) out.points.push_back(pt);
    }
    return out;
}

void save_sweep(const std::string& path, const Sweep& sweep) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write sweep file: " + path);
    out << "# pose " << sweep.pose.x << " " << sweep.pose.y << " " << sweep.pose.theta
        << " n_rays " << sweep.n_rays << " t " << sweep.t << "\n";
    out << "angle,range,tag\n";
    out.precision(17);
    for (const auto& pt : sweep.points) {
        out << std::atan2(pt.p.y, pt.p.x) << "," << pt.p.norm() << "," << pt.tag << "\n";
    }
}

Sweep load_sweep(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sweep file: " + path);
    Sweep sweep;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty sweep file");
    {
        std::istringstream hs(line);
        std::string hash, pose_kw, nrays_kw, t_kw;
        hs >> hash >> pose_kw >> sweep.pose.x >> sweep.pose.y >> sweep.pose.theta >> nrays_kw >>
            sweep.n_rays >> t_kw >> sweep.t;
        if (hash != "#" || pose_kw != "pose") throw ParseError(path + ": bad sweep header");
    }
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double ang = 0, r = 0;
        int tag = 0;
        char c1 = 0, c2 = 0;
        if (!(ls >> ang >> c1 >> r >> c2 >> tag) || c1 != ',' || c2 != ',') {
            throw ParseError(path + ": bad sweep row: " + line);
        }
        sweep.points.push_back({Vec2{std::cos(ang), std::sin(ang)} * r, tag});
    }
    return sweep;
}

}  // namespace advscen::sensorsim
