#pragma once

#include <map>
#include <string>
#include <vector>

#include "advscen/random.hpp"
#include "advscen/types.hpp"

namespace advscen::sensorsim {

// Per-ray source tags. Actor ids are >= 0.
inline constexpr int kTagNone = -2;        // no return
inline constexpr int kTagBackground = -1;  // static world

struct SensorParams {
    int n_rays = 720;          // 0.5 deg angular resolution
    double max_range = 120.0;  // [m]
    double dropout_prob = 0.0; // optional per-ray dropout for robustness tests
    std::uint64_t dropout_seed = 0;
};

/// Per-angle nearest-hit distances. Ray i leaves at pose.theta + 2*pi*i/n_rays;
/// "no return" is +inf so that min-merging has an exact identity element.
struct RangeImage {
    int n_rays{0};
    Pose2 pose;
    std::vector<double> ranges;
    std::vector<int> tags;

    static RangeImage empty(int n_rays, const Pose2& pose);
    double angle_of(int i) const { return pose.theta + 2.0 * M_PI * i / n_rays; }
};

struct SweepPoint {
    Vec2 p;  // sensor frame
    int tag{kTagBackground};
};

struct Sweep {
    Pose2 pose;
    int n_rays{720};
    int t{0};  // timestep index
    std::vector<SweepPoint> points;

    Vec2 to_world(const Vec2& sensor_pt) const { return pose.to_world(sensor_pt); }
};

/// Analytic world stand-in: static polygons plus tagged actor footprints.
struct SceneGeometry {
    std::vector<Polygon> statics;
    std::vector<std::pair<int, OrientedBox>> actors;  // (actor id, footprint)
};

RangeImage raycast(const SceneGeometry& geometry, const Pose2& pose, int n_rays,
                   double max_range);

/// Element-wise minimum of two range images over the same pose/resolution;
/// the winner's tag travels with its ray. Throws ValidationError on mismatch.
RangeImage merge_min(const RangeImage& a, const RangeImage& b);

RangeImage to_range_image(const Sweep& sweep);
Sweep to_sweep(const RangeImage& image, int t);

/// Drops every point inside one of `boxes` and re-fills those rays from a
/// raycast of `background` (the scene without the removed actors).
Sweep remove_actors(const Sweep& sweep, const std::vector<OrientedBox>& boxes,
                    const SceneGeometry& background, double max_range);

/// Inserts footprints with occlusion: min-merge of the sweep's range image
/// with a raycast of the inserted actors alone.
Sweep add_actors(const Sweep& sweep, const std::vector<std::pair<int, OrientedBox>>& actors,
                 double max_range);

/// Caches the per-step original sweeps and removal backgrounds of one
/// scenario so repeated perturbation queries only pay for the edit.
class SensorSim {
public:
    SensorSim(const Scenario& scenario, std::vector<int> perturbed_ids, SensorParams params = {});

    /// One edited sweep per observation step. `perturbed` must cover exactly
    /// the ids given at construction; trajectories span the full horizon.
    std::vector<Sweep> simulate(const std::map<int, Trajectory>& perturbed) const;

    const SensorParams& params() const { return params_; }
    const std::vector<Sweep>& original_sweeps() const { return originals_; }

private:
    const Scenario* scenario_;
    std::vector<int> perturbed_ids_;
    SensorParams params_;
    std::vector<Sweep> originals_;         // per observation step
    std::vector<RangeImage> backgrounds_;  // scene minus perturbed actors, per step
    std::vector<std::vector<OrientedBox>> removed_boxes_;  // original footprints, per step
};

/// Fresh-context convenience wrapper around SensorSim.
std::vector<Sweep> simulate(const Scenario& scenario, const std::map<int, Trajectory>& perturbed,
                            const SensorParams& params = {});

/// Seeded per-ray dropout (returns removed; tags untouched elsewhere).
Sweep apply_dropout(const Sweep& sweep, double prob, RandomSource rng);

/// Columnar text dump: one "angle,range,tag" line per ray.
void save_sweep(const std::string& path, const Sweep& sweep);
Sweep load_sweep(const std::string& path);

}  // namespace advscen::sensorsim
