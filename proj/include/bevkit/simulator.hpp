#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bevkit/geometry.hpp"
#include "bevkit/heatmap.hpp"
#include "bevkit/risk.hpp"

namespace bevkit {

struct Person {
    double x_m = 0.0;
    double y_m = 0.0;
    double height_m = 1.7; // [1.0, 2.1]
    bool visible_feet = true;
};

struct Scene {
    CameraIntrinsics intr;
    CameraPose pose;
    std::vector<Person> persons;

    // Throws DegenerateGeometry on invalid camera or person heights
    // outside [1.0, 2.1] m.
    void validate() const;
};

// Deterministic random source. Draws map mt19937_64 output through fixed
// arithmetic (no std::distributions, whose sequences vary by library), so
// a seed pins the scene bit-for-bit everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform(double lo, double hi);  // [lo, hi)
    int uniform_int(int lo, int hi);       // [lo, hi]
    double normal(double mean, double stddev);
    bool bernoulli(double p);

private:
    double unit(); // (0, 1)
    std::mt19937_64 state_;
};

struct SceneConfig {
    int n_min = 5;
    int n_max = 50;
    // Fraction of persons placed in tight groups instead of uniformly.
    double cluster_fraction = 0.0;
    // Maximum pairwise distance inside a group (members fall in a disk
    // of this diameter).
    double cluster_spread_m = 1.0;
    double height_mean_m = 1.7;
    double height_std_m = 0.1;
    double pitch_min_deg = 15.0;
    double pitch_max_deg = 90.0;
    double camera_height_min_m = 3.0;
    double camera_height_max_m = 20.0;
    double focal_min_px = 500.0;
    double focal_max_px = 800.0;
    int image_w = 512;
    int image_h = 512;
    int bev_size = 512;
    // Minimum separation between persons: the larger of the metric floor
    // and the BEV-pixel floor converted through the scene's grid scale.
    double min_separation_m = 0.3;
    double min_separation_bev_px = 0.0;
    std::uint64_t seed = 0;

    // Throws InfeasibleConfig on empty or unphysical ranges.
    void validate() const;
};

// Samples camera and persons. Every person lies in the BEV RoI and
// projects into the image; placement keeps the configured minimum
// separation. Deterministic per seed. Throws InfeasibleConfig when the
// feasible region cannot hold the requested count.
Scene sample_scene(const SceneConfig& cfg);

// The BEV grid the sampler used for its RoI (bev_size square).
BevGrid scene_grid(const Scene& scene, int bev_size);

struct PersonAnnotation {
    Point2 head_uv;
    Point2 feet_uv;
};

// Projects every person's feet (ground plane) and head (plane at their
// height) into the image. The head sits above the feet exactly when the
// person stands forward of the camera nadir; straight overhead the pair
// splays radially away from the principal point, coinciding only on the
// optical axis.
std::vector<PersonAnnotation> annotate(const Scene& scene);

// Everything the evaluation pipeline consumes, generated consistently
// from one scene. Head and feet maps cover all persons; BEV quantities
// cover the in-RoI subset.
struct GroundTruthBundle {
    Heatmap head_map; // image frame
    Heatmap feet_map; // image frame
    Heatmap bev_map;  // BEV frame
    Heatmap risk;     // BEV frame
    BinaryMask mask;
    double global_risk_density = 0.0;
    KeypointSet bev_points;   // all persons, flags mark RoI membership
    KeypointSet world_points; // true positions of in-RoI persons, meters
};

GroundTruthBundle ground_truth_bundle(const Scene& scene, const BevGrid& grid,
                                      const RasterConfig& raster_cfg,
                                      const RiskConfig& risk_cfg);

} // namespace bevkit
