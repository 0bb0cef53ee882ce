#include "bevkit/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMinHeight = 1.0;
constexpr double kMaxHeight = 2.1;

double deg2rad(double deg) { return deg * kPi / 180.0; }
} // namespace

void Scene::validate() const {
    intr.validate();
    pose.validate();
    for (const Person& p : persons) {
        if (!(p.height_m >= kMinHeight) || !(p.height_m <= kMaxHeight))
            throw DegenerateGeometry("person height outside [1.0, 2.1] m");
        if (!std::isfinite(p.x_m) || !std::isfinite(p.y_m))
            throw DegenerateGeometry("person position must be finite");
    }
}

double Rng::unit() {
    // 53 significand bits, shifted into (0, 1) to keep logs finite.
    const std::uint64_t bits = state_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

double Rng::uniform(double lo, double hi) { return lo + unit() * (hi - lo); }

int Rng::uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(state_() % span);
}

double Rng::normal(double mean, double stddev) {
    const double u1 = unit();
    const double u2 = unit();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    return mean + stddev * z;
}

bool Rng::bernoulli(double p) { return unit() < p; }

void SceneConfig::validate() const {
    if (n_min < 0 || n_max < n_min)
        throw InfeasibleConfig("person count range is empty");
    if (!(cluster_fraction >= 0.0) || !(cluster_fraction <= 1.0))
        throw InfeasibleConfig("cluster fraction must lie in [0, 1]");
    if (!(cluster_spread_m > 0.0))
        throw InfeasibleConfig("cluster spread must be positive");
    if (!(height_mean_m > 0.0) || !(height_std_m >= 0.0))
        throw InfeasibleConfig("height distribution must be physical");
    if (!(pitch_min_deg > 0.0) || !(pitch_max_deg <= 90.0) ||
        pitch_max_deg < pitch_min_deg)
        throw InfeasibleConfig("pitch range must lie within (0, 90] degrees");
    if (!(camera_height_min_m > 0.0) || camera_height_max_m < camera_height_min_m)
        throw InfeasibleConfig("camera height range is empty or unphysical");
    if (!(focal_min_px > 0.0) || focal_max_px < focal_min_px)
        throw InfeasibleConfig("focal range is empty or unphysical");
    if (image_w <= 0 || image_h <= 0 || bev_size <= 0)
        throw InfeasibleConfig("raster dimensions must be positive");
    if (!(min_separation_m >= 0.0) || !(min_separation_bev_px >= 0.0))
        throw InfeasibleConfig("separation floors must be nonnegative");
}

BevGrid scene_grid(const Scene& scene, int bev_size) {
    return make_bev_grid(scene.intr, scene.pose, bev_size, bev_size);
}

namespace {

struct Placement {
    const Scene& scene;
    const BevGrid& grid;
    Homography img_from_world;
    Homography head_ref; // image projection through a nominal head plane
    double min_sep;
    std::vector<Point2> accepted;

    bool valid(const Point2& w) const {
        // Inside the BEV RoI.
        const double u = (grid.y_center + grid.scale * grid.width / 2.0 - w.y) / grid.scale;
        const double v = (grid.x_center + grid.scale * grid.height / 2.0 - w.x) / grid.scale;
        if (!(u >= 0.0 && u < grid.width && v >= 0.0 && v < grid.height))
            return false;
        // Feet (and a nominal head) inside the image; the bottom edge is
        // inclusive because the RoI's near boundary projects onto it.
        const Point2 feet = img_from_world.apply(w);
        if (!(feet.x >= 0.0 && feet.x < scene.intr.image_w &&
              feet.y >= 0.0 && feet.y <= scene.intr.image_h))
            return false;
        const Point2 head = head_ref.apply(w);
        if (!(head.x >= 0.0 && head.x < scene.intr.image_w && head.y >= 0.0))
            return false;
        for (const Point2& q : accepted)
            if (std::hypot(w.x - q.x, w.y - q.y) < min_sep)
                return false;
        return true;
    }
};

} // namespace

Scene sample_scene(const SceneConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    Scene scene;
    scene.pose.pitch_rad = deg2rad(rng.uniform(cfg.pitch_min_deg, cfg.pitch_max_deg));
    scene.pose.height_m = rng.uniform(cfg.camera_height_min_m, cfg.camera_height_max_m);
    const double focal = rng.uniform(cfg.focal_min_px, cfg.focal_max_px);
    scene.intr.fu = focal;
    scene.intr.fv = focal;
    scene.intr.uc = cfg.image_w / 2.0;
    scene.intr.vc = cfg.image_h / 2.0;
    scene.intr.image_w = cfg.image_w;
    scene.intr.image_h = cfg.image_h;

    const BevGrid grid = scene_grid(scene, cfg.bev_size);
    const int n = rng.uniform_int(cfg.n_min, cfg.n_max);

    Placement place{scene, grid,
                    image_from_world(scene.intr, scene.pose, 0.0),
                    image_from_world(scene.intr, scene.pose, kMaxHeight),
                    std::max(cfg.min_separation_m, cfg.min_separation_bev_px * grid.scale),
                    {}};
    place.accepted.reserve(n);

    int n_clustered = static_cast<int>(std::lround(cfg.cluster_fraction * n));
    if (n_clustered == 1)
        n_clustered = 0; // a group needs at least two members
    if (n_clustered >= 2 && cfg.cluster_spread_m <= place.min_sep)
        throw InfeasibleConfig("cluster spread too small for the minimum separation");

    const double x_lo = grid.x_center - grid.scale * grid.height / 2.0;
    const double x_hi = grid.x_center + grid.scale * grid.height / 2.0;
    const double y_lo = grid.y_center - grid.scale * grid.width / 2.0;
    const double y_hi = grid.y_center + grid.scale * grid.width / 2.0;

    long attempts_left = 1000L * (n + 1);
    auto draw_uniform = [&]() -> Point2 {
        return {rng.uniform(x_lo, x_hi), rng.uniform(y_lo, y_hi)};
    };
    auto try_accept = [&](const Point2& w) {
        --attempts_left;
        if (place.valid(w)) {
            place.accepted.push_back(w);
            return true;
        }
        return false;
    };

    // Grouped persons first: group sizes of up to four, never leaving a
    // remainder of one.
    int remaining_clustered = n_clustered;
    while (remaining_clustered >= 2) {
        int size = std::min(4, remaining_clustered);
        if (remaining_clustered - size == 1)
            size = remaining_clustered;

        if (attempts_left <= 0)
            throw InfeasibleConfig("could not place the requested person count");
        // Group center: a valid position, claimed as the first member.
        Point2 center;
        bool placed_center = false;
        while (attempts_left > 0 && !placed_center) {
            center = draw_uniform();
            placed_center = try_accept(center);
        }
        if (!placed_center)
            throw InfeasibleConfig("could not place the requested person count");
        int placed = 1;
        const double member_radius = cfg.cluster_spread_m / 2.0;
        while (placed < size && attempts_left > 0) {
            // Uniform over the disk that keeps pairwise spread bounded.
            const double r = member_radius * std::sqrt(rng.uniform(0.0, 1.0));
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            if (try_accept({center.x + r * std::cos(phi), center.y + r * std::sin(phi)}))
                ++placed;
        }
        if (placed < size)
            throw InfeasibleConfig("could not place the requested person count");
        remaining_clustered -= size;
    }

    while (static_cast<int>(place.accepted.size()) < n) {
        if (attempts_left <= 0)
            throw InfeasibleConfig("could not place the requested person count");
        try_accept(draw_uniform());
    }

    scene.persons.reserve(n);
    for (const Point2& w : place.accepted) {
        Person p;
        p.x_m = w.x;
        p.y_m = w.y;
        scene.persons.push_back(p);
    }
    for (Person& p : scene.persons)
        p.height_m = std::clamp(rng.normal(cfg.height_mean_m, cfg.height_std_m),
                                kMinHeight, kMaxHeight);
    // Occlusion proxy: feet visibility drops as the camera flattens out.
    const double pitch_deg = scene.pose.pitch_rad * 180.0 / kPi;
    const double p_visible =
        std::clamp(0.55 + 0.45 * (pitch_deg - 15.0) / 75.0, 0.0, 1.0);
    for (Person& p : scene.persons)
        p.visible_feet = rng.bernoulli(p_visible);

    scene.validate();
    return scene;
}

std::vector<PersonAnnotation> annotate(const Scene& scene) {
    scene.validate();
    const Homography feet_proj = image_from_world(scene.intr, scene.pose, 0.0);
    std::vector<PersonAnnotation> out;
    out.reserve(scene.persons.size());
    for (const Person& p : scene.persons) {
        const Homography head_proj =
            image_from_world(scene.intr, scene.pose, p.height_m);
        PersonAnnotation a;
        a.feet_uv = feet_proj.apply({p.x_m, p.y_m});
        a.head_uv = head_proj.apply({p.x_m, p.y_m});
        out.push_back(a);
    }
    return out;
}

GroundTruthBundle ground_truth_bundle(const Scene& scene, const BevGrid& grid,
                                      const RasterConfig& raster_cfg,
                                      const RiskConfig& risk_cfg) {
    scene.validate();
    grid.validate();
    risk_cfg.validate();

    const std::vector<PersonAnnotation> ann = annotate(scene);
    KeypointSet heads, feet;
    heads.frame = Frame::ImageView;
    feet.frame = Frame::ImageView;
    for (const PersonAnnotation& a : ann) {
        heads.points.push_back(a.head_uv);
        feet.points.push_back(a.feet_uv);
    }

    GroundTruthBundle b;
    b.head_map = rasterize(heads, scene.intr.image_h, scene.intr.image_w, raster_cfg);
    b.feet_map = rasterize(feet, scene.intr.image_h, scene.intr.image_w, raster_cfg);

    b.bev_points = bev_points_from_feet(feet, scene.intr, scene.pose, grid);
    b.bev_map = rasterize(b.bev_points.roi_subset(), grid.height, grid.width,
                          raster_cfg, grid);

    b.world_points.frame = Frame::WorldGround;
    for (std::size_t i = 0; i < scene.persons.size(); ++i)
        if (b.bev_points.point_in_roi(i))
            b.world_points.points.push_back({scene.persons[i].x_m,
                                             scene.persons[i].y_m});

    b.risk = risk_map(b.bev_map, risk_cfg);
    b.mask = risk_mask(b.risk, risk_cfg);
    b.global_risk_density = global_risk(b.bev_map, b.risk, risk_cfg);
    return b;
}

} // namespace bevkit
