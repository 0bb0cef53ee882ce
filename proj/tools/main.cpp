#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bevkit/errors.hpp"
#include "bevkit/geometry.hpp"
#include "bevkit/gridfile.hpp"
#include "bevkit/log.hpp"
#include "bevkit/metrics.hpp"
#include "bevkit/objective.hpp"
#include "bevkit/png_io.hpp"
#include "bevkit/risk.hpp"
#include "bevkit/scenefile.hpp"
#include "bevkit/simulator.hpp"
#include "bevkit/warp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void dump_report(const fs::path& path, const json& j) {
    std::ofstream f(path, std::ios::trunc);
    if (!f)
        throw bevkit::IoError("cannot open for writing: " + path.string());
    f << j.dump(2) << '\n';
    if (!f)
        throw bevkit::IoError("write failed: " + path.string());
}

struct SimulateArgs {
    std::string config_path;
    std::string out_path;
    std::int64_t seed = -1;
    int n = -1;
    bool annotate_out = false;
};

int cmd_simulate(const SimulateArgs& a) {
    bevkit::SceneConfig cfg;
    if (!a.config_path.empty())
        cfg = bevkit::read_scene_config(a.config_path);
    if (a.seed >= 0)
        cfg.seed = static_cast<std::uint64_t>(a.seed);
    if (a.n >= 0) {
        cfg.n_min = a.n;
        cfg.n_max = a.n;
    }
    const bevkit::Scene scene = bevkit::sample_scene(cfg);
    if (a.annotate_out) {
        const auto ann = bevkit::annotate(scene);
        bevkit::write_scene(a.out_path, scene, &ann);
    } else {
        bevkit::write_scene(a.out_path, scene);
    }
    bevkit::log_info("wrote scene with " + std::to_string(scene.persons.size()) +
                     " persons to " + a.out_path);
    return 0;
}

struct GroundTruthArgs {
    std::string scene_path;
    std::string out_dir;
    int grid_size = 512;
    double sigma = 5.0;
    double d0 = 1.5;
    double r0 = 2.0;
    bool impulse = false;
};

int cmd_groundtruth(const GroundTruthArgs& a) {
    const bevkit::Scene scene = bevkit::read_scene(a.scene_path);
    const bevkit::BevGrid grid = bevkit::scene_grid(scene, a.grid_size);

    bevkit::RasterConfig raster;
    raster.sigma_px = a.sigma;
    raster.mode = a.impulse ? bevkit::RasterMode::Impulse : bevkit::RasterMode::Gaussian;
    bevkit::RiskConfig risk_cfg;
    risk_cfg.d0_m = a.d0;
    risk_cfg.r0 = a.r0;

    const bevkit::GroundTruthBundle b =
        bevkit::ground_truth_bundle(scene, grid, raster, risk_cfg);

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    bevkit::write_grid(dir / "head.bevg", b.head_map);
    bevkit::write_grid(dir / "feet.bevg", b.feet_map);
    bevkit::write_grid(dir / "bev.bevg", b.bev_map);
    bevkit::write_grid(dir / "risk.bevg", b.risk);
    bevkit::write_png_gray8(dir / "mask.png", b.mask.width, b.mask.height,
                            bevkit::mask_to_gray8(b.mask));

    int in_roi = 0;
    for (std::size_t i = 0; i < b.bev_points.size(); ++i)
        in_roi += b.bev_points.point_in_roi(i) ? 1 : 0;

    json report;
    report["scale_m_per_px"] = grid.scale;
    report["global_risk"] = b.global_risk_density;
    report["persons_total"] = scene.persons.size();
    report["persons_in_roi"] = in_roi;
    report["bev_mass"] = bevkit::count(b.bev_map);
    report["grid_height"] = grid.height;
    report["grid_width"] = grid.width;
    report["sigma_px"] = a.sigma;
    report["d0_m"] = a.d0;
    report["r0"] = a.r0;
    report["raster_mode"] = a.impulse ? "impulse" : "gaussian";
    dump_report(dir / "report.json", report);
    bevkit::log_info("wrote ground truth bundle to " + a.out_dir);
    return 0;
}

struct WarpArgs {
    std::string grid_path;
    std::string scene_path;
    std::string out_path;
    int grid_size = 512;
    double plane_height = 0.0;
};

int cmd_warp(const WarpArgs& a) {
    const bevkit::Heatmap src = bevkit::read_grid(a.grid_path);
    if (src.frame != bevkit::Frame::ImageView)
        throw bevkit::FrameMismatch("warp input must be an image-view grid");
    const bevkit::Scene scene = bevkit::read_scene(a.scene_path);
    const bevkit::BevGrid grid = bevkit::scene_grid(scene, a.grid_size);
    const bevkit::Heatmap out =
        bevkit::warp_to_bev(src, scene.intr, scene.pose, grid, a.plane_height);
    bevkit::write_grid(a.out_path, out);
    bevkit::log_info("wrote warped grid to " + a.out_path);
    return 0;
}

struct RiskArgs {
    std::string grid_path;
    std::string out_path;
    std::string mask_png;
    std::string report_path;
    double d0 = 1.5;
    double r0 = 2.0;
};

int cmd_risk(const RiskArgs& a) {
    const bevkit::Heatmap bev = bevkit::read_grid(a.grid_path);
    bevkit::RiskConfig cfg;
    cfg.d0_m = a.d0;
    cfg.r0 = a.r0;
    const bevkit::Heatmap risk = bevkit::risk_map(bev, cfg);
    const bevkit::BinaryMask mask = bevkit::risk_mask(risk, cfg);
    bevkit::write_grid(a.out_path, risk);
    if (!a.mask_png.empty())
        bevkit::write_png_gray8(a.mask_png, mask.width, mask.height,
                                bevkit::mask_to_gray8(mask));
    if (!a.report_path.empty()) {
        const double s = bev.grid->scale;
        json report;
        report["global_risk"] = bevkit::global_risk(bev, risk, cfg);
        report["mask_area_px"] = mask.area();
        report["mask_area_m2"] = static_cast<double>(mask.area()) * s * s;
        report["scale_m_per_px"] = s;
        report["d0_m"] = a.d0;
        report["r0"] = a.r0;
        dump_report(a.report_path, report);
    }
    bevkit::log_info("wrote risk map to " + a.out_path);
    return 0;
}

struct EvaluateArgs {
    std::vector<std::string> pred;
    std::vector<std::string> gt;
    std::string out_path;
    double d0 = 1.5;
    double r0 = 2.0;
    int jobs = 1;
};

struct ImageEval {
    bool localized = false; // chamfer defined
    bool missed = false;    // exactly one side had no detections
    double chamfer_m = 0.0;
    double chamfer_normalized = 0.0;
    double iou = 0.0;
    double rg_pred = 0.0;
    double rg_gt = 0.0;
    std::size_t det_pred = 0;
    std::size_t det_gt = 0;
};

ImageEval evaluate_pair(const fs::path& pred_path, const fs::path& gt_path,
                        const bevkit::RiskConfig& cfg) {
    const bevkit::Heatmap pred = bevkit::read_grid(pred_path);
    const bevkit::Heatmap gt = bevkit::read_grid(gt_path);
    if (pred.frame != bevkit::Frame::Bev || gt.frame != bevkit::Frame::Bev)
        throw bevkit::FrameMismatch("evaluate requires BEV grids: " +
                                    pred_path.string());
    if (pred.height != gt.height || pred.width != gt.width)
        throw bevkit::DimensionMismatch("grid dimensions differ: " +
                                        pred_path.string());
    const double ds = std::abs(pred.grid->scale - gt.grid->scale);
    if (ds > 1e-12 * gt.grid->scale)
        throw bevkit::DimensionMismatch("grid scales differ: " + pred_path.string());

    ImageEval r;
    const bevkit::KeypointSet loc_pred = bevkit::extract_locations(pred);
    const bevkit::KeypointSet loc_gt = bevkit::extract_locations(gt);
    r.det_pred = loc_pred.size();
    r.det_gt = loc_gt.size();
    try {
        const bevkit::LocalizationResult lr = bevkit::chamfer(loc_pred, loc_gt, cfg.d0_m);
        r.localized = true;
        r.chamfer_m = lr.chamfer_m;
        r.chamfer_normalized = lr.chamfer_normalized;
    } catch (const bevkit::UndefinedMetric&) {
        r.missed = true;
    }
    const bevkit::Heatmap risk_pred = bevkit::risk_map(pred, cfg);
    const bevkit::Heatmap risk_gt = bevkit::risk_map(gt, cfg);
    r.iou = bevkit::risk_iou(bevkit::risk_mask(risk_pred, cfg),
                             bevkit::risk_mask(risk_gt, cfg));
    r.rg_pred = bevkit::global_risk(pred, risk_pred, cfg);
    r.rg_gt = bevkit::global_risk(gt, risk_gt, cfg);
    return r;
}

int cmd_evaluate(const EvaluateArgs& a) {
    if (a.pred.size() != a.gt.size())
        throw bevkit::InfeasibleConfig("evaluate needs matching --pred/--gt counts");
    if (a.pred.empty())
        throw bevkit::InfeasibleConfig("evaluate needs at least one grid pair");
    if (a.jobs < 1)
        throw bevkit::InfeasibleConfig("--jobs must be at least 1");

    bevkit::RiskConfig cfg;
    cfg.d0_m = a.d0;
    cfg.r0 = a.r0;

    const std::size_t n = a.pred.size();
    std::vector<ImageEval> results(n);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                results[i] = evaluate_pair(a.pred[i], a.gt[i], cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
    };
    const int n_threads = std::min<int>(a.jobs, static_cast<int>(n));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    // Sequential reduction in index order keeps the report independent of
    // the thread count.
    json per_image = json::array();
    double sum_d = 0.0, sum_dn = 0.0, sum_iou = 0.0, sum_sq = 0.0;
    std::size_t localized = 0, missed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const ImageEval& r = results[i];
        json item;
        item["index"] = i;
        item["pred"] = a.pred[i];
        item["gt"] = a.gt[i];
        item["missed"] = r.missed;
        item["iou"] = r.iou;
        item["global_risk_pred"] = r.rg_pred;
        item["global_risk_gt"] = r.rg_gt;
        item["detections_pred"] = r.det_pred;
        item["detections_gt"] = r.det_gt;
        if (r.localized) {
            item["chamfer_m"] = r.chamfer_m;
            item["chamfer_normalized"] = r.chamfer_normalized;
            sum_d += r.chamfer_m;
            sum_dn += r.chamfer_normalized;
            ++localized;
        } else {
            ++missed;
        }
        sum_iou += r.iou;
        const double d = r.rg_pred - r.rg_gt;
        sum_sq += d * d;
        per_image.push_back(std::move(item));
    }

    json aggregate;
    aggregate["images"] = n;
    aggregate["localized_images"] = localized;
    aggregate["missed"] = missed;
    if (localized > 0) {
        aggregate["chamfer_m"] = sum_d / static_cast<double>(localized);
        aggregate["chamfer_normalized"] = sum_dn / static_cast<double>(localized);
    } else {
        aggregate["chamfer_m"] = nullptr;
        aggregate["chamfer_normalized"] = nullptr;
    }
    aggregate["iou"] = sum_iou / static_cast<double>(n);
    aggregate["global_risk_mse"] = sum_sq / static_cast<double>(n);
    aggregate["d0_m"] = a.d0;
    aggregate["r0"] = a.r0;

    json report;
    report["aggregate"] = aggregate;
    report["per_image"] = per_image;
    dump_report(a.out_path, report);
    bevkit::log_info("wrote evaluation report to " + a.out_path);
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"BEV social-distancing toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Sample a synthetic scene");
    simulate->add_option("--config", sim.config_path, "Scene config JSON");
    simulate->add_option("--seed", sim.seed, "Override the config seed");
    simulate->add_option("--n", sim.n, "Fix the person count");
    simulate->add_flag("--annotate", sim.annotate_out, "Embed head/feet annotations");
    simulate->add_option("--out", sim.out_path, "Output scene JSON")->required();

    GroundTruthArgs gt;
    CLI::App* groundtruth =
        app.add_subcommand("groundtruth", "Generate the ground-truth bundle");
    groundtruth->add_option("--scene", gt.scene_path, "Scene JSON")->required();
    groundtruth->add_option("--grid-size", gt.grid_size, "BEV raster size");
    groundtruth->add_option("--sigma", gt.sigma, "Raster kernel sigma, px");
    groundtruth->add_option("--d0", gt.d0, "Safe distance, m");
    groundtruth->add_option("--r0", gt.r0, "Occupancy threshold");
    groundtruth->add_flag("--impulse", gt.impulse, "Impulse rasterization");
    groundtruth->add_option("--out-dir", gt.out_dir, "Output directory")->required();

    WarpArgs warp;
    CLI::App* warp_cmd = app.add_subcommand("warp", "Warp an image grid to BEV");
    warp_cmd->add_option("--grid", warp.grid_path, "Input image-view grid")->required();
    warp_cmd->add_option("--scene", warp.scene_path, "Scene JSON (camera)")->required();
    warp_cmd->add_option("--grid-size", warp.grid_size, "BEV raster size");
    warp_cmd->add_option("--plane-height", warp.plane_height, "Warp plane height, m");
    warp_cmd->add_option("--out", warp.out_path, "Output BEV grid")->required();

    RiskArgs risk;
    CLI::App* risk_cmd = app.add_subcommand("risk", "Risk map from a BEV grid");
    risk_cmd->add_option("--grid", risk.grid_path, "Input BEV grid")->required();
    risk_cmd->add_option("--d0", risk.d0, "Safe distance, m");
    risk_cmd->add_option("--r0", risk.r0, "Occupancy threshold");
    risk_cmd->add_option("--mask-png", risk.mask_png, "Optional mask PNG path");
    risk_cmd->add_option("--report", risk.report_path, "Optional JSON report path");
    risk_cmd->add_option("--out", risk.out_path, "Output risk grid")->required();

    EvaluateArgs ev;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Compare prediction grids to ground truth");
    evaluate->add_option("--pred", ev.pred, "Prediction BEV grids")->required();
    evaluate->add_option("--gt", ev.gt, "Ground-truth BEV grids")->required();
    evaluate->add_option("--d0", ev.d0, "Safe distance, m");
    evaluate->add_option("--r0", ev.r0, "Occupancy threshold");
    evaluate->add_option("--jobs", ev.jobs, "Worker threads");
    evaluate->add_option("--out", ev.out_path, "Output report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (simulate->parsed())
        return cmd_simulate(sim);
    if (groundtruth->parsed())
        return cmd_groundtruth(gt);
    if (warp_cmd->parsed())
        return cmd_warp(warp);
    if (risk_cmd->parsed())
        return cmd_risk(risk);
    if (evaluate->parsed())
        return cmd_evaluate(ev);
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const bevkit::InfeasibleConfig& e) {
        bevkit::log_error(e.what());
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const bevkit::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const bevkit::DegeneratePlane& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const bevkit::KernelTooLarge& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const bevkit::DegenerateGeometry& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const bevkit::DimensionMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const bevkit::FrameMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
