// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

quadraw::AlgoOptions parse_options(const std::vector<std::string>& kvs) {
    quadraw::AlgoOptions options;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw quadraw::ConfigError("algorithm option \"" + kv + "\" is not key=value");
        try {
            options[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw quadraw::ConfigError("algorithm option \"" + kv + "\" has a non-numeric value");
        }
    }
    return options;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadraw: Quad-Bayer remosaic simulation, algorithms, and scoring"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<uint64_t> seed;
    int jobs = 1;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON run configuration file");
    app.add_option("--seed", seed, "override the noise seed");
    app.add_option("--jobs", jobs, "worker threads for per-scene processing")
        ->check(CLI::PositiveNumber);
    app.add_flag("--verbose", verbose, "chatty progress output");

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "synthesize aligned Quad/Bayer pairs with calibrated noise from RGB PNGs");
    std::string sim_in, sim_out;
    std::vector<double> gains;
    std::optional<int> bit_depth;
    bool assume_linear = false;
    simulate->add_option("--input", sim_in, "directory of 16-bit RGB PNG scenes")->required();
    simulate->add_option("--output", sim_out, "output directory for raw containers")->required();
    simulate->add_option("--gains", gains, "gain levels in dB (default from config: 0 24 42)");
    simulate->add_option("--bit-depth", bit_depth, "container DN depth, 1..16");
    simulate->add_flag("--assume-linear", assume_linear,
                       "treat PNG values as scene-linear instead of sRGB-encoded");

    // remosaic
    auto* remosaic = app.add_subcommand("remosaic", "convert Quad containers to Bayer RGGB");
    std::string rem_in, rem_out, algo_name;
    std::vector<std::string> algo_kvs;
    remosaic->add_option("--input", rem_in, "directory of Quad containers")->required();
    remosaic->add_option("--output", rem_out, "output directory")->required();
    remosaic->add_option("--algo", algo_name, "algorithm: swap | interp | joint");
    remosaic->add_option("--opt", algo_kvs, "algorithm option key=value (repeatable)");

    // isp
    auto* isp = app.add_subcommand("isp", "render a Bayer container through the reference ISP");
    std::string isp_in, isp_out, isp_demosaic;
    isp->add_option("--input", isp_in, "Bayer .raw container")->required();
    isp->add_option("--output", isp_out, "16-bit PNG path")->required();
    isp->add_option("--demosaic", isp_demosaic, "bilinear | malvar");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score predictions against ground truth");
    std::vector<std::string> pred_dirs;
    std::string gt_dir, report_path;
    std::string lpips_path;
    evaluate->add_option("--pred", pred_dirs, "prediction directory (repeat to rank several)")
        ->required();
    evaluate->add_option("--gt", gt_dir, "ground-truth directory")->required();
    evaluate->add_option("--lpips", lpips_path, "LPIPS sidecar JSON {scene_id: value}");
    evaluate->add_option("--report", report_path, "report JSON output path")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "time an algorithm and extrapolate to 64 MP");
    std::string bench_algo = "interp";
    int bench_w = 1200, bench_h = 1800, reps = 5;
    std::string bench_report;
    bench->add_option("--algo", bench_algo, "algorithm to time (default interp)");
    bench->add_option("--width", bench_w, "frame width (default 1200)");
    bench->add_option("--height", bench_h, "frame height (default 1800)");
    bench->add_option("--reps", reps, "timed repetitions, >= 3 (default 5)");
    bench->add_option("--report", bench_report, "stats JSON output path");

    CLI11_PARSE(app, argc, argv);

    try {
        quadraw::CommandContext ctx;
        if (!config_path.empty())
            ctx.config = quadraw::load_run_config(config_path);
        if (seed)
            ctx.config.noise.seed = *seed;
        ctx.jobs = jobs;
        ctx.verbose = verbose;

        if (simulate->parsed()) {
            if (!gains.empty())
                ctx.config.noise.gains_db = gains;
            if (bit_depth)
                ctx.config.bit_depth = *bit_depth;
            quadraw::validate_config(ctx.config);
            return quadraw::cmd_simulate(sim_in, sim_out, ctx, assume_linear);
        }
        if (remosaic->parsed()) {
            if (!algo_name.empty())
                ctx.config.algorithm.name = algo_name;
            if (!algo_kvs.empty())
                ctx.config.algorithm.options = parse_options(algo_kvs);
            return quadraw::cmd_remosaic(rem_in, rem_out, ctx);
        }
        if (isp->parsed()) {
            if (!isp_demosaic.empty())
                ctx.config.isp.demosaic = quadraw::demosaic_from_name(isp_demosaic);
            return quadraw::cmd_isp(isp_in, isp_out, ctx);
        }
        if (evaluate->parsed()) {
            std::vector<std::filesystem::path> preds(pred_dirs.begin(), pred_dirs.end());
            std::optional<std::filesystem::path> lpips;
            if (!lpips_path.empty())
                lpips = lpips_path;
            return quadraw::cmd_evaluate(preds, gt_dir, lpips, report_path, ctx);
        }
        if (bench->parsed()) {
            std::optional<std::filesystem::path> report;
            if (!bench_report.empty())
                report = bench_report;
            return quadraw::cmd_bench(bench_algo, bench_w, bench_h, reps, report, ctx);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
