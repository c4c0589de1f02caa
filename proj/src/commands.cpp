// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/commands.hpp"

#include "quadraw/bench.hpp"
#include "quadraw/container.hpp"
#include "quadraw/metrics.hpp"
#include "quadraw/png_io.hpp"
#include "quadraw/sim_pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace quadraw {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Commands report failures as exit status, not exceptions.
template <typename Fn>
int guarded_command(Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Runs fn(i) for i in [0, n), jobs at a time; returns one error string per
// failed index.
template <typename Fn>
std::vector<std::string> run_parallel(size_t n, int jobs, Fn&& fn) {
    std::vector<std::string> errors(n);
    if (jobs <= 1) {
        for (size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        const size_t count = std::min(static_cast<size_t>(jobs), n);
        pool.reserve(count);
        for (size_t t = 0; t < count; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    errors.erase(std::remove(errors.begin(), errors.end(), std::string()), errors.end());
    return errors;
}

int report_errors(const std::vector<std::string>& errors) {
    for (const auto& e : errors)
        std::cerr << "error: " << e << "\n";
    return errors.empty() ? 0 : 1;
}

RgbImage crop_rgb(const RgbImage& rgb, int height, int width) {
    RgbImage out = make_rgb(width, height, 0, 0, 0, rgb.domain);
    for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c)
                out.at(ch, r, c) = rgb.at(ch, r, c);
    return out;
}

void atomic_write_text(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out << text;
        if (!out)
            throw IoError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

} // namespace

std::string format_gain(double gain_db) {
    std::ostringstream os;
    os << gain_db;
    return os.str();
}

namespace {

int simulate_impl(const fs::path& rgb_dir, const fs::path& out_dir, const CommandContext& ctx,
                  bool assume_linear) {
    if (!fs::is_directory(rgb_dir)) {
        std::cerr << "error: " << rgb_dir.string() << " is not a directory\n";
        return 1;
    }
    std::vector<fs::path> pngs;
    for (const auto& entry : fs::directory_iterator(rgb_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            pngs.push_back(entry.path());
    std::sort(pngs.begin(), pngs.end());
    if (pngs.empty()) {
        std::cerr << "error: no scenes (*.png) found in " << rgb_dir.string() << "\n";
        return 1;
    }
    fs::create_directories(out_dir);

    const double white = double((1u << ctx.config.bit_depth) - 1);
    NoiseParams base;
    base.k_shot = ctx.config.noise.k_shot;
    base.k_read = ctx.config.noise.k_read;
    base.seed = ctx.config.noise.seed;

    auto errors = run_parallel(pngs.size(), ctx.jobs, [&](size_t i) {
        const std::string scene_id = pngs[i].stem().string();
        RgbImage rgb = read_png(pngs[i]);
        if (assume_linear)
            rgb.domain = RgbDomain::linear;
        else
            rgb = gamma_decode(rgb, GammaCurve::srgb);

        const int h = (rgb.height / 4) * 4;
        const int w = (rgb.width / 4) * 4;
        if (h < 4 || w < 4)
            throw InvalidInput(pngs[i].string() + ": image too small for a 4x4 CFA after cropping");
        if (h != rgb.height || w != rgb.width)
            rgb = crop_rgb(rgb, h, w);

        auto pairs = generate_scene(rgb, ctx.config.noise.gains_db, base, scene_id);
        for (auto& pair : pairs) {
            pair.input_quad.black_level = 0.0;
            pair.input_quad.white_level = white;
            const fs::path out =
                out_dir / (scene_id + "_quad_" + format_gain(pair.gain_db) + "db.raw");
            save_container(out, pair.input_quad, scene_id, ctx.config.bit_depth);
        }
        if (!pairs.empty()) {
            RawImage gt = pairs.front().gt_bayer;
            gt.black_level = 0.0;
            gt.white_level = white;
            save_container(out_dir / (scene_id + "_gt.raw"), gt, scene_id, ctx.config.bit_depth);
        }
        if (ctx.verbose)
            std::cout << scene_id << ": " << pairs.size() << " gain level(s) written\n";
    });
    return report_errors(errors);
}

int remosaic_impl(const fs::path& in_dir, const fs::path& out_dir, const CommandContext& ctx) {
    RemosaicAlgorithm algo = registry_lookup(ctx.config.algorithm.name);
    algo.options = ctx.config.algorithm.options;
    // Auto strength derivation needs the calibrated noise model.
    if (algo.name == "joint") {
        algo.options.try_emplace("k_shot", ctx.config.noise.k_shot);
        algo.options.try_emplace("k_read", ctx.config.noise.k_read);
    }

    std::vector<fs::path> inputs;
    for (const auto& path : list_containers(in_dir)) {
        const LoadedRaw loaded = load_container(path);
        if (loaded.image.pattern.is_quad())
            inputs.push_back(path);
        else if (ctx.verbose)
            std::cout << "skipping non-quad container " << path.filename().string() << "\n";
    }
    if (inputs.empty()) {
        std::cerr << "error: no quad containers found in " << in_dir.string() << "\n";
        return 1;
    }
    fs::create_directories(out_dir);

    auto errors = run_parallel(inputs.size(), ctx.jobs, [&](size_t i) {
        const LoadedRaw loaded = load_container(inputs[i]);
        const RawImage bayer = algo(loaded.image);
        save_container(out_dir / inputs[i].filename(), bayer, loaded.scene_id, loaded.bit_depth);
        if (ctx.verbose)
            std::cout << inputs[i].filename().string() << " -> " << algo.name << "\n";
    });
    return report_errors(errors);
}

int isp_impl(const fs::path& bayer_file, const fs::path& png_out, const CommandContext& ctx) {
    const LoadedRaw loaded = load_container(bayer_file);
    if (loaded.image.pattern.is_quad()) {
        std::cerr << "error: " << bayer_file.string()
                  << " holds a quad4 mosaic; run `quadraw remosaic` first to get a Bayer\n";
        return 1;
    }
    const RgbImage rgb = run_isp(loaded.image, ctx.config.isp);
    write_png16(rgb, png_out);
    if (ctx.verbose)
        std::cout << bayer_file.filename().string() << " -> " << png_out.string() << "\n";
    return 0;
}

struct PredEntry {
    fs::path path;
    std::string scene_id;
    double gain_db = 0.0;
};

std::optional<double> lpips_for(const ordered_json& sidecar, const std::string& scene_id,
                                double gain_db) {
    if (sidecar.is_null())
        return std::nullopt;
    const std::string keyed = scene_id + ":" + format_gain(gain_db) + "db";
    if (sidecar.contains(keyed))
        return sidecar.at(keyed).get<double>();
    if (sidecar.contains(scene_id))
        return sidecar.at(scene_id).get<double>();
    return std::nullopt;
}

std::string render_table(const MetricsReport& report) {
    std::ostringstream os;
    os << std::left << std::setw(24) << "scene" << std::right << std::setw(9) << "gain_db"
       << std::setw(9) << "psnr" << std::setw(9) << "ssim" << std::setw(9) << "lpips"
       << std::setw(9) << "kld" << std::setw(10) << "m4" << "\n";
    os << std::string(79, '-') << "\n";
    auto row = [&os](const std::string& name, const std::string& gain, double psnr, double ssim,
                     const std::optional<double>& lpips, double kld, double m4) {
        os << std::left << std::setw(24) << name << std::right << std::setw(9) << gain
           << std::setw(9) << std::fixed << std::setprecision(2) << psnr << std::setw(9)
           << std::setprecision(4) << ssim;
        if (lpips)
            os << std::setw(9) << std::setprecision(4) << *lpips;
        else
            os << std::setw(9) << "-";
        os << std::setw(9) << std::setprecision(4) << kld << std::setw(10) << std::setprecision(2)
           << m4 << "\n";
    };
    for (const auto& r : report.records)
        row(r.scene_id, format_gain(r.gain_db), r.psnr, r.ssim, r.lpips, r.kld, r.m4);
    os << std::string(79, '-') << "\n";
    for (const auto& [gain, avg] : report.per_gain)
        row("average", format_gain(gain), avg.psnr, avg.ssim,
            avg.lpips_count > 0 ? std::optional<double>(avg.lpips) : std::nullopt, avg.kld,
            avg.m4);
    row("average", "all", report.averages.psnr, report.averages.ssim,
        report.averages.lpips_count > 0 ? std::optional<double>(report.averages.lpips)
                                        : std::nullopt,
        report.averages.kld, report.averages.m4);
    return os.str();
}

ordered_json averages_json(const MetricAverages& avg) {
    ordered_json j;
    j["psnr"] = avg.psnr;
    j["ssim"] = avg.ssim;
    if (avg.lpips_count > 0)
        j["lpips"] = avg.lpips;
    else
        j["lpips"] = nullptr;
    j["kld"] = avg.kld;
    j["m4"] = avg.m4;
    j["count"] = avg.count;
    j["lpips_count"] = avg.lpips_count;
    return j;
}

ordered_json report_json(const MetricsReport& report, const fs::path& pred_dir,
                         const fs::path& gt_dir, const std::optional<fs::path>& lpips_sidecar) {
    ordered_json j;
    j["config_fingerprint"] = report.config_fingerprint;
    j["pred_dir"] = pred_dir.string();
    j["gt_dir"] = gt_dir.string();
    j["lpips_sidecar"] = lpips_sidecar ? ordered_json(lpips_sidecar->string()) : ordered_json();
    int absent = 0;
    ordered_json records = ordered_json::array();
    for (const auto& r : report.records) {
        ordered_json rec;
        rec["scene_id"] = r.scene_id;
        rec["gain_db"] = r.gain_db;
        rec["psnr"] = r.psnr;
        rec["ssim"] = r.ssim;
        rec["lpips"] = r.lpips ? ordered_json(*r.lpips) : ordered_json();
        rec["lpips_absent"] = !r.lpips.has_value();
        rec["kld"] = r.kld;
        rec["m4"] = r.m4;
        records.push_back(rec);
        if (!r.lpips)
            ++absent;
    }
    j["records"] = records;
    j["averages"] = averages_json(report.averages);
    ordered_json per_gain = ordered_json::array();
    for (const auto& [gain, avg] : report.per_gain) {
        ordered_json g = averages_json(avg);
        g["gain_db"] = gain;
        per_gain.push_back(g);
    }
    j["per_gain"] = per_gain;
    ordered_json notes = ordered_json::array();
    if (absent > 0) {
        std::ostringstream os;
        os << "lpips-absent for " << absent << " record(s); m4 computed with lpips = 0";
        notes.push_back(os.str());
    }
    notes.push_back("psnr capped for identical images");
    j["notes"] = notes;
    j["table"] = render_table(report);
    return j;
}

int evaluate_impl(const std::vector<fs::path>& pred_dirs, const fs::path& gt_dir,
                  const std::optional<fs::path>& lpips_sidecar, const fs::path& report_path,
                  const CommandContext& ctx) {
    if (pred_dirs.empty()) {
        std::cerr << "error: at least one prediction directory is required\n";
        return 1;
    }

    std::map<std::string, RawImage> gt;
    for (const auto& path : list_containers(gt_dir)) {
        LoadedRaw loaded = load_container(path);
        if (!loaded.image.pattern.is_bayer())
            continue;
        if (gt.count(loaded.scene_id)) {
            std::cerr << "error: duplicate ground-truth scene_id \"" << loaded.scene_id
                      << "\" in " << gt_dir.string() << "\n";
            return 1;
        }
        gt.emplace(loaded.scene_id, std::move(loaded.image));
    }
    if (gt.empty()) {
        std::cerr << "error: no Bayer ground-truth containers in " << gt_dir.string() << "\n";
        return 1;
    }

    ordered_json sidecar;
    if (lpips_sidecar) {
        std::ifstream in(*lpips_sidecar);
        if (!in) {
            std::cerr << "error: cannot open LPIPS sidecar " << lpips_sidecar->string() << "\n";
            return 1;
        }
        try {
            in >> sidecar;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "error: malformed LPIPS sidecar: " << e.what() << "\n";
            return 1;
        }
    }

    const std::string fingerprint = config_fingerprint(ctx.config);
    std::vector<std::pair<fs::path, MetricsReport>> reports;

    for (const auto& pred_dir : pred_dirs) {
        std::vector<PredEntry> entries;
        std::vector<std::string> unpaired;
        for (const auto& path : list_containers(pred_dir)) {
            LoadedRaw loaded = load_container(path);
            if (!loaded.image.pattern.is_bayer())
                continue;
            if (!gt.count(loaded.scene_id)) {
                unpaired.push_back(loaded.scene_id + " (" + path.filename().string() + ")");
                continue;
            }
            entries.push_back({path, loaded.scene_id, loaded.image.gain_db});
        }
        if (!unpaired.empty()) {
            std::cerr << "error: predictions in " << pred_dir.string()
                      << " without ground truth:\n";
            for (const auto& u : unpaired)
                std::cerr << "  " << u << "\n";
            return 1;
        }
        if (entries.empty()) {
            std::cerr << "error: no Bayer predictions in " << pred_dir.string() << "\n";
            return 1;
        }

        std::vector<MetricsRecord> records(entries.size());
        auto errors = run_parallel(entries.size(), ctx.jobs, [&](size_t i) {
            const LoadedRaw loaded = load_container(entries[i].path);
            MetricsRecord rec = evaluate_scene(
                loaded.image, gt.at(entries[i].scene_id), ctx.config.isp,
                lpips_for(sidecar, entries[i].scene_id, entries[i].gain_db), ctx.config.metrics);
            rec.scene_id = entries[i].scene_id;
            records[i] = std::move(rec);
        });
        if (int rc = report_errors(errors); rc != 0)
            return rc;
        reports.emplace_back(pred_dir, aggregate(std::move(records), fingerprint));
    }

    ordered_json out;
    if (reports.size() == 1) {
        out = report_json(reports[0].second, reports[0].first, gt_dir, lpips_sidecar);
        std::cout << render_table(reports[0].second);
    } else {
        std::sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
            return a.second.averages.m4 > b.second.averages.m4;
        });
        out["config_fingerprint"] = fingerprint;
        ordered_json ranking = ordered_json::array();
        ordered_json list = ordered_json::array();
        std::cout << "ranking by mean M4:\n";
        int rank = 1;
        for (const auto& [dir, report] : reports) {
            ordered_json entry;
            entry["rank"] = rank;
            entry["pred_dir"] = dir.string();
            entry["mean_m4"] = report.averages.m4;
            ranking.push_back(entry);
            list.push_back(report_json(report, dir, gt_dir, lpips_sidecar));
            std::cout << "  " << rank << ". " << dir.string() << "  m4=" << std::fixed
                      << std::setprecision(2) << report.averages.m4 << "\n";
            ++rank;
        }
        out["ranking"] = ranking;
        out["reports"] = list;
    }
    atomic_write_text(report_path, out.dump(2) + "\n");
    return 0;
}

int bench_impl(const std::string& algo_name, int width, int height, int reps,
               const std::optional<fs::path>& report_path, const CommandContext& ctx) {
    RemosaicAlgorithm algo = registry_lookup(algo_name);
    algo.options = ctx.config.algorithm.options;
    if (width < 4 || height < 4 || width % 4 != 0 || height % 4 != 0) {
        std::cerr << "error: bench size must be a positive multiple of 4\n";
        return 1;
    }

    const RawImage input = make_bench_input(width, height, 24.0, ctx.config.noise);
    const RuntimeStats stats = time_algorithm(algo, input, reps);
    const double at_64mp = extrapolate(stats, 64.0);

    std::ostringstream table;
    table << std::left << std::setw(12) << "algorithm" << std::right << std::setw(24)
          << (std::to_string(width) + "x" + std::to_string(height) + " (measured)")
          << std::setw(20) << "64M (estimated)" << "\n";
    table << std::string(56, '-') << "\n";
    table << std::left << std::setw(12) << stats.algorithm << std::right << std::setw(23)
          << std::fixed << std::setprecision(4) << stats.median_seconds << "s" << std::setw(19)
          << std::setprecision(2) << at_64mp << "s" << "\n";
    std::cout << table.str();
    std::cout << "reps " << stats.reps << ", mean " << std::setprecision(4) << stats.mean_seconds
              << "s, stddev " << stats.stddev_seconds << "s, threads " << stats.threads
              << " (timings exclude file I/O)\n";

    if (report_path) {
        ordered_json j;
        j["config_fingerprint"] = config_fingerprint(ctx.config);
        j["algorithm"] = stats.algorithm;
        j["width"] = stats.width;
        j["height"] = stats.height;
        j["reps"] = stats.reps;
        j["threads"] = stats.threads;
        j["median_seconds"] = stats.median_seconds;
        j["mean_seconds"] = stats.mean_seconds;
        j["stddev_seconds"] = stats.stddev_seconds;
        j["estimated_64mp_seconds"] = at_64mp;
        j["note"] = "timings exclude file I/O";
        atomic_write_text(*report_path, j.dump(2) + "\n");
    }
    return 0;
}

} // namespace

int cmd_simulate(const fs::path& rgb_dir, const fs::path& out_dir, const CommandContext& ctx,
                 bool assume_linear) {
    return guarded_command([&] { return simulate_impl(rgb_dir, out_dir, ctx, assume_linear); });
}

int cmd_remosaic(const fs::path& in_dir, const fs::path& out_dir, const CommandContext& ctx) {
    return guarded_command([&] { return remosaic_impl(in_dir, out_dir, ctx); });
}

int cmd_isp(const fs::path& bayer_file, const fs::path& png_out, const CommandContext& ctx) {
    return guarded_command([&] { return isp_impl(bayer_file, png_out, ctx); });
}

int cmd_evaluate(const std::vector<fs::path>& pred_dirs, const fs::path& gt_dir,
                 const std::optional<fs::path>& lpips_sidecar, const fs::path& report_path,
                 const CommandContext& ctx) {
    return guarded_command(
        [&] { return evaluate_impl(pred_dirs, gt_dir, lpips_sidecar, report_path, ctx); });
}

RawImage make_bench_input(int width, int height, double gain_db, const NoiseConfig& noise) {
    RgbImage rgb = make_rgb(width, height);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double fy = double(r) / std::max(1, height - 1);
            const double fx = double(c) / std::max(1, width - 1);
            rgb.at(0, r, c) = static_cast<float>(0.15 + 0.7 * fx);
            rgb.at(1, r, c) =
                static_cast<float>(0.5 + 0.35 * std::sin(17.0 * fx) * std::cos(11.0 * fy));
            rgb.at(2, r, c) = static_cast<float>(0.15 + 0.7 * fy);
        }
    }
    NoiseParams params;
    params.gain_db = gain_db;
    params.k_shot = noise.k_shot;
    params.k_read = noise.k_read;
    params.seed = noise_stream_seed(noise.seed, "bench", gain_db);
    return add_noise(mosaic(rgb, CfaPattern::quad()), params);
}

int cmd_bench(const std::string& algo_name, int width, int height, int reps,
              const std::optional<fs::path>& report_path, const CommandContext& ctx) {
    return guarded_command(
        [&] { return bench_impl(algo_name, width, height, reps, report_path, ctx); });
}

} // namespace quadraw
