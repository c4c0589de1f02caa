// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/run_config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace quadraw {

struct CommandContext {
    RunConfig config;
    int jobs = 1;
    bool verbose = false;
};

/// simulate: PNG scenes -> per-gain noisy Quad containers + one clean ground
/// truth Bayer per scene. Returns a process exit status.
int cmd_simulate(const std::filesystem::path& rgb_dir, const std::filesystem::path& out_dir,
                 const CommandContext& ctx, bool assume_linear = false);

/// remosaic: every Quad container in in_dir -> Bayer container in out_dir
/// using the configured algorithm.
int cmd_remosaic(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                 const CommandContext& ctx);

/// isp: render one Bayer container to a 16-bit PNG.
int cmd_isp(const std::filesystem::path& bayer_file, const std::filesystem::path& png_out,
            const CommandContext& ctx);

/// evaluate: score predicted Bayer directories against ground truth. With
/// several pred dirs the report carries a ranking by mean M4.
int cmd_evaluate(const std::vector<std::filesystem::path>& pred_dirs,
                 const std::filesystem::path& gt_dir,
                 const std::optional<std::filesystem::path>& lpips_sidecar,
                 const std::filesystem::path& report_path, const CommandContext& ctx);

/// bench: time one algorithm on a synthetic frame and extrapolate to 64 MP.
int cmd_bench(const std::string& algo_name, int width, int height, int reps,
              const std::optional<std::filesystem::path>& report_path, const CommandContext& ctx);

/// Synthetic noisy Quad frame used by bench (deterministic content).
RawImage make_bench_input(int width, int height, double gain_db, const NoiseConfig& noise);

/// "24" for 24.0, "7.5" for 7.5; used in output filenames.
std::string format_gain(double gain_db);

} // namespace quadraw
