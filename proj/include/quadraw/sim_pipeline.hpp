// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/isp.hpp"
#include "quadraw/raw_image.hpp"
#include "quadraw/rgb_image.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace quadraw {

/// Heteroscedastic Gaussian read+shot noise model. At linear gain
/// G = 10^(gain_db/20) the per-pixel variance is
///
///   sigma^2(x) = k_shot * G * x + (k_read * G)^2
///
/// gain_db = 0 means "clean": add_noise returns its input unchanged.
struct NoiseParams {
    double gain_db = 0.0;
    double k_shot = 2.5e-4;
    double k_read = 1.0e-3;
    uint64_t seed = 0;
};

double linear_gain(double gain_db); // 10^(dB/20), amplitude convention
double noise_variance(double signal, const NoiseParams& params);

/// Plug-in sigma estimate at mid-gray for denoiser defaults. Zero at 0 dB,
/// matching the clean-source convention of the model.
double noise_sigma_estimate(const NoiseParams& params);

/// An aligned (input, ground truth) pair at full resolution.
struct ScenePair {
    RawImage input_quad;
    RawImage gt_bayer;
    double gain_db = 0.0;
    std::string scene_id;
};

/// Samples one CFA channel per pixel from a linear RGB image.
RawImage mosaic(const RgbImage& rgb, const CfaPattern& pattern);

/// Averages each same-color 2x2 Quad block into one pixel: half-resolution
/// Bayer RGGB with improved SNR.
RawImage qbin(const RawImage& quad);

/// Adds clipped Gaussian noise with the model above. Deterministic under a
/// fixed seed; samples are drawn per pixel index, so the result does not
/// depend on iteration order or tiling.
RawImage add_noise(const RawImage& raw, const NoiseParams& params);

/// Builds one ScenePair per gain. All pairs share the same clean gt_bayer;
/// each input is the mosaiced Quad with noise at that gain. The noise stream
/// is derived from (seed, scene_id, gain, pixel index).
std::vector<ScenePair> generate_scene(const RgbImage& rgb, std::span<const double> gains_db,
                                      const NoiseParams& base, const std::string& scene_id);

/// Replays the dataset provenance chain on a clean captured Quad frame:
/// qbin -> demosaic -> remosaic to (Quad, Bayer) at the binned resolution.
std::pair<RawImage, RawImage> replicate_capture_chain(const RawImage& captured_quad);

/// Counter-based helpers shared with tests: a stateless N(0,1) sample fully
/// determined by (stream, index).
uint64_t noise_stream_seed(uint64_t seed, std::string_view scene_id, double gain_db);
double gaussian_sample(uint64_t stream, uint64_t index);

} // namespace quadraw
