// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/isp.hpp"
#include "quadraw/raw_image.hpp"
#include "quadraw/rgb_image.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace quadraw {

struct MetricParams {
    int kld_bins = 256;
    double kld_epsilon = 1e-8;
    int ssim_window = 11;
    double ssim_sigma = 1.5;
    double ssim_k1 = 0.01;
    double ssim_k2 = 0.03;
    double psnr_cap = 99.0; // keeps the composite score finite on identical images
};

/// 10*log10(1/MSE) over all pixels and channels, peak 1.0, capped.
double psnr(const RgbImage& ref, const RgbImage& test, const MetricParams& params = {});

/// Mean SSIM with a Gaussian window (valid positions only), computed per
/// channel and averaged over the three channels. L = 1.
double ssim(const RgbImage& ref, const RgbImage& test, const MetricParams& params = {});

/// KL(ref || test) between pooled pixel-value histograms over [0,1] with
/// uniform bins and additive epsilon smoothing before normalization.
double kld(const RawImage& ref_bayer, const RawImage& test_bayer, const MetricParams& params = {});

/// Composite score: PSNR * SSIM * 2^(1 - LPIPS - KLD).
double m4(double psnr_db, double ssim_score, double lpips_score, double kld_score);

struct MetricsRecord {
    std::string scene_id;
    double gain_db = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
    double kld = 0.0;
    double m4 = 0.0;
    std::optional<double> lpips; // externally supplied; absent is flagged, never zeroed silently
};

/// KLD on the raw Bayer pair, PSNR/SSIM on the ISP renders, M4 composite.
/// An absent LPIPS enters M4 as 0 and stays flagged in the record.
MetricsRecord evaluate_scene(const RawImage& pred_bayer, const RawImage& gt_bayer,
                             const IspConfig& isp, std::optional<double> lpips_value,
                             const MetricParams& params = {});

struct MetricAverages {
    double psnr = 0.0;
    double ssim = 0.0;
    double lpips = 0.0; // mean over records that carry a value
    double kld = 0.0;
    double m4 = 0.0; // mean of per-record M4, not M4 of the means
    int count = 0;
    int lpips_count = 0;
};

struct MetricsReport {
    std::vector<MetricsRecord> records;
    MetricAverages averages;
    std::vector<std::pair<double, MetricAverages>> per_gain; // sorted by gain
    std::string config_fingerprint;
};

/// Arithmetic means per metric plus per-gain sub-averages. Records are
/// ordered by (scene_id, gain) so aggregation is independent of completion
/// order. Throws on an empty record list.
MetricsReport aggregate(std::vector<MetricsRecord> records, std::string config_fingerprint);

/// FNV-1a over a canonical serialization; used as the report fingerprint.
std::string fingerprint_hex(std::string_view canonical);
std::string canonical_metric_config(const IspConfig& isp, const MetricParams& params);

} // namespace quadraw
