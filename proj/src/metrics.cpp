// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace quadraw {

namespace {

void check_pair(const RgbImage& ref, const RgbImage& test, bool check_domain) {
    if (ref.width != test.width || ref.height != test.height)
        throw InvalidInput("metric inputs must have identical dimensions");
    if (check_domain && ref.domain != test.domain)
        throw InvalidInput("metric inputs must share the same domain tag");
    if (ref.width <= 0 || ref.height <= 0)
        throw InvalidInput("metric inputs must be non-empty");
}

} // namespace

double psnr(const RgbImage& ref, const RgbImage& test, const MetricParams& params) {
    check_pair(ref, test, /*check_domain=*/true);
    double sq_sum = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
        const auto& a = ref.planes[ch];
        const auto& b = test.planes[ch];
        for (size_t i = 0; i < a.size(); ++i) {
            const double d = double(a[i]) - double(b[i]);
            sq_sum += d * d;
        }
    }
    const double mse = sq_sum / (3.0 * ref.pixel_count());
    if (mse <= 0.0)
        return params.psnr_cap;
    return std::min(params.psnr_cap, 10.0 * std::log10(1.0 / mse));
}

namespace {

std::vector<double> gaussian_taps(int window, double sigma) {
    const int half = window / 2;
    std::vector<double> taps(window);
    double sum = 0.0;
    for (int i = 0; i < window; ++i) {
        taps[i] = std::exp(-double(i - half) * (i - half) / (2.0 * sigma * sigma));
        sum += taps[i];
    }
    for (double& t : taps)
        t /= sum;
    return taps;
}

// Separable valid-mode Gaussian filtering of a width x height map.
std::vector<double> gauss_valid(const std::vector<double>& src, int width, int height,
                                const std::vector<double>& taps) {
    const int w = static_cast<int>(taps.size());
    const int out_w = width - w + 1;
    const int out_h = height - w + 1;

    std::vector<double> tmp(static_cast<size_t>(out_w) * height);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < out_w; ++c) {
            double acc = 0.0;
            for (int k = 0; k < w; ++k)
                acc += taps[k] * src[static_cast<size_t>(r) * width + c + k];
            tmp[static_cast<size_t>(r) * out_w + c] = acc;
        }

    std::vector<double> out(static_cast<size_t>(out_w) * out_h);
    for (int r = 0; r < out_h; ++r)
        for (int c = 0; c < out_w; ++c) {
            double acc = 0.0;
            for (int k = 0; k < w; ++k)
                acc += taps[k] * tmp[static_cast<size_t>(r + k) * out_w + c];
            out[static_cast<size_t>(r) * out_w + c] = acc;
        }
    return out;
}

} // namespace

double ssim(const RgbImage& ref, const RgbImage& test, const MetricParams& params) {
    check_pair(ref, test, /*check_domain=*/false);
    if (ref.width < params.ssim_window || ref.height < params.ssim_window)
        throw InvalidInput("image smaller than the SSIM window");

    const double c1 = params.ssim_k1 * params.ssim_k1; // L = 1
    const double c2 = params.ssim_k2 * params.ssim_k2;
    const auto taps = gaussian_taps(params.ssim_window, params.ssim_sigma);
    const size_t n = ref.pixel_count();

    double channel_sum = 0.0;
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (int ch = 0; ch < 3; ++ch) {
        const auto& a = ref.planes[ch];
        const auto& b = test.planes[ch];
        for (size_t i = 0; i < n; ++i) {
            x[i] = a[i];
            y[i] = b[i];
            xx[i] = x[i] * x[i];
            yy[i] = y[i] * y[i];
            xy[i] = x[i] * y[i];
        }
        const auto mu_x = gauss_valid(x, ref.width, ref.height, taps);
        const auto mu_y = gauss_valid(y, ref.width, ref.height, taps);
        const auto e_xx = gauss_valid(xx, ref.width, ref.height, taps);
        const auto e_yy = gauss_valid(yy, ref.width, ref.height, taps);
        const auto e_xy = gauss_valid(xy, ref.width, ref.height, taps);

        double acc = 0.0;
        for (size_t i = 0; i < mu_x.size(); ++i) {
            const double var_x = e_xx[i] - mu_x[i] * mu_x[i];
            const double var_y = e_yy[i] - mu_y[i] * mu_y[i];
            const double cov = e_xy[i] - mu_x[i] * mu_y[i];
            const double num = (2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * cov + c2);
            const double den = (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (var_x + var_y + c2);
            acc += num / den;
        }
        channel_sum += acc / mu_x.size();
    }
    return channel_sum / 3.0;
}

double kld(const RawImage& ref_bayer, const RawImage& test_bayer, const MetricParams& params) {
    if (ref_bayer.width != test_bayer.width || ref_bayer.height != test_bayer.height)
        throw InvalidInput("KLD inputs must have identical dimensions");
    if (params.kld_bins < 2)
        throw ConfigError("KLD needs at least 2 bins");

    const int bins = params.kld_bins;
    const double eps = params.kld_epsilon;
    std::vector<double> p(bins, 0.0), q(bins, 0.0);
    auto bin_of = [bins](float v) {
        int b = static_cast<int>(double(v) * bins);
        return std::clamp(b, 0, bins - 1);
    };
    for (float v : ref_bayer.data)
        p[bin_of(v)] += 1.0;
    for (float v : test_bayer.data)
        q[bin_of(v)] += 1.0;

    const double p_total = double(ref_bayer.data.size()) + bins * eps;
    const double q_total = double(test_bayer.data.size()) + bins * eps;
    double kl = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double pb = (p[b] + eps) / p_total;
        const double qb = (q[b] + eps) / q_total;
        kl += pb * std::log(pb / qb);
    }
    return kl;
}

double m4(double psnr_db, double ssim_score, double lpips_score, double kld_score) {
    return psnr_db * ssim_score * std::exp2(1.0 - lpips_score - kld_score);
}

MetricsRecord evaluate_scene(const RawImage& pred_bayer, const RawImage& gt_bayer,
                             const IspConfig& isp, std::optional<double> lpips_value,
                             const MetricParams& params) {
    if (pred_bayer.width != gt_bayer.width || pred_bayer.height != gt_bayer.height)
        throw InvalidInput("predicted and ground-truth Bayer dimensions differ");

    MetricsRecord rec;
    rec.gain_db = pred_bayer.gain_db;
    rec.kld = kld(gt_bayer, pred_bayer, params);
    const RgbImage rgb_gt = run_isp(gt_bayer, isp);
    const RgbImage rgb_pred = run_isp(pred_bayer, isp);
    rec.psnr = psnr(rgb_gt, rgb_pred, params);
    rec.ssim = ssim(rgb_gt, rgb_pred, params);
    rec.lpips = lpips_value;
    rec.m4 = m4(rec.psnr, rec.ssim, lpips_value.value_or(0.0), rec.kld);
    return rec;
}

MetricsReport aggregate(std::vector<MetricsRecord> records, std::string config_fingerprint) {
    if (records.empty())
        throw InvalidInput("cannot aggregate an empty record list");

    std::sort(records.begin(), records.end(), [](const MetricsRecord& a, const MetricsRecord& b) {
        if (a.scene_id != b.scene_id)
            return a.scene_id < b.scene_id;
        return a.gain_db < b.gain_db;
    });

    auto mean_of = [](const std::vector<const MetricsRecord*>& recs) {
        MetricAverages avg;
        for (const MetricsRecord* r : recs) {
            avg.psnr += r->psnr;
            avg.ssim += r->ssim;
            avg.kld += r->kld;
            avg.m4 += r->m4;
            if (r->lpips) {
                avg.lpips += *r->lpips;
                ++avg.lpips_count;
            }
            ++avg.count;
        }
        avg.psnr /= avg.count;
        avg.ssim /= avg.count;
        avg.kld /= avg.count;
        avg.m4 /= avg.count;
        if (avg.lpips_count > 0)
            avg.lpips /= avg.lpips_count;
        return avg;
    };

    MetricsReport report;
    std::vector<const MetricsRecord*> all;
    std::vector<double> gains;
    for (const auto& r : records) {
        all.push_back(&r);
        if (std::find(gains.begin(), gains.end(), r.gain_db) == gains.end())
            gains.push_back(r.gain_db);
    }
    std::sort(gains.begin(), gains.end());

    report.averages = mean_of(all);
    for (double g : gains) {
        std::vector<const MetricsRecord*> group;
        for (const auto& r : records)
            if (r.gain_db == g)
                group.push_back(&r);
        report.per_gain.emplace_back(g, mean_of(group));
    }
    report.records = std::move(records);
    report.config_fingerprint = std::move(config_fingerprint);
    return report;
}

std::string fingerprint_hex(std::string_view canonical) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string canonical_metric_config(const IspConfig& isp, const MetricParams& params) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "isp{demosaic=" << to_string(isp.demosaic) << ",wb=" << isp.wb_gains[0] << ","
       << isp.wb_gains[1] << "," << isp.wb_gains[2]
       << ",gamma=" << (isp.gamma == GammaCurve::srgb ? "srgb" : "power")
       << ",exponent=" << isp.gamma_exponent << ",clip=" << isp.clip << "}";
    os << "metrics{bins=" << params.kld_bins << ",eps=" << params.kld_epsilon
       << ",ssim_window=" << params.ssim_window << ",ssim_sigma=" << params.ssim_sigma
       << ",k1=" << params.ssim_k1 << ",k2=" << params.ssim_k2 << ",psnr_cap=" << params.psnr_cap
       << "}";
    return os.str();
}

} // namespace quadraw
