// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

// Shared test fixtures and independent brute-force oracles. The oracles are
// deliberately written as plain double loops with none of the library's
// shortcuts (no separable filtering, no shared helpers) so they can vouch for
// the production implementations.

#pragma once

#include "quadraw/metrics.hpp"
#include "quadraw/raw_image.hpp"
#include "quadraw/rgb_image.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testutil {

inline quadraw::RgbImage random_rgb(int width, int height, uint64_t seed,
                                    quadraw::RgbDomain domain = quadraw::RgbDomain::linear) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    quadraw::RgbImage rgb = quadraw::make_rgb(width, height, 0, 0, 0, domain);
    for (auto& plane : rgb.planes)
        for (auto& v : plane)
            v = dist(rng);
    return rgb;
}

inline quadraw::RawImage random_raw(int width, int height, const quadraw::CfaPattern& pattern,
                                    uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    quadraw::RawImage raw = quadraw::make_raw(width, height, pattern);
    for (auto& v : raw.data)
        v = dist(rng);
    return raw;
}

// Gradient plus sinusoidal texture; the synthetic content used for ordering
// comparisons between algorithms.
inline quadraw::RgbImage synthetic_scene(int width, int height, int variant) {
    quadraw::RgbImage rgb = quadraw::make_rgb(width, height);
    const double angle = 0.35 * variant;
    const double fx0 = std::cos(angle), fy0 = std::sin(angle);
    const double freq = 2.0 + 1.5 * (variant % 4);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double fy = double(r) / std::max(1, height - 1);
            const double fx = double(c) / std::max(1, width - 1);
            const double ramp = 0.5 + 0.45 * (fx0 * (fx - 0.5) + fy0 * (fy - 0.5)) * 2.0;
            const double tex = 0.5 + 0.4 * std::sin(freq * 6.28318 * fx) *
                                         std::cos((freq - 0.7) * 6.28318 * fy);
            rgb.at(0, r, c) = static_cast<float>(std::clamp(0.7 * ramp + 0.2, 0.05, 0.95));
            rgb.at(1, r, c) = static_cast<float>(std::clamp(0.6 * tex + 0.2 * ramp, 0.05, 0.95));
            rgb.at(2, r, c) = static_cast<float>(std::clamp(0.9 - 0.6 * ramp + 0.1 * tex, 0.05, 0.95));
        }
    }
    return rgb;
}

// ---- oracles ----

inline double oracle_mse(const quadraw::RgbImage& a, const quadraw::RgbImage& b) {
    double acc = 0.0;
    long n = 0;
    for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < a.height; ++r)
            for (int c = 0; c < a.width; ++c) {
                const double d = double(a.at(ch, r, c)) - double(b.at(ch, r, c));
                acc += d * d;
                ++n;
            }
    return acc / n;
}

inline double oracle_psnr(const quadraw::RgbImage& a, const quadraw::RgbImage& b,
                          double cap = 99.0) {
    const double mse = oracle_mse(a, b);
    if (mse <= 0.0)
        return cap;
    return std::min(cap, 10.0 * std::log10(1.0 / mse));
}

// Direct sliding-window SSIM: builds the 2D Gaussian itself and walks every
// valid window position with explicit sums.
inline double oracle_ssim(const quadraw::RgbImage& a, const quadraw::RgbImage& b, int window = 11,
                          double sigma = 1.5, double k1 = 0.01, double k2 = 0.03) {
    const int half = window / 2;
    std::vector<double> w(static_cast<size_t>(window) * window);
    double wsum = 0.0;
    for (int i = 0; i < window; ++i)
        for (int j = 0; j < window; ++j) {
            const double d2 = double(i - half) * (i - half) + double(j - half) * (j - half);
            w[static_cast<size_t>(i) * window + j] = std::exp(-d2 / (2.0 * sigma * sigma));
            wsum += w[static_cast<size_t>(i) * window + j];
        }
    for (auto& v : w)
        v /= wsum;

    const double c1 = k1 * k1, c2 = k2 * k2;
    double channel_sum = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        long count = 0;
        for (int r = 0; r + window <= a.height; ++r) {
            for (int c = 0; c + window <= a.width; ++c) {
                double mu_x = 0.0, mu_y = 0.0, e_xx = 0.0, e_yy = 0.0, e_xy = 0.0;
                for (int i = 0; i < window; ++i)
                    for (int j = 0; j < window; ++j) {
                        const double wv = w[static_cast<size_t>(i) * window + j];
                        const double x = a.at(ch, r + i, c + j);
                        const double y = b.at(ch, r + i, c + j);
                        mu_x += wv * x;
                        mu_y += wv * y;
                        e_xx += wv * x * x;
                        e_yy += wv * y * y;
                        e_xy += wv * x * y;
                    }
                const double var_x = e_xx - mu_x * mu_x;
                const double var_y = e_yy - mu_y * mu_y;
                const double cov = e_xy - mu_x * mu_y;
                acc += ((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)) /
                       ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2));
                ++count;
            }
        }
        channel_sum += acc / count;
    }
    return channel_sum / 3.0;
}

inline double oracle_kld(const quadraw::RawImage& ref, const quadraw::RawImage& test,
                         int bins = 256, double eps = 1e-8) {
    std::vector<double> hp(bins, 0.0), hq(bins, 0.0);
    for (float v : ref.data) {
        int b = static_cast<int>(double(v) * bins);
        if (b < 0)
            b = 0;
        if (b > bins - 1)
            b = bins - 1;
        hp[b] += 1.0;
    }
    for (float v : test.data) {
        int b = static_cast<int>(double(v) * bins);
        if (b < 0)
            b = 0;
        if (b > bins - 1)
            b = bins - 1;
        hq[b] += 1.0;
    }
    const double np = double(ref.data.size()) + bins * eps;
    const double nq = double(test.data.size()) + bins * eps;
    double kl = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double p = (hp[b] + eps) / np;
        const double q = (hq[b] + eps) / nq;
        kl += p * std::log(p / q);
    }
    return kl;
}

inline double variance(const std::vector<float>& values) {
    double mean = 0.0;
    for (float v : values)
        mean += v;
    mean /= values.size();
    double var = 0.0;
    for (float v : values)
        var += (double(v) - mean) * (double(v) - mean);
    return var / (values.size() - 1);
}

} // namespace testutil
