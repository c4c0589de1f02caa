// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/sim_pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace quadraw {

double linear_gain(double gain_db) {
    return std::pow(10.0, gain_db / 20.0);
}

double noise_variance(double signal, const NoiseParams& params) {
    const double g = linear_gain(params.gain_db);
    return params.k_shot * g * signal + (params.k_read * g) * (params.k_read * g);
}

double noise_sigma_estimate(const NoiseParams& params) {
    if (params.gain_db == 0.0)
        return 0.0;
    return std::sqrt(noise_variance(0.5, params));
}

RawImage mosaic(const RgbImage& rgb, const CfaPattern& pattern) {
    const int p = pattern.period();
    if (rgb.width <= 0 || rgb.height <= 0 || rgb.width % p != 0 || rgb.height % p != 0)
        throw InvalidInput("rgb dimensions must be positive multiples of the CFA period");
    if (rgb.domain != RgbDomain::linear)
        throw InvalidInput("mosaic expects a linear-domain RGB image");

    RawImage raw = make_raw(rgb.width, rgb.height, pattern);
    for (int r = 0; r < rgb.height; ++r)
        for (int c = 0; c < rgb.width; ++c)
            raw.at(r, c) = rgb.at(static_cast<int>(pattern.color_at(r, c)), r, c);
    return raw;
}

RawImage qbin(const RawImage& quad) {
    validate_raw(quad);
    if (!quad.pattern.is_quad())
        throw PatternMismatch("qbin expects a quad4 mosaic, got " + quad.pattern.name());

    RawImage out = make_raw(quad.width / 2, quad.height / 2, CfaPattern::bayer_rggb());
    out.black_level = quad.black_level;
    out.white_level = quad.white_level;
    out.gain_db = quad.gain_db;
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) {
            const double sum = double(quad.at(2 * r, 2 * c)) + quad.at(2 * r, 2 * c + 1) +
                               quad.at(2 * r + 1, 2 * c) + quad.at(2 * r + 1, 2 * c + 1);
            out.at(r, c) = static_cast<float>(0.25 * sum);
        }
    }
    return out;
}

namespace {

// SplitMix64 finalizer; the whole generator is this mix applied to a counter.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Uniform in (0,1), never exactly 0 or 1.
inline double to_unit(uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace

uint64_t noise_stream_seed(uint64_t seed, std::string_view scene_id, double gain_db) {
    uint64_t s = mix64(seed);
    s = mix64(s ^ fnv1a64(scene_id));
    s = mix64(s ^ std::bit_cast<uint64_t>(gain_db));
    return s;
}

double gaussian_sample(uint64_t stream, uint64_t index) {
    const double u1 = to_unit(mix64(stream + 2 * index));
    const double u2 = to_unit(mix64(stream + 2 * index + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RawImage add_noise(const RawImage& raw, const NoiseParams& params) {
    validate_raw(raw);
    if (params.k_shot < 0.0 || params.k_read < 0.0)
        throw ConfigError("noise coefficients k_shot and k_read must be nonnegative");
    if (params.gain_db < 0.0)
        throw ConfigError("gain_db must be nonnegative");
    if (raw.gain_db != 0.0)
        throw InvalidInput("noise is synthesized on the clean 0 dB source only");
    if (params.gain_db == 0.0)
        return raw;

    const double g = linear_gain(params.gain_db);
    const double read_var = (params.k_read * g) * (params.k_read * g);
    const double shot_coeff = params.k_shot * g;
    const uint64_t stream = mix64(params.seed ^ std::bit_cast<uint64_t>(params.gain_db));

    RawImage out = raw;
    out.gain_db = params.gain_db;
    for (size_t i = 0; i < out.data.size(); ++i) {
        const double x = out.data[i];
        const double sigma = std::sqrt(shot_coeff * x + read_var);
        const double y = x + sigma * gaussian_sample(stream, i);
        out.data[i] = static_cast<float>(std::clamp(y, 0.0, 1.0));
    }
    return out;
}

std::vector<ScenePair> generate_scene(const RgbImage& rgb, std::span<const double> gains_db,
                                      const NoiseParams& base, const std::string& scene_id) {
    std::vector<ScenePair> pairs;
    if (gains_db.empty())
        return pairs;

    const RawImage gt_bayer = mosaic(rgb, CfaPattern::bayer_rggb());
    const RawImage clean_quad = mosaic(rgb, CfaPattern::quad());

    pairs.reserve(gains_db.size());
    for (double gain : gains_db) {
        NoiseParams params = base;
        params.gain_db = gain;
        params.seed = noise_stream_seed(base.seed, scene_id, gain);
        ScenePair pair;
        pair.input_quad = add_noise(clean_quad, params);
        pair.gt_bayer = gt_bayer;
        pair.gain_db = gain;
        pair.scene_id = scene_id;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::pair<RawImage, RawImage> replicate_capture_chain(const RawImage& captured_quad) {
    if (captured_quad.gain_db != 0.0)
        throw InvalidInput("capture chain replication expects a clean Quad frame");
    const RawImage binned = qbin(captured_quad);
    const RgbImage rgb = demosaic(binned, DemosaicMethod::malvar, /*clip=*/true);
    return {mosaic(rgb, CfaPattern::quad()), mosaic(rgb, CfaPattern::bayer_rggb())};
}

} // namespace quadraw
