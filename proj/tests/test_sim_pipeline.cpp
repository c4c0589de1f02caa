// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadraw/sim_pipeline.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace quadraw;

TEST_CASE("mosaic of a constant RGB places each channel at its CFA sites") {
    const RgbImage rgb = make_rgb(8, 8, 0.2f, 0.5f, 0.8f);
    const RawImage quad = mosaic(rgb, CfaPattern::quad());
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            const float expect[3] = {0.2f, 0.5f, 0.8f};
            CHECK(quad.at(r, c) == expect[static_cast<int>(quad.pattern.color_at(r, c))]);
        }
}

TEST_CASE("mosaic: 4x4 hand-picked channels follow the quad tile") {
    // Independent hand table of the 4x4 tile.
    const char tile[4][5] = {"RRGG", "RRGG", "GGBB", "GGBB"};
    RgbImage rgb = make_rgb(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            rgb.at(0, r, c) = 0.1f + 0.01f * (4 * r + c);
            rgb.at(1, r, c) = 0.4f + 0.01f * (4 * r + c);
            rgb.at(2, r, c) = 0.7f + 0.01f * (4 * r + c);
        }
    const RawImage quad = mosaic(rgb, CfaPattern::quad());
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const int ch = tile[r][c] == 'R' ? 0 : tile[r][c] == 'G' ? 1 : 2;
            CHECK(quad.at(r, c) == rgb.at(ch, r, c));
        }
}

TEST_CASE("mosaic rejects dimensions not divisible by the period") {
    const RgbImage rgb = make_rgb(6, 6);
    CHECK_THROWS_AS(mosaic(rgb, CfaPattern::quad()), InvalidInput);
    CHECK_NOTHROW(mosaic(rgb, CfaPattern::bayer_rggb()));
}

TEST_CASE("qbin averages each same-color 2x2 block") {
    RawImage quad = make_raw(4, 4, CfaPattern::quad());
    // R block gets {0.1, 0.2, 0.3, 0.4}; everything else constant.
    for (auto& v : quad.data)
        v = 0.5f;
    quad.at(0, 0) = 0.1f;
    quad.at(0, 1) = 0.2f;
    quad.at(1, 0) = 0.3f;
    quad.at(1, 1) = 0.4f;

    const RawImage binned = qbin(quad);
    REQUIRE(binned.width == 2);
    REQUIRE(binned.height == 2);
    CHECK(binned.pattern.is_bayer());
    CHECK(binned.at(0, 0) == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(binned.at(0, 1) == doctest::Approx(0.5));
    CHECK(binned.at(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("qbin of a constant quad is the constant half-res bayer") {
    const RawImage binned = qbin(make_raw(16, 8, CfaPattern::quad(), 0.333f));
    CHECK(binned.width == 8);
    CHECK(binned.height == 4);
    for (float v : binned.data)
        CHECK(v == doctest::Approx(0.333f));
}

TEST_CASE("qbin of a mosaiced constant RGB equals the half-res mosaic of the same RGB") {
    const RgbImage rgb8 = make_rgb(8, 8, 0.12f, 0.45f, 0.78f);
    const RgbImage rgb4 = make_rgb(4, 4, 0.12f, 0.45f, 0.78f);
    const RawImage binned = qbin(mosaic(rgb8, CfaPattern::quad()));
    const RawImage direct = mosaic(rgb4, CfaPattern::bayer_rggb());
    REQUIRE(binned.data.size() == direct.data.size());
    for (size_t i = 0; i < binned.data.size(); ++i)
        CHECK(binned.data[i] == doctest::Approx(direct.data[i]).epsilon(1e-7));
}

TEST_CASE("qbin preserves the global per-color mean") {
    const RawImage quad = testutil::random_raw(32, 24, CfaPattern::quad(), 42);
    const RawImage binned = qbin(quad);
    for (int color = 0; color < 3; ++color) {
        double in_sum = 0.0, out_sum = 0.0;
        long in_n = 0, out_n = 0;
        for (int r = 0; r < quad.height; ++r)
            for (int c = 0; c < quad.width; ++c)
                if (static_cast<int>(quad.pattern.color_at(r, c)) == color) {
                    in_sum += quad.at(r, c);
                    ++in_n;
                }
        for (int r = 0; r < binned.height; ++r)
            for (int c = 0; c < binned.width; ++c)
                if (static_cast<int>(binned.pattern.color_at(r, c)) == color) {
                    out_sum += binned.at(r, c);
                    ++out_n;
                }
        // Block means are stored as float32; that rounding bounds the drift.
        CHECK(in_sum / in_n == doctest::Approx(out_sum / out_n).epsilon(1e-6));
    }
}

TEST_CASE("qbin rejects bayer input") {
    CHECK_THROWS_AS(qbin(make_raw(4, 4, CfaPattern::bayer_rggb())), PatternMismatch);
}

TEST_CASE("add_noise at 0 dB is the bit-exact identity") {
    const RawImage raw = testutil::random_raw(16, 16, CfaPattern::quad(), 3);
    NoiseParams params;
    params.gain_db = 0.0;
    params.seed = 77;
    const RawImage out = add_noise(raw, params);
    CHECK(out.data == raw.data);
    CHECK(out.gain_db == 0.0);
}

TEST_CASE("add_noise is reproducible under a fixed seed and varies across seeds") {
    const RawImage raw = make_raw(16, 16, CfaPattern::quad(), 0.5f);
    NoiseParams params;
    params.gain_db = 24.0;
    params.seed = 123;
    const RawImage a = add_noise(raw, params);
    const RawImage b = add_noise(raw, params);
    CHECK(a.data == b.data);
    CHECK(a.gain_db == 24.0);

    params.seed = 124;
    const RawImage c = add_noise(raw, params);
    CHECK(a.data != c.data);
}

TEST_CASE("add_noise draws per pixel index, independent of other pixels") {
    RawImage raw = make_raw(8, 8, CfaPattern::quad(), 0.5f);
    NoiseParams params;
    params.gain_db = 24.0;
    params.seed = 9;
    const RawImage base = add_noise(raw, params);

    raw.at(3, 3) = 0.25f; // change one pixel; only that pixel's output may move
    const RawImage changed = add_noise(raw, params);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            if (r == 3 && c == 3)
                continue;
            CHECK(base.at(r, c) == changed.at(r, c));
        }
    CHECK(base.at(3, 3) != changed.at(3, 3));
}

TEST_CASE("add_noise empirical variance matches the model within 2% on 1e6 samples") {
    const RawImage raw = make_raw(1000, 1000, CfaPattern::quad(), 0.5f);
    NoiseParams params;
    params.gain_db = 24.0;
    params.seed = 4242;
    const RawImage noisy = add_noise(raw, params);

    const double var = testutil::variance(noisy.data);
    const double expected = noise_variance(0.5, params);
    CHECK(var == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("noise calibration passes a chi-square variance test at 1% significance") {
    // (n-1) s^2 / sigma^2 ~ chi2(n-1); normal approximation at n >= 1e5:
    // |s^2/sigma^2 - 1| * sqrt(n/2) < 2.576. At 24 dB and x=0.5 clipping is
    // ~10 sigma away, so the post-clip sample is the pre-clip sample.
    const RawImage raw = make_raw(400, 256, CfaPattern::quad(), 0.5f);
    NoiseParams params;
    params.gain_db = 24.0;
    params.seed = 31337;
    const RawImage noisy = add_noise(raw, params);

    const double n = double(noisy.data.size());
    CHECK(n >= 1e5);
    const double s2 = testutil::variance(noisy.data);
    const double sigma2 = noise_variance(0.5, params);
    const double z = (s2 / sigma2 - 1.0) * std::sqrt(n / 2.0);
    CHECK(std::abs(z) < 2.576);
}

TEST_CASE("42 dB variance stays consistent with the model after clip truncation") {
    const RawImage raw = make_raw(400, 256, CfaPattern::quad(), 0.5f);
    NoiseParams params;
    params.gain_db = 42.0;
    params.seed = 31337;
    const RawImage noisy = add_noise(raw, params);

    // Clipping sits ~2.8 sigma out; trim the rails and compare against the
    // symmetric truncated-normal variance sigma^2 * (1 - 2 z0 phi(z0) / (2 Phi(z0) - 1)).
    std::vector<float> kept;
    for (float v : noisy.data)
        if (v > 0.0f && v < 1.0f)
            kept.push_back(v);
    const double sigma2 = noise_variance(0.5, params);
    const double z0 = 0.5 / std::sqrt(sigma2);
    const double phi = std::exp(-0.5 * z0 * z0) / std::sqrt(2.0 * 3.14159265358979323846);
    const double big_phi = 0.5 * (1.0 + std::erf(z0 / std::sqrt(2.0)));
    const double trunc_factor = 1.0 - 2.0 * z0 * phi / (2.0 * big_phi - 1.0);
    const double s2 = testutil::variance(kept);
    CHECK(s2 == doctest::Approx(sigma2 * trunc_factor).epsilon(0.02));
}

TEST_CASE("add_noise rejects negative coefficients and non-clean sources") {
    const RawImage raw = make_raw(8, 8, CfaPattern::quad(), 0.5f);
    NoiseParams params;
    params.gain_db = 24.0;
    params.k_shot = -1.0;
    CHECK_THROWS_AS(add_noise(raw, params), ConfigError);

    params.k_shot = 2.5e-4;
    RawImage tagged = raw;
    tagged.gain_db = 24.0;
    CHECK_THROWS_AS(add_noise(tagged, params), InvalidInput);
}

TEST_CASE("generate_scene: one pair per gain, all sharing one clean gt") {
    const RgbImage rgb = testutil::synthetic_scene(16, 16, 1);
    const double gains[] = {0.0, 24.0, 42.0};
    NoiseParams base;
    base.seed = 5;
    const auto pairs = generate_scene(rgb, gains, base, "s01");
    REQUIRE(pairs.size() == 3);
    for (const auto& pair : pairs) {
        CHECK(pair.gt_bayer.data == pairs[0].gt_bayer.data);
        CHECK(pair.gt_bayer.gain_db == 0.0);
        CHECK(pair.scene_id == "s01");
        CHECK(pair.input_quad.width == pair.gt_bayer.width);
        CHECK(pair.input_quad.height == pair.gt_bayer.height);
    }
    CHECK(pairs[0].input_quad.gain_db == 0.0);
    CHECK(pairs[1].input_quad.gain_db == 24.0);
    CHECK(pairs[2].input_quad.gain_db == 42.0);
}

TEST_CASE("generate_scene: 0 dB input agrees with gt wherever CFA colors coincide") {
    const RgbImage rgb = testutil::synthetic_scene(16, 16, 2);
    const double gains[] = {0.0};
    const auto pairs = generate_scene(rgb, gains, {}, "s");
    const auto& quad = pairs[0].input_quad;
    const auto& gt = pairs[0].gt_bayer;
    int shared = 0;
    for (int r = 0; r < quad.height; ++r)
        for (int c = 0; c < quad.width; ++c)
            if (quad.pattern.color_at(r, c) == gt.pattern.color_at(r, c)) {
                CHECK(quad.at(r, c) == gt.at(r, c));
                ++shared;
            }
    CHECK(shared == quad.width * quad.height * 6 / 16); // 6 of 16 phases coincide
}

TEST_CASE("generate_scene: empty gains list gives empty output") {
    const RgbImage rgb = make_rgb(8, 8, 0.5f, 0.5f, 0.5f);
    CHECK(generate_scene(rgb, {}, {}, "s").empty());
}

TEST_CASE("generate_scene: gt is independent of the gains list") {
    const RgbImage rgb = testutil::synthetic_scene(16, 16, 3);
    NoiseParams base;
    base.seed = 8;
    const double ab[] = {0.0, 24.0};
    const double c[] = {42.0};
    const auto first = generate_scene(rgb, ab, base, "x");
    const auto second = generate_scene(rgb, c, base, "x");
    CHECK(first[0].gt_bayer.data == second[0].gt_bayer.data);
}

TEST_CASE("replicate_capture_chain halves the resolution (2400x3600 -> 1200x1800)") {
    const RawImage captured = testutil::random_raw(3600, 2400, CfaPattern::quad(), 17);
    const auto [input_quad, gt_bayer] = replicate_capture_chain(captured);
    CHECK(input_quad.width == 1800);
    CHECK(input_quad.height == 1200);
    CHECK(gt_bayer.width == 1800);
    CHECK(gt_bayer.height == 1200);
    CHECK(input_quad.pattern.is_quad());
    CHECK(gt_bayer.pattern.is_bayer());
}

TEST_CASE("replicate_capture_chain on a constant capture yields constant mosaics") {
    const RawImage captured = make_raw(16, 16, CfaPattern::quad(), 0.4f);
    const auto [input_quad, gt_bayer] = replicate_capture_chain(captured);
    for (float v : input_quad.data)
        CHECK(v == doctest::Approx(0.4f));
    for (float v : gt_bayer.data)
        CHECK(v == doctest::Approx(0.4f));
}

TEST_CASE("replicate_capture_chain outputs agree where CFA colors coincide") {
    const RawImage captured = testutil::random_raw(16, 16, CfaPattern::quad(), 23);
    const auto [input_quad, gt_bayer] = replicate_capture_chain(captured);
    for (int r = 0; r < input_quad.height; ++r)
        for (int c = 0; c < input_quad.width; ++c)
            if (input_quad.pattern.color_at(r, c) == gt_bayer.pattern.color_at(r, c))
                CHECK(input_quad.at(r, c) == gt_bayer.at(r, c));
}

TEST_CASE("linear_gain uses the amplitude dB convention") {
    CHECK(linear_gain(0.0) == doctest::Approx(1.0));
    CHECK(linear_gain(20.0) == doctest::Approx(10.0));
    CHECK(linear_gain(24.0) == doctest::Approx(15.8489319).epsilon(1e-6));
    CHECK(linear_gain(42.0) == doctest::Approx(125.8925412).epsilon(1e-6));
}

TEST_CASE("noise_sigma_estimate is zero at 0 dB and the mid-gray sigma otherwise") {
    NoiseParams params;
    CHECK(noise_sigma_estimate(params) == 0.0);
    params.gain_db = 24.0;
    const double g = linear_gain(24.0);
    CHECK(noise_sigma_estimate(params) ==
          doctest::Approx(std::sqrt(params.k_shot * g * 0.5 + (params.k_read * g) * (params.k_read * g))));
}
