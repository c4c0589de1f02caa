// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/raw_image.hpp"
#include "quadraw/rgb_image.hpp"

#include <array>
#include <string>

namespace quadraw {

enum class DemosaicMethod { bilinear, malvar };
enum class GammaCurve { srgb, power };

DemosaicMethod demosaic_from_name(std::string_view name);
std::string to_string(DemosaicMethod m);

/// Reference ISP: demosaic -> white balance -> gamma. Deliberately minimal;
/// the full block set is recorded in every metrics report fingerprint.
struct IspConfig {
    DemosaicMethod demosaic = DemosaicMethod::malvar;
    std::array<double, 3> wb_gains = {1.0, 1.0, 1.0};
    GammaCurve gamma = GammaCurve::srgb;
    double gamma_exponent = 2.2; // power curve only; encodes v^(1/gamma_exponent)
    bool clip = true;
};

/// Interpolates an RGGB Bayer mosaic to full RGB in the linear domain. Both
/// methods copy the sampled channel unchanged at its own CFA sites and use
/// whole-sample mirroring at the borders.
RgbImage demosaic(const RawImage& bayer, DemosaicMethod method, bool clip = true);

RgbImage white_balance(const RgbImage& rgb, const std::array<double, 3>& gains, bool clip = true);

/// Linear -> gamma. sRGB uses the standard piecewise curve; power encodes
/// v^(1/exponent). Throws if the input is already gamma-encoded.
RgbImage gamma_encode(const RgbImage& rgb, GammaCurve curve, double exponent = 2.2);

/// Gamma -> linear inverse of gamma_encode.
RgbImage gamma_decode(const RgbImage& rgb, GammaCurve curve, double exponent = 2.2);

RgbImage run_isp(const RawImage& bayer, const IspConfig& cfg);

} // namespace quadraw
