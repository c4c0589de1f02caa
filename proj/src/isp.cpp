// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/isp.hpp"

#include <algorithm>
#include <cmath>

namespace quadraw {

RgbImage make_rgb(int width, int height, float r, float g, float b, RgbDomain domain) {
    RgbImage rgb;
    rgb.width = width;
    rgb.height = height;
    rgb.domain = domain;
    const size_t n = static_cast<size_t>(width) * height;
    rgb.planes[0].assign(n, r);
    rgb.planes[1].assign(n, g);
    rgb.planes[2].assign(n, b);
    return rgb;
}

DemosaicMethod demosaic_from_name(std::string_view name) {
    if (name == "bilinear")
        return DemosaicMethod::bilinear;
    if (name == "malvar")
        return DemosaicMethod::malvar;
    throw NotFoundError("unknown demosaic method \"" + std::string(name) +
                        "\"; expected \"bilinear\" or \"malvar\"");
}

std::string to_string(DemosaicMethod m) {
    return m == DemosaicMethod::bilinear ? "bilinear" : "malvar";
}

namespace {

inline float clip01(double v) {
    return static_cast<float>(std::clamp(v, 0.0, 1.0));
}

// 5x5 gradient-corrected interpolation kernels, eighths.
// G estimated at an R or B site.
constexpr double kGreenAtChroma[5][5] = {
    {0, 0, -1, 0, 0},
    {0, 0, 2, 0, 0},
    {-1, 2, 4, 2, -1},
    {0, 0, 2, 0, 0},
    {0, 0, -1, 0, 0},
};
// Chroma at a G site whose same-color neighbors sit left/right.
constexpr double kChromaRow[5][5] = {
    {0, 0, 0.5, 0, 0},
    {0, -1, 0, -1, 0},
    {-1, 4, 5, 4, -1},
    {0, -1, 0, -1, 0},
    {0, 0, 0.5, 0, 0},
};
// Chroma at a G site whose same-color neighbors sit above/below.
constexpr double kChromaCol[5][5] = {
    {0, 0, -1, 0, 0},
    {0, -1, 4, -1, 0},
    {0.5, 0, 5, 0, 0.5},
    {0, -1, 4, -1, 0},
    {0, 0, -1, 0, 0},
};
// Chroma at the opposite chroma site (R at B, B at R).
constexpr double kChromaDiag[5][5] = {
    {0, 0, -1.5, 0, 0},
    {0, 2, 0, 2, 0},
    {-1.5, 0, 6, 0, -1.5},
    {0, 2, 0, 2, 0},
    {0, 0, -1.5, 0, 0},
};

double stencil5(const RawImage& raw, int row, int col, const double (&k)[5][5]) {
    double acc = 0.0;
    for (int dr = -2; dr <= 2; ++dr) {
        const int r = mirror_index(row + dr, raw.height);
        for (int dc = -2; dc <= 2; ++dc) {
            const double w = k[dr + 2][dc + 2];
            if (w == 0.0)
                continue;
            acc += w * raw.at(r, mirror_index(col + dc, raw.width));
        }
    }
    return acc * 0.125;
}

inline double mirrored(const RawImage& raw, int row, int col) {
    return raw.at(mirror_index(row, raw.height), mirror_index(col, raw.width));
}

RgbImage demosaic_bilinear(const RawImage& raw, bool clip) {
    RgbImage rgb = make_rgb(raw.width, raw.height);
    for (int r = 0; r < raw.height; ++r) {
        for (int c = 0; c < raw.width; ++c) {
            const double v = raw.at(r, c);
            const double cardinal =
                0.25 * (mirrored(raw, r - 1, c) + mirrored(raw, r + 1, c) +
                        mirrored(raw, r, c - 1) + mirrored(raw, r, c + 1));
            const double diagonal =
                0.25 * (mirrored(raw, r - 1, c - 1) + mirrored(raw, r - 1, c + 1) +
                        mirrored(raw, r + 1, c - 1) + mirrored(raw, r + 1, c + 1));
            const double horizontal = 0.5 * (mirrored(raw, r, c - 1) + mirrored(raw, r, c + 1));
            const double vertical = 0.5 * (mirrored(raw, r - 1, c) + mirrored(raw, r + 1, c));

            double red, green, blue;
            if ((r & 1) == 0 && (c & 1) == 0) { // R site
                red = v;
                green = cardinal;
                blue = diagonal;
            } else if ((r & 1) == 1 && (c & 1) == 1) { // B site
                blue = v;
                green = cardinal;
                red = diagonal;
            } else if ((r & 1) == 0) { // G on R row
                green = v;
                red = horizontal;
                blue = vertical;
            } else { // G on B row
                green = v;
                red = vertical;
                blue = horizontal;
            }
            const size_t idx = static_cast<size_t>(r) * raw.width + c;
            rgb.planes[0][idx] = clip ? clip01(red) : static_cast<float>(red);
            rgb.planes[1][idx] = clip ? clip01(green) : static_cast<float>(green);
            rgb.planes[2][idx] = clip ? clip01(blue) : static_cast<float>(blue);
        }
    }
    return rgb;
}

RgbImage demosaic_malvar(const RawImage& raw, bool clip) {
    RgbImage rgb = make_rgb(raw.width, raw.height);
    for (int r = 0; r < raw.height; ++r) {
        for (int c = 0; c < raw.width; ++c) {
            const double v = raw.at(r, c);
            double red, green, blue;
            if ((r & 1) == 0 && (c & 1) == 0) { // R site
                red = v;
                green = stencil5(raw, r, c, kGreenAtChroma);
                blue = stencil5(raw, r, c, kChromaDiag);
            } else if ((r & 1) == 1 && (c & 1) == 1) { // B site
                blue = v;
                green = stencil5(raw, r, c, kGreenAtChroma);
                red = stencil5(raw, r, c, kChromaDiag);
            } else if ((r & 1) == 0) { // G on R row: R left/right, B above/below
                green = v;
                red = stencil5(raw, r, c, kChromaRow);
                blue = stencil5(raw, r, c, kChromaCol);
            } else { // G on B row: B left/right, R above/below
                green = v;
                red = stencil5(raw, r, c, kChromaCol);
                blue = stencil5(raw, r, c, kChromaRow);
            }
            const size_t idx = static_cast<size_t>(r) * raw.width + c;
            rgb.planes[0][idx] = clip ? clip01(red) : static_cast<float>(red);
            rgb.planes[1][idx] = clip ? clip01(green) : static_cast<float>(green);
            rgb.planes[2][idx] = clip ? clip01(blue) : static_cast<float>(blue);
        }
    }
    return rgb;
}

} // namespace

RgbImage demosaic(const RawImage& bayer, DemosaicMethod method, bool clip) {
    validate_raw(bayer);
    if (!bayer.pattern.is_bayer())
        throw PatternMismatch("demosaic expects an rggb mosaic, got " + bayer.pattern.name());
    return method == DemosaicMethod::bilinear ? demosaic_bilinear(bayer, clip)
                                              : demosaic_malvar(bayer, clip);
}

RgbImage white_balance(const RgbImage& rgb, const std::array<double, 3>& gains, bool clip) {
    if (rgb.domain != RgbDomain::linear)
        throw InvalidInput("white balance operates on linear-domain images");
    for (double g : gains)
        if (!(g > 0.0))
            throw ConfigError("white balance gains must be positive");

    RgbImage out = rgb;
    for (int ch = 0; ch < 3; ++ch) {
        const double g = gains[ch];
        for (auto& v : out.planes[ch]) {
            const double scaled = g * v;
            v = clip ? clip01(scaled) : static_cast<float>(scaled);
        }
    }
    return out;
}

namespace {

inline double srgb_forward(double v) {
    v = std::max(v, 0.0);
    return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

inline double srgb_inverse(double v) {
    v = std::max(v, 0.0);
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

} // namespace

RgbImage gamma_encode(const RgbImage& rgb, GammaCurve curve, double exponent) {
    if (rgb.domain != RgbDomain::linear)
        throw InvalidInput("gamma_encode expects a linear-domain image");
    if (curve == GammaCurve::power && !(exponent > 0.0))
        throw ConfigError("gamma exponent must be positive");

    RgbImage out = rgb;
    out.domain = RgbDomain::gamma;
    const double inv = curve == GammaCurve::power ? 1.0 / exponent : 0.0;
    for (auto& plane : out.planes)
        for (auto& v : plane)
            v = static_cast<float>(curve == GammaCurve::srgb ? srgb_forward(v)
                                                             : std::pow(std::max(0.0, (double)v), inv));
    return out;
}

RgbImage gamma_decode(const RgbImage& rgb, GammaCurve curve, double exponent) {
    if (rgb.domain != RgbDomain::gamma)
        throw InvalidInput("gamma_decode expects a gamma-domain image");
    if (curve == GammaCurve::power && !(exponent > 0.0))
        throw ConfigError("gamma exponent must be positive");

    RgbImage out = rgb;
    out.domain = RgbDomain::linear;
    for (auto& plane : out.planes)
        for (auto& v : plane)
            v = static_cast<float>(curve == GammaCurve::srgb
                                       ? srgb_inverse(v)
                                       : std::pow(std::max(0.0, (double)v), exponent));
    return out;
}

RgbImage run_isp(const RawImage& bayer, const IspConfig& cfg) {
    RgbImage rgb = demosaic(bayer, cfg.demosaic, cfg.clip);
    rgb = white_balance(rgb, cfg.wb_gains, cfg.clip);
    return gamma_encode(rgb, cfg.gamma, cfg.gamma_exponent);
}

} // namespace quadraw
