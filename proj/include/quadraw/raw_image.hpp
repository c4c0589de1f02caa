// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/error.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace quadraw {

enum class CfaColor : uint8_t { R = 0, G = 1, B = 2 };

char to_char(CfaColor c);

/// Periodic color filter array layout. Supports the 2x2 Bayer RGGB tile and
/// the 4x4 Quad tile (each Bayer cell expanded into a 2x2 block of the same
/// color):
///
///   rggb:    R G        quad4:   R R G G
///            G B                 R R G G
///                                G G B B
///                                G G B B
class CfaPattern {
public:
    CfaPattern() : CfaPattern(bayer_rggb()) {}

    static CfaPattern bayer_rggb();
    static CfaPattern quad();
    static CfaPattern from_name(std::string_view name);

    int period() const { return period_; }
    bool is_bayer() const { return period_ == 2; }
    bool is_quad() const { return period_ == 4; }

    /// Color at absolute image coordinates (row, col); wraps by the period.
    CfaColor color_at(int row, int col) const {
        return tile_[static_cast<size_t>(mod(row)) * period_ + mod(col)];
    }

    std::string name() const { return period_ == 2 ? "rggb" : "quad4"; }

    bool operator==(const CfaPattern&) const = default;

private:
    CfaPattern(int period, std::array<CfaColor, 16> tile) : period_(period), tile_(tile) {}

    int mod(int i) const {
        int m = i % period_;
        return m < 0 ? m + period_ : m;
    }

    int period_;
    std::array<CfaColor, 16> tile_;
};

/// Single-plane mosaic frame. Intensities are stored normalized to [0,1];
/// black/white levels are metadata so integer DN round trips stay exact.
/// gain_db is a provenance tag: 0 means no synthetic noise was added.
struct RawImage {
    int width = 0;
    int height = 0;
    CfaPattern pattern;
    std::vector<float> data; // row-major, width*height
    double black_level = 0.0;
    double white_level = 1023.0;
    double gain_db = 0.0;

    float at(int row, int col) const { return data[static_cast<size_t>(row) * width + col]; }
    float& at(int row, int col) { return data[static_cast<size_t>(row) * width + col]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

RawImage make_raw(int width, int height, const CfaPattern& pattern, float fill = 0.0f);

/// Throws InvalidInput unless dimensions are positive multiples of the CFA
/// period and the buffer length matches.
void validate_raw(const RawImage& raw);

/// The period^2 single-phase sub-images of a mosaic (pixel-unshuffle).
/// Plane k collects the samples at phase origin_offsets[k]; recomposition is
/// bit-exact.
struct ColorPlaneSet {
    int plane_width = 0;
    int plane_height = 0;
    CfaPattern pattern;
    std::vector<std::vector<float>> planes;
    std::vector<std::pair<int, int>> origin_offsets; // (row, col) phase per plane
    double black_level = 0.0;
    double white_level = 1023.0;
    double gain_db = 0.0;
};

ColorPlaneSet decompose_planes(const RawImage& raw);
RawImage recompose_planes(const ColorPlaneSet& planes);

/// Rearranges each 4x4 Quad unit into Bayer RGGB by swapping the two middle
/// columns and then the two middle rows. Value-preserving, no interpolation.
RawImage quad_swap(const RawImage& raw);

/// Inverse of quad_swap: same (self-inverse) permutation applied to a
/// full-resolution Bayer frame, restoring the Quad layout tag.
RawImage quad_unswap(const RawImage& raw);

struct CropRect {
    int row = 0;
    int col = 0;
    int height = 0;
    int width = 0;
};

/// CFA-phase-preserving geometric transform. The mosaic is transformed and
/// then cropped by 0..period-1 leading rows/cols so the output phase is the
/// canonical pattern again; dimensions are truncated to period multiples.
struct GeomTransform {
    enum class Kind { crop, flip_h, flip_v, transpose };

    Kind kind = Kind::flip_h;
    CropRect rect; // crop only

    static GeomTransform crop(CropRect r) { return {Kind::crop, r}; }
    static GeomTransform flip_h() { return {Kind::flip_h, {}}; }
    static GeomTransform flip_v() { return {Kind::flip_v, {}}; }
    static GeomTransform transpose() { return {Kind::transpose, {}}; }
};

RawImage apply_transform(const RawImage& raw, const GeomTransform& t);

/// Whole-sample mirror reflection of an out-of-range index into [0, n).
inline int mirror_index(int i, int n) {
    if (n == 1)
        return 0;
    int period = 2 * (n - 1);
    i = i % period;
    if (i < 0)
        i += period;
    return i < n ? i : period - i;
}

} // namespace quadraw
