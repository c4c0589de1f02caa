// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/raw_image.hpp"

#include <algorithm>
#include <sstream>

namespace quadraw {

char to_char(CfaColor c) {
    switch (c) {
    case CfaColor::R: return 'R';
    case CfaColor::G: return 'G';
    default: return 'B';
    }
}

CfaPattern CfaPattern::bayer_rggb() {
    constexpr auto R = CfaColor::R, G = CfaColor::G, B = CfaColor::B;
    std::array<CfaColor, 16> tile{};
    tile[0] = R; tile[1] = G;
    tile[2] = G; tile[3] = B;
    return CfaPattern(2, tile);
}

CfaPattern CfaPattern::quad() {
    constexpr auto R = CfaColor::R, G = CfaColor::G, B = CfaColor::B;
    const std::array<CfaColor, 16> tile = {
        R, R, G, G,
        R, R, G, G,
        G, G, B, B,
        G, G, B, B,
    };
    return CfaPattern(4, tile);
}

CfaPattern CfaPattern::from_name(std::string_view name) {
    if (name == "rggb")
        return bayer_rggb();
    if (name == "quad4")
        return quad();
    throw NotFoundError("unknown CFA pattern \"" + std::string(name) + "\"; expected \"rggb\" or \"quad4\"");
}

RawImage make_raw(int width, int height, const CfaPattern& pattern, float fill) {
    RawImage raw;
    raw.width = width;
    raw.height = height;
    raw.pattern = pattern;
    raw.data.assign(static_cast<size_t>(width) * height, fill);
    validate_raw(raw);
    return raw;
}

void validate_raw(const RawImage& raw) {
    const int p = raw.pattern.period();
    if (raw.width <= 0 || raw.height <= 0)
        throw InvalidInput("raw image dimensions must be positive");
    if (raw.width % p != 0 || raw.height % p != 0) {
        std::ostringstream os;
        os << "raw image dimensions " << raw.width << "x" << raw.height
           << " are not multiples of the CFA period " << p;
        throw InvalidInput(os.str());
    }
    if (raw.data.size() != raw.pixel_count())
        throw InvalidInput("raw image buffer length does not match width*height");
}

ColorPlaneSet decompose_planes(const RawImage& raw) {
    validate_raw(raw);
    const int p = raw.pattern.period();

    ColorPlaneSet set;
    set.plane_width = raw.width / p;
    set.plane_height = raw.height / p;
    set.pattern = raw.pattern;
    set.black_level = raw.black_level;
    set.white_level = raw.white_level;
    set.gain_db = raw.gain_db;
    set.planes.resize(static_cast<size_t>(p) * p);
    set.origin_offsets.resize(static_cast<size_t>(p) * p);

    for (int pr = 0; pr < p; ++pr) {
        for (int pc = 0; pc < p; ++pc) {
            const size_t k = static_cast<size_t>(pr) * p + pc;
            set.origin_offsets[k] = {pr, pc};
            auto& plane = set.planes[k];
            plane.resize(static_cast<size_t>(set.plane_width) * set.plane_height);
            for (int i = 0; i < set.plane_height; ++i)
                for (int j = 0; j < set.plane_width; ++j)
                    plane[static_cast<size_t>(i) * set.plane_width + j] = raw.at(i * p + pr, j * p + pc);
        }
    }
    return set;
}

RawImage recompose_planes(const ColorPlaneSet& set) {
    const int p = set.pattern.period();
    const size_t expected = static_cast<size_t>(p) * p;
    if (set.planes.size() != expected || set.origin_offsets.size() != expected)
        throw InvalidInput("plane set must hold period^2 planes with matching offsets");
    const size_t plane_pixels = static_cast<size_t>(set.plane_width) * set.plane_height;
    for (const auto& plane : set.planes)
        if (plane.size() != plane_pixels)
            throw InvalidInput("inconsistent plane sizes in plane set");

    RawImage raw = make_raw(set.plane_width * p, set.plane_height * p, set.pattern);
    raw.black_level = set.black_level;
    raw.white_level = set.white_level;
    raw.gain_db = set.gain_db;

    for (size_t k = 0; k < set.planes.size(); ++k) {
        const auto [pr, pc] = set.origin_offsets[k];
        if (pr < 0 || pr >= p || pc < 0 || pc >= p)
            throw InvalidInput("plane offset outside CFA tile");
        const auto& plane = set.planes[k];
        for (int i = 0; i < set.plane_height; ++i)
            for (int j = 0; j < set.plane_width; ++j)
                raw.at(i * p + pr, j * p + pc) = plane[static_cast<size_t>(i) * set.plane_width + j];
    }
    return raw;
}

namespace {

// Middle-column/middle-row swap inside each 4x4 unit, as an index permutation.
constexpr int kSwapPerm[4] = {0, 2, 1, 3};

RawImage swap_units(const RawImage& raw, const CfaPattern& out_pattern) {
    RawImage out = raw;
    out.pattern = out_pattern;
    for (int r = 0; r < raw.height; ++r) {
        const int src_r = (r & ~3) + kSwapPerm[r & 3];
        for (int c = 0; c < raw.width; ++c) {
            const int src_c = (c & ~3) + kSwapPerm[c & 3];
            out.at(r, c) = raw.at(src_r, src_c);
        }
    }
    return out;
}

} // namespace

RawImage quad_swap(const RawImage& raw) {
    validate_raw(raw);
    if (!raw.pattern.is_quad())
        throw PatternMismatch("quad_swap expects a quad4 mosaic, got " + raw.pattern.name());
    return swap_units(raw, CfaPattern::bayer_rggb());
}

RawImage quad_unswap(const RawImage& raw) {
    validate_raw(raw);
    if (!raw.pattern.is_bayer())
        throw PatternMismatch("quad_unswap expects an rggb mosaic, got " + raw.pattern.name());
    if (raw.width % 4 != 0 || raw.height % 4 != 0)
        throw InvalidInput("quad_unswap needs dimensions divisible by 4");
    return swap_units(raw, CfaPattern::quad());
}

namespace {

// Color of the transformed (pre-unification) mosaic at (row, col), given that
// the source mosaic had canonical phase.
CfaColor transformed_color(const RawImage& src, const GeomTransform& t, int row, int col) {
    switch (t.kind) {
    case GeomTransform::Kind::crop:
        return src.pattern.color_at(t.rect.row + row, t.rect.col + col);
    case GeomTransform::Kind::flip_h:
        return src.pattern.color_at(row, src.width - 1 - col);
    case GeomTransform::Kind::flip_v:
        return src.pattern.color_at(src.height - 1 - row, col);
    default: // transpose
        return src.pattern.color_at(col, row);
    }
}

float transformed_value(const RawImage& src, const GeomTransform& t, int row, int col) {
    switch (t.kind) {
    case GeomTransform::Kind::crop:
        return src.at(t.rect.row + row, t.rect.col + col);
    case GeomTransform::Kind::flip_h:
        return src.at(row, src.width - 1 - col);
    case GeomTransform::Kind::flip_v:
        return src.at(src.height - 1 - row, col);
    default:
        return src.at(col, row);
    }
}

} // namespace

RawImage apply_transform(const RawImage& raw, const GeomTransform& t) {
    validate_raw(raw);
    const int p = raw.pattern.period();

    int th = 0, tw = 0; // transformed (pre-unification) size
    switch (t.kind) {
    case GeomTransform::Kind::crop: {
        const auto& r = t.rect;
        if (r.row < 0 || r.col < 0 || r.height <= 0 || r.width <= 0 ||
            r.row + r.height > raw.height || r.col + r.width > raw.width)
            throw InvalidInput("crop rectangle outside image bounds");
        th = r.height;
        tw = r.width;
        break;
    }
    case GeomTransform::Kind::transpose:
        th = raw.width;
        tw = raw.height;
        break;
    default:
        th = raw.height;
        tw = raw.width;
        break;
    }

    // Find the phase-unification offset: smallest (dr, dc) in [0,p)^2 such
    // that the transformed mosaic read from there matches the canonical tile.
    int dr = -1, dc = -1;
    for (int r0 = 0; r0 < p && dr < 0; ++r0) {
        for (int c0 = 0; c0 < p && dr < 0; ++c0) {
            bool match = true;
            for (int i = 0; i < p && match; ++i)
                for (int j = 0; j < p && match; ++j)
                    match = transformed_color(raw, t, r0 + i, c0 + j) == raw.pattern.color_at(i, j);
            if (match) {
                dr = r0;
                dc = c0;
            }
        }
    }
    if (dr < 0)
        throw InvalidInput("transform result cannot be unified to the canonical CFA phase");

    const int out_h = ((th - dr) / p) * p;
    const int out_w = ((tw - dc) / p) * p;
    if (out_h <= 0 || out_w <= 0)
        throw InvalidInput("image too small after CFA phase unification");

    RawImage out = make_raw(out_w, out_h, raw.pattern);
    out.black_level = raw.black_level;
    out.white_level = raw.white_level;
    out.gain_db = raw.gain_db;
    for (int r = 0; r < out_h; ++r)
        for (int c = 0; c < out_w; ++c)
            out.at(r, c) = transformed_value(raw, t, dr + r, dc + c);
    return out;
}

} // namespace quadraw
