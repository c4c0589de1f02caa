// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace quadraw {

enum class RgbDomain { linear, gamma };

/// Three-plane image with values in [0,1]. The domain tag records whether the
/// planes hold scene-linear or gamma-encoded data.
struct RgbImage {
    int width = 0;
    int height = 0;
    RgbDomain domain = RgbDomain::linear;
    std::array<std::vector<float>, 3> planes; // R, G, B

    float at(int channel, int row, int col) const {
        return planes[channel][static_cast<size_t>(row) * width + col];
    }
    float& at(int channel, int row, int col) {
        return planes[channel][static_cast<size_t>(row) * width + col];
    }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

RgbImage make_rgb(int width, int height, float r = 0.0f, float g = 0.0f, float b = 0.0f,
                  RgbDomain domain = RgbDomain::linear);

} // namespace quadraw
