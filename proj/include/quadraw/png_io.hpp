// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/rgb_image.hpp"

#include <filesystem>

namespace quadraw {

/// Decodes an 8/16-bit grayscale, RGB, or RGBA PNG (alpha dropped) into an
/// RgbImage with values scaled to [0,1]. The result is tagged gamma-domain:
/// PNG pixel data is display-referred unless the caller knows otherwise.
RgbImage read_png(const std::filesystem::path& path);

/// Encodes as 16-bit RGB PNG, rounding v*65535.
void write_png16(const RgbImage& rgb, const std::filesystem::path& path);

} // namespace quadraw
